#include "powsum/int.hpp"

#include <limits>

namespace powsum {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  if (r != 0 && ((r < 0) == (b < 0))) ++q;
  return q;
}

Int mod_floor(const Int& a, const Int& m) {
  Int mm = abs(m);
  Int r = a % mm;
  if (r < 0) r += mm;
  return r;
}

Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

Int pow(const Int& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

std::optional<std::int64_t> to_int64(const Int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) return std::nullopt;
  return v.convert_to<std::int64_t>();
}

std::size_t bit_length(const Int& v) {
  if (v == 0) return 0;
  return boost::multiprecision::msb(abs(v)) + 1;
}

}  // namespace powsum
