#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace powsum {

/// Arbitrary-precision integer used for every coefficient, bound and value.
using Int = boost::multiprecision::cpp_int;
using IntVec = std::vector<Int>;
using IntMatrix = std::vector<IntVec>;

inline std::string to_string(const Int& v) { return v.str(); }

// Rounding division; the divisor must be nonzero.
Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
// Non-negative remainder of a modulo |m|.
Int mod_floor(const Int& a, const Int& m);
Int gcd(const Int& a, const Int& b);
Int pow(const Int& base, unsigned exponent);

/// Narrowing that reports whether the value fits.
std::optional<std::int64_t> to_int64(const Int& v);

/// Number of bits needed to write |v| (0 for 0).
std::size_t bit_length(const Int& v);

}  // namespace powsum
