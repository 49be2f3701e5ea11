#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace powsum {

/// Interned identifier. Two symbols are equal iff their names are equal.
/// The table is process-wide and append-only, so symbols are cheap to copy
/// and safe to share between threads.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != kInvalid; }

  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  static constexpr std::uint32_t kInvalid = UINT32_MAX;
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = kInvalid;
};

/// Orders by name rather than by interning order; used wherever output must
/// not depend on the order in which names were first seen.
struct ByName {
  bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

}  // namespace powsum

template <>
struct std::hash<powsum::Symbol> {
  std::size_t operator()(powsum::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
