#include "powsum/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace powsum {
namespace {

struct SymbolTable {
  std::shared_mutex mutex;
  std::deque<std::string> names;  // deque keeps references stable
  std::unordered_map<std::string_view, std::uint32_t> index;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& t = table();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.index.find(name); it != t.index.end()) return Symbol(it->second);
  }
  std::unique_lock lock(t.mutex);
  if (auto it = t.index.find(name); it != t.index.end()) return Symbol(it->second);
  const auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.index.emplace(t.names.back(), id);
  return Symbol(id);
}

const std::string& Symbol::name() const {
  static const std::string invalid = "<invalid>";
  if (!valid()) return invalid;
  auto& t = table();
  std::shared_lock lock(t.mutex);
  return t.names[id_];
}

}  // namespace powsum
