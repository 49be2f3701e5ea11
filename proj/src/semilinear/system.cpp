#include "powsum/semilinear.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace powsum {

void NatSystem::add_eq(IntVec row, Int rhs) {
  if (row.size() != arity) throw std::invalid_argument("row width differs from system arity");
  eq.push_back(std::move(row));
  eq_rhs.push_back(std::move(rhs));
}

void NatSystem::add_le(IntVec row, Int rhs) {
  if (row.size() != arity) throw std::invalid_argument("row width differs from system arity");
  le.push_back(std::move(row));
  le_rhs.push_back(std::move(rhs));
}

bool NatSystem::homogeneous() const {
  auto zero = [](const Int& v) { return v == 0; };
  return std::all_of(eq_rhs.begin(), eq_rhs.end(), zero) && std::all_of(le_rhs.begin(), le_rhs.end(), zero);
}

namespace {

Int dot(const IntVec& a, const IntVec& x) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && x[i] != 0) s += a[i] * x[i];
  return s;
}

}  // namespace

bool NatSystem::satisfied_by(const IntVec& x) const {
  if (x.size() != arity) return false;
  for (const auto& v : x)
    if (v < 0) return false;
  for (std::size_t r = 0; r < eq.size(); ++r)
    if (dot(eq[r], x) != eq_rhs[r]) return false;
  for (std::size_t r = 0; r < le.size(); ++r)
    if (dot(le[r], x) > le_rhs[r]) return false;
  return true;
}

NatSystem NatSystem::homogenized() const {
  NatSystem h = *this;
  for (auto& b : h.eq_rhs) b = 0;
  for (auto& b : h.le_rhs) b = 0;
  return h;
}

NatSystem atoms_to_system(const Cube& cube, const std::vector<Symbol>& vars) {
  std::map<Symbol, std::size_t> column;
  for (std::size_t i = 0; i < vars.size(); ++i) column.emplace(vars[i], i);
  std::size_t mods = 0;
  for (const auto& a : cube) {
    if (a.kind == AtomKind::Neq) throw std::invalid_argument("atoms_to_system expects a negation-free cube");
    if (a.kind == AtomKind::Mod) ++mods;
  }

  NatSystem sys(vars.size() + 2 * mods);
  std::size_t next_slack = vars.size();
  for (const auto& a : cube) {
    const LinTerm d = a.lhs - a.rhs;
    IntVec row(sys.arity);
    for (const auto& [s, c] : d.coefficients()) {
      auto it = column.find(s);
      if (it == column.end()) throw std::invalid_argument("variable '" + s.name() + "' has no column");
      row[it->second] = c;
    }
    const Int rhs = -d.constant();
    auto negated = [&] {
      IntVec r = row;
      for (auto& v : r) v = -v;
      return r;
    };
    switch (a.kind) {
      case AtomKind::Eq: sys.add_eq(row, rhs); break;
      case AtomKind::Le: sys.add_le(row, rhs); break;
      case AtomKind::Lt: sys.add_le(row, rhs - 1); break;
      case AtomKind::Ge: sys.add_le(negated(), -rhs); break;
      case AtomKind::Gt: sys.add_le(negated(), -rhs - 1); break;
      case AtomKind::Mod:
        row[next_slack] = -a.modulus;
        row[next_slack + 1] = a.modulus;
        next_slack += 2;
        sys.add_eq(row, rhs);
        break;
      case AtomKind::Neq: break;
    }
  }
  return sys;
}

}  // namespace powsum
