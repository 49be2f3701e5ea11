#include "powsum/semilinear.hpp"

#include <algorithm>
#include <set>

namespace powsum {

namespace {

void sort_unique(std::vector<IntVec>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Symbol> sorted_variables(const QfpaFormula& f) {
  auto vars = f.variables();
  std::vector<Symbol> out(vars.begin(), vars.end());
  std::sort(out.begin(), out.end(), ByName{});
  return out;
}

}  // namespace

bool cube_may_be_satisfiable(const Cube& cube) {
  std::set<Symbol> vars;
  for (const auto& a : cube) {
    for (const auto& [s, c] : a.lhs.coefficients()) vars.insert(s);
    for (const auto& [s, c] : a.rhs.coefficients()) vars.insert(s);
  }
  return !quick_infeasible(atoms_to_system(cube, std::vector<Symbol>(vars.begin(), vars.end())));
}

SemilinearSet semilinear_nf(const QfpaFormula& f, const std::vector<Symbol>& vars, const SemilinearOptions& options) {
  SemilinearSet out;
  out.arity = vars.size();
  DnfOptions dnf;
  dnf.max_cubes = options.max_cubes;
  dnf.keep = cube_may_be_satisfiable;
  for (const auto& cube : to_dnf(f, dnf)) {
    HybridLinearSet full = solution_set(atoms_to_system(cube, vars), options.hilbert);
    if (full.bases.empty()) continue;
    HybridLinearSet h;
    for (auto& b : full.bases) {
      b.resize(out.arity);
      h.bases.push_back(std::move(b));
    }
    for (auto& p : full.periods) {
      p.resize(out.arity);
      if (std::any_of(p.begin(), p.end(), [](const Int& v) { return v != 0; })) h.periods.push_back(std::move(p));
    }
    sort_unique(h.bases);
    sort_unique(h.periods);
    out.components.push_back(std::move(h));
  }
  return out;
}

bool member(const SemilinearSet& s, const IntVec& x, const IlpOptions& options) {
  if (x.size() != s.arity) throw std::invalid_argument("member: arity mismatch");
  for (const auto& comp : s.components) {
    for (const auto& a : comp.bases) {
      IntVec d(s.arity);
      bool negative = false;
      for (std::size_t i = 0; i < s.arity; ++i) {
        d[i] = x[i] - a[i];
        if (d[i] < 0) negative = true;
      }
      if (negative) continue;
      NatSystem sys(comp.periods.size());
      for (std::size_t i = 0; i < s.arity; ++i) {
        IntVec row(comp.periods.size());
        for (std::size_t j = 0; j < comp.periods.size(); ++j) row[j] = comp.periods[j][i];
        sys.add_eq(std::move(row), d[i]);
      }
      auto r = ilp_feasible(sys, options);
      if (r.status == IlpStatus::ResourceLimit) throw ResourceLimitExceeded("member: ILP node cap reached");
      if (r.status == IlpStatus::Feasible) return true;
    }
  }
  return false;
}

QfpaSatResult qfpa_sat(const QfpaFormula& f, const SemilinearOptions& options) {
  QfpaSatResult out;
  const auto vars = sorted_variables(f);
  DnfOptions dnf;
  dnf.max_cubes = options.max_cubes;
  dnf.keep = cube_may_be_satisfiable;
  std::vector<Cube> cubes;
  try {
    cubes = to_dnf(f, dnf);
  } catch (const SizeLimitExceeded& e) {
    out.status = SatStatus::ResourceLimit;
    out.diagnostic = e.what();
    return out;
  }
  bool limited = false;
  for (const auto& cube : cubes) {
    auto r = ilp_feasible(atoms_to_system(cube, vars), options.ilp);
    if (r.status == IlpStatus::ResourceLimit) {
      limited = true;
      out.diagnostic = "ILP node cap reached on a cube";
      continue;
    }
    if (r.status == IlpStatus::Infeasible) continue;
    out.status = SatStatus::Sat;
    for (std::size_t i = 0; i < vars.size(); ++i) out.model[vars[i]] = r.solution[i];
    return out;
  }
  out.status = limited ? SatStatus::ResourceLimit : SatStatus::Unsat;
  return out;
}

}  // namespace powsum
