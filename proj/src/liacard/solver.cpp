#include "powsum/liacard.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace powsum {

namespace {

DnfOptions dnf_options(std::size_t max_dnf) {
  DnfOptions o;
  o.max_cubes = max_dnf;
  o.keep = cube_may_be_satisfiable;
  return o;
}

std::size_t index_of(const std::vector<Symbol>& xs, Symbol s) {
  auto it = std::find(xs.begin(), xs.end(), s);
  if (it == xs.end()) throw std::invalid_argument("symbol '" + s.name() + "' missing from layout");
  return static_cast<std::size_t>(it - xs.begin());
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

}  // namespace

AtomLayout atom_layout(const StarAtom& a, std::size_t max_dnf) {
  AtomLayout l;
  l.columns = a.body_vars;
  std::vector<Symbol> rest;
  for (Symbol s : a.body.variables())
    if (std::find(a.body_vars.begin(), a.body_vars.end(), s) == a.body_vars.end()) rest.push_back(s);
  std::sort(rest.begin(), rest.end(), ByName{});
  l.columns.insert(l.columns.end(), rest.begin(), rest.end());
  l.cubes = to_dnf(a.body, dnf_options(max_dnf));
  return l;
}

OuterLayout outer_layout(const LiaCardProblem& p, std::size_t max_dnf) {
  OuterLayout l;
  std::set<Symbol> vars = p.f0.variables();
  for (const auto& s : p.stars) {
    vars.insert(s.u.begin(), s.u.end());
    vars.insert(s.exponent);
  }
  l.vars.assign(vars.begin(), vars.end());
  std::sort(l.vars.begin(), l.vars.end(), ByName{});
  l.cubes = to_dnf(p.f0, dnf_options(max_dnf));
  return l;
}

std::vector<std::size_t> StarEncoding::loaded() const {
  std::set<std::size_t> out;
  for (const auto& p : periods) out.insert(p.base);
  return {out.begin(), out.end()};
}

NatSystem star_atom_encode(const StarEncoding& e, std::size_t u_dim) {
  const std::size_t nl = e.periods.size();
  const std::size_t nm = e.bases.size();
  NatSystem sys(nl + nm + u_dim + 1);
  for (std::size_t d = 0; d < u_dim; ++d) {
    IntVec row(sys.arity);
    Int rhs = 0;
    for (std::size_t s = 0; s < nl; ++s) row[s] = e.periods[s].vec.at(d);
    for (std::size_t l = 0; l < nm; ++l) {
      row[nl + l] = e.bases[l].vec.at(d);
      rhs -= e.bases[l].vec.at(d);
    }
    row[nl + nm + d] = -1;
    sys.add_eq(std::move(row), rhs);
  }
  IntVec row(sys.arity);
  for (std::size_t l = 0; l < nm; ++l) row[nl + l] = 1;
  row[nl + nm + u_dim] = -1;
  sys.add_eq(std::move(row), -Int(nm));
  return sys;
}

CombinedSystem build_combined_system(const LiaCardProblem& p, const std::vector<StarEncoding>& encodings,
                                     const OuterLayout& outer, std::size_t f0_cube) {
  if (encodings.size() != p.stars.size()) throw std::invalid_argument("DimensionMismatch: one encoding per star atom expected");
  if (f0_cube >= outer.cubes.size()) throw std::invalid_argument("DimensionMismatch: F0 cube index out of range");
  CombinedSystem out;
  std::vector<std::size_t> offsets;
  for (std::size_t a = 0; a < encodings.size(); ++a) {
    offsets.push_back(out.legend.size());
    const auto& e = encodings[a];
    for (std::size_t s = 0; s < e.periods.size(); ++s) out.legend.push_back({Column::Kind::Lambda, a, s, {}});
    for (std::size_t l = 0; l < e.bases.size(); ++l) out.legend.push_back({Column::Kind::Mu, a, l, {}});
  }
  const std::size_t outer_offset = out.legend.size();
  for (std::size_t i = 0; i < outer.vars.size(); ++i) out.legend.push_back({Column::Kind::Outer, 0, i, outer.vars[i]});
  NatSystem f0 = atoms_to_system(outer.cubes[f0_cube], outer.vars);
  for (std::size_t i = outer.vars.size(); i < f0.arity; ++i)
    out.legend.push_back({Column::Kind::Slack, 0, i - outer.vars.size(), {}});

  out.system = NatSystem(out.legend.size());
  for (std::size_t a = 0; a < encodings.size(); ++a) {
    const auto& star = p.stars[a];
    const auto& e = encodings[a];
    const std::size_t u_dim = star.u.size();
    for (const auto& b : e.bases)
      if (b.vec.size() < u_dim) throw std::invalid_argument("DimensionMismatch: base shorter than u");
    for (const auto& q : e.periods)
      if (q.vec.size() < u_dim) throw std::invalid_argument("DimensionMismatch: period shorter than u");
    NatSystem local = star_atom_encode(e, u_dim);
    const std::size_t nlm = e.periods.size() + e.bases.size();
    std::vector<std::size_t> map(local.arity);
    for (std::size_t j = 0; j < nlm; ++j) map[j] = offsets[a] + j;
    for (std::size_t d = 0; d < u_dim; ++d) map[nlm + d] = outer_offset + index_of(outer.vars, star.u[d]);
    map[nlm + u_dim] = outer_offset + index_of(outer.vars, star.exponent);
    for (std::size_t r = 0; r < local.eq.size(); ++r) {
      IntVec row(out.system.arity);
      for (std::size_t j = 0; j < local.arity; ++j) row[map[j]] += local.eq[r][j];
      out.system.add_eq(std::move(row), local.eq_rhs[r]);
    }
  }
  auto embed = [&](const IntVec& r) {
    IntVec row(out.system.arity);
    for (std::size_t j = 0; j < f0.arity; ++j) row[outer_offset + j] = r[j];
    return row;
  };
  for (std::size_t r = 0; r < f0.eq.size(); ++r) out.system.add_eq(embed(f0.eq[r]), f0.eq_rhs[r]);
  for (std::size_t r = 0; r < f0.le.size(); ++r) out.system.add_le(embed(f0.le[r]), f0.le_rhs[r]);
  return out;
}

namespace {

// Generators of one DNF cube projected onto the atom's columns.
struct CubeGenerators {
  std::vector<IntVec> bases;
  std::vector<IntVec> periods;
};

struct AtomData {
  const StarAtom* star;
  AtomLayout layout;
  std::vector<CubeGenerators> cubes;
  // Column offsets in the search system.
  std::size_t mu_offset = 0;
  std::size_t lambda_offset = 0;
  std::vector<std::size_t> mu_start;      // per cube
  std::vector<std::size_t> lambda_start;  // per cube
};

// Branching decision: Require forces Σμ over the cube's bases ≥ 1, Forbid
// zeroes the cube's period coefficients.
struct Decision {
  bool require;
  std::size_t atom;
  std::size_t cube;
};

class Solver {
 public:
  Solver(const LiaCardProblem& p, const SolveOptions& o) : p_(p), o_(o) {}

  LiaCardResult run() {
    LiaCardResult result;
    try {
      outer_ = outer_layout(p_, o_.max_dnf);
      for (const auto& s : p_.stars) atoms_.push_back(prepare(s));
    } catch (const SizeLimitExceeded& e) {
      result.status = SatStatus::ResourceLimit;
      result.diagnostic = e.what();
      return result;
    }
    std::size_t width = 0;
    for (auto& a : atoms_) {
      a.mu_offset = width;
      for (const auto& c : a.cubes) {
        a.mu_start.push_back(width);
        width += c.bases.size();
      }
      a.lambda_offset = width;
      for (const auto& c : a.cubes) {
        a.lambda_start.push_back(width);
        width += c.periods.size();
      }
    }
    generator_width_ = width;

    bool limited = false;
    for (std::size_t c = 0; c < outer_.cubes.size(); ++c) {
      auto sol = solve_cube(c, limited, result.diagnostic);
      if (sol) {
        result.status = SatStatus::Sat;
        result.solution = std::move(sol);
        result.diagnostic.clear();
        return result;
      }
    }
    result.status = limited ? SatStatus::ResourceLimit : SatStatus::Unsat;
    return result;
  }

 private:
  AtomData prepare(const StarAtom& s) {
    AtomData a{&s, atom_layout(s, o_.max_dnf), {}, 0, 0, {}, {}};
    const std::size_t n = a.layout.columns.size();
    for (const auto& cube : a.layout.cubes) {
      HybridLinearSet h = solution_set(atoms_to_system(cube, a.layout.columns), o_.hilbert);
      CubeGenerators g;
      std::set<IntVec> bases, periods;
      for (auto& b : h.bases) {
        b.resize(n);
        bases.insert(std::move(b));
      }
      for (auto& q : h.periods) {
        q.resize(n);
        if (!is_zero(q)) periods.insert(std::move(q));
      }
      g.bases.assign(bases.begin(), bases.end());
      g.periods.assign(periods.begin(), periods.end());
      a.cubes.push_back(std::move(g));
    }
    return a;
  }

  NatSystem system(std::size_t f0_cube, const std::vector<Decision>& decisions) const {
    NatSystem f0 = atoms_to_system(outer_.cubes[f0_cube], outer_.vars);
    const std::size_t outer_offset = generator_width_;
    NatSystem sys(generator_width_ + f0.arity);
    for (const auto& a : atoms_) {
      const auto& star = *a.star;
      const std::size_t u_dim = star.u.size();
      for (std::size_t d = 0; d <= u_dim; ++d) {
        IntVec row(sys.arity);
        for (std::size_t c = 0; c < a.cubes.size(); ++c) {
          for (std::size_t i = 0; i < a.cubes[c].bases.size(); ++i)
            row[a.mu_start[c] + i] = d < u_dim ? a.cubes[c].bases[i][d] : Int(1);
          if (d < u_dim)
            for (std::size_t s = 0; s < a.cubes[c].periods.size(); ++s) row[a.lambda_start[c] + s] = a.cubes[c].periods[s][d];
        }
        Symbol outer_var = d < u_dim ? star.u[d] : star.exponent;
        row[outer_offset + index_of(outer_.vars, outer_var)] -= 1;
        sys.add_eq(std::move(row), 0);
      }
    }
    for (const auto& dec : decisions) {
      const auto& a = atoms_[dec.atom];
      const auto& g = a.cubes[dec.cube];
      if (dec.require) {
        IntVec row(sys.arity);
        for (std::size_t i = 0; i < g.bases.size(); ++i) row[a.mu_start[dec.cube] + i] = -1;
        sys.add_le(std::move(row), -1);
      } else {
        for (std::size_t s = 0; s < g.periods.size(); ++s) {
          IntVec row(sys.arity);
          row[a.lambda_start[dec.cube] + s] = 1;
          sys.add_eq(std::move(row), 0);
        }
      }
    }
    auto embed = [&](const IntVec& r) {
      IntVec row(sys.arity);
      for (std::size_t j = 0; j < f0.arity; ++j) row[outer_offset + j] = r[j];
      return row;
    };
    for (std::size_t r = 0; r < f0.eq.size(); ++r) sys.add_eq(embed(f0.eq[r]), f0.eq_rhs[r]);
    for (std::size_t r = 0; r < f0.le.size(); ++r) sys.add_le(embed(f0.le[r]), f0.le_rhs[r]);
    return sys;
  }

  std::optional<LiaCardSolution> solve_cube(std::size_t f0_cube, bool& limited, std::string& diagnostic) const {
    std::vector<std::vector<Decision>> stack{{}};
    std::uint64_t branches = 0;
    while (!stack.empty()) {
      auto decisions = std::move(stack.back());
      stack.pop_back();
      if (++branches > o_.max_branches) {
        limited = true;
        diagnostic = "implication branch cap reached";
        return std::nullopt;
      }
      NatSystem sys = system(f0_cube, decisions);
      IlpResult r = ilp_feasible(sys, o_.ilp);
      if (r.status == IlpStatus::ResourceLimit) {
        limited = true;
        diagnostic = "ILP node cap reached";
        continue;
      }
      if (r.status == IlpStatus::Infeasible) continue;
      const IntVec& x = r.solution;

      std::optional<Decision> violation;
      for (std::size_t ai = 0; ai < atoms_.size() && !violation; ++ai) {
        const auto& a = atoms_[ai];
        for (std::size_t c = 0; c < a.cubes.size() && !violation; ++c) {
          Int mu = 0, lambda = 0;
          for (std::size_t i = 0; i < a.cubes[c].bases.size(); ++i) mu += x[a.mu_start[c] + i];
          for (std::size_t s = 0; s < a.cubes[c].periods.size(); ++s) lambda += x[a.lambda_start[c] + s];
          if (lambda > 0 && mu == 0) violation = Decision{true, ai, c};
        }
      }
      if (violation) {
        auto forbid = decisions;
        forbid.push_back({false, violation->atom, violation->cube});
        decisions.push_back(*violation);
        stack.push_back(std::move(forbid));
        stack.push_back(std::move(decisions));
        continue;
      }

      LiaCardSolution sol;
      sol.f0_cube = f0_cube;
      for (std::size_t i = 0; i < outer_.vars.size(); ++i) sol.outer[outer_.vars[i]] = x[generator_width_ + i];
      for (std::size_t ai = 0; ai < atoms_.size(); ++ai) {
        const auto& a = atoms_[ai];
        StarEncoding e;
        e.atom = ai;
        for (std::size_t c = 0; c < a.cubes.size(); ++c) {
          std::size_t first = e.bases.size();
          for (std::size_t i = 0; i < a.cubes[c].bases.size(); ++i) {
            const Int& mu = x[a.mu_start[c] + i];
            if (mu == 0) continue;
            e.bases.push_back({c, a.cubes[c].bases[i]});
            e.mu.push_back(mu);
          }
          for (std::size_t s = 0; s < a.cubes[c].periods.size(); ++s) {
            const Int& lambda = x[a.lambda_start[c] + s];
            if (lambda == 0) continue;
            e.periods.push_back({first, a.cubes[c].periods[s]});
            e.lambda.push_back(lambda);
          }
        }
        if (e.bases.size() > o_.max_support || e.periods.size() > o_.max_support) {
          limited = true;
          diagnostic = "support of star atom " + std::to_string(ai) + " exceeds the cap of " + std::to_string(o_.max_support);
          return std::nullopt;
        }
        sol.encodings.push_back(std::move(e));
      }
      return sol;
    }
    return std::nullopt;
  }

  const LiaCardProblem& p_;
  const SolveOptions& o_;
  OuterLayout outer_;
  std::vector<AtomData> atoms_;
  std::size_t generator_width_ = 0;
};

}  // namespace

LiaCardResult solve_lia_card(const LiaCardProblem& p, const SolveOptions& options) {
  return Solver(p, options).run();
}

}  // namespace powsum
