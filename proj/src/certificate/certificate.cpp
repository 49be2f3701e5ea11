#include "powsum/certificate.hpp"

#include "powsum/eval.hpp"
#include "powsum/text.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace powsum {

bool operator==(const ShippedSystem& a, const ShippedSystem& b) {
  return a.cube == b.cube && a.system.arity == b.system.arity && a.system.eq == b.system.eq &&
         a.system.eq_rhs == b.system.eq_rhs && a.system.le == b.system.le && a.system.le_rhs == b.system.le_rhs;
}

std::uint64_t digest(const LiaCardProblem& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : print_lia_card(p)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const char* to_string(Check c) {
  switch (c) {
    case Check::Digest: return "digest";
    case Check::Malformed: return "malformed";
    case Check::Cubes: return "check 1 (cubes)";
    case Check::Bases: return "check 2 (bases)";
    case Check::Periods: return "check 3 (periods)";
    case Check::Block: return "check 4 (generator block)";
    case Check::Exponent: return "check 5 (exponent)";
    case Check::F0: return "check 6 (F0 cube)";
  }
  return "?";
}

namespace {

// Large enough that the cap never decides a verification; indices are
// independent of the cap whenever the DNF fits.
constexpr std::size_t kVerifierDnf = std::size_t{1} << 16;

bool is_outer_u(const LiaCardProblem& p, Symbol s) {
  for (const auto& a : p.stars)
    if (std::find(a.u.begin(), a.u.end(), s) != a.u.end()) return true;
  return false;
}

bool is_exponent(const LiaCardProblem& p, Symbol s) {
  for (const auto& a : p.stars)
    if (a.exponent == s) return true;
  return false;
}

bool holds(const Cube& cube, const std::vector<Symbol>& columns, const IntVec& vec) {
  const Int zero = 0;
  auto lookup = [&](Symbol s) -> const Int& {
    auto it = std::find(columns.begin(), columns.end(), s);
    return it == columns.end() ? zero : vec[static_cast<std::size_t>(it - columns.begin())];
  };
  for (const auto& a : cube)
    if (!eval_atom(a, lookup)) return false;
  return true;
}

// Homogeneous part: the atom with its constant dropped, strict made weak.
bool holds_homogeneous(const Cube& cube, const std::vector<Symbol>& columns, const IntVec& vec) {
  for (const auto& a : cube) {
    LinTerm d = a.lhs - a.rhs;
    Int v = 0;
    for (const auto& [s, c] : d.coefficients()) {
      auto it = std::find(columns.begin(), columns.end(), s);
      if (it != columns.end()) v += c * vec[static_cast<std::size_t>(it - columns.begin())];
    }
    bool ok = true;
    switch (a.kind) {
      case AtomKind::Eq: ok = v == 0; break;
      case AtomKind::Le:
      case AtomKind::Lt: ok = v <= 0; break;
      case AtomKind::Ge:
      case AtomKind::Gt: ok = v >= 0; break;
      case AtomKind::Mod: ok = mod_floor(v, a.modulus) == 0; break;
      case AtomKind::Neq: ok = false; break;
    }
    if (!ok) return false;
  }
  return true;
}

bool non_negative(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x >= 0; });
}

VerifyResult reject(Check c, std::string reason) { return {false, c, std::move(reason)}; }

}  // namespace

Certificate emit_certificate(const LiaCardProblem& p, const LiaCardSolution& s, const SolveOptions& options) {
  Certificate c;
  c.digest = digest(p);
  OuterLayout outer = outer_layout(p, options.max_dnf);
  c.f0 = {s.f0_cube, atoms_to_system(outer.cubes.at(s.f0_cube), outer.vars)};
  for (std::size_t a = 0; a < p.stars.size(); ++a) {
    const auto& e = s.encodings.at(a);
    AtomLayout layout = atom_layout(p.stars[a], options.max_dnf);
    AtomCertificate ac;
    ac.arity = layout.columns.size();
    std::set<std::size_t> used;
    for (const auto& b : e.bases) used.insert(b.cube);
    for (std::size_t k : used) ac.cubes.push_back({k, atoms_to_system(layout.cubes.at(k), layout.columns)});
    ac.bases = e.bases;
    ac.periods = e.periods;
    ac.mu = e.mu;
    ac.lambda = e.lambda;
    c.atoms.push_back(std::move(ac));
  }
  for (Symbol x : outer.vars) {
    const Int& val = s.outer.at(x);
    if (is_exponent(p, x)) c.x[x] = val;
    else if (is_outer_u(p, x)) c.u[x] = val;
    else c.v[x] = val;
  }
  return c;
}

VerifyResult verify_certificate(const LiaCardProblem& p, const Certificate& c) {
  if (c.digest != digest(p)) return reject(Check::Digest, "certificate is bound to a different problem");

  OuterLayout outer;
  std::vector<AtomLayout> layouts;
  try {
    outer = outer_layout(p, kVerifierDnf);
    for (const auto& s : p.stars) layouts.push_back(atom_layout(s, kVerifierDnf));
  } catch (const SizeLimitExceeded& e) {
    return reject(Check::Cubes, e.what());
  }

  // Well-formedness.
  if (c.atoms.size() != p.stars.size()) return reject(Check::Malformed, "wrong number of star atoms");
  Assignment env;
  {
    std::size_t bound = 0;
    for (Symbol x : outer.vars) {
      const auto& section = is_exponent(p, x) ? c.x : is_outer_u(p, x) ? c.u : c.v;
      auto it = section.find(x);
      if (it == section.end()) return reject(Check::Malformed, "no binding for '" + x.name() + "'");
      if (it->second < 0) return reject(Check::Malformed, "negative value for '" + x.name() + "'");
      env[x] = it->second;
      ++bound;
    }
    if (bound != c.x.size() + c.u.size() + c.v.size()) return reject(Check::Malformed, "assignment binds unknown variables");
  }
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    const auto& ac = c.atoms[a];
    const std::string where = "atom " + std::to_string(a) + ": ";
    if (ac.arity != layouts[a].columns.size()) return reject(Check::Malformed, where + "arity differs from the body");
    if (ac.mu.size() != ac.bases.size()) return reject(Check::Malformed, where + "one multiplicity per base expected");
    if (ac.lambda.size() != ac.periods.size()) return reject(Check::Malformed, where + "one coefficient per period expected");
    if (!non_negative(ac.mu) || !non_negative(ac.lambda)) return reject(Check::Malformed, where + "negative coefficient");
    for (const auto& b : ac.bases)
      if (b.vec.size() != ac.arity || !non_negative(b.vec)) return reject(Check::Malformed, where + "bad base vector");
    for (const auto& q : ac.periods) {
      if (q.vec.size() != ac.arity || !non_negative(q.vec)) return reject(Check::Malformed, where + "bad period vector");
      if (q.base >= ac.bases.size()) return reject(Check::Malformed, where + "period attached to a missing base");
    }
  }

  // (1) cube indices and matrices.
  if (c.f0.cube >= outer.cubes.size()) return reject(Check::Cubes, "F0 cube index out of range");
  if (!(c.f0 == ShippedSystem{c.f0.cube, atoms_to_system(outer.cubes[c.f0.cube], outer.vars)}))
    return reject(Check::Cubes, "F0 matrices differ from the recomputed cube");
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    const auto& ac = c.atoms[a];
    const auto& layout = layouts[a];
    std::set<std::size_t> used, shipped;
    for (const auto& b : ac.bases) {
      if (b.cube >= layout.cubes.size()) return reject(Check::Cubes, "base cube index out of range");
      used.insert(b.cube);
    }
    for (const auto& s : ac.cubes) {
      if (s.cube >= layout.cubes.size()) return reject(Check::Cubes, "shipped cube index out of range");
      if (!shipped.insert(s.cube).second) return reject(Check::Cubes, "cube shipped twice");
      if (!(s == ShippedSystem{s.cube, atoms_to_system(layout.cubes[s.cube], layout.columns)}))
        return reject(Check::Cubes, "matrices of cube " + std::to_string(s.cube) + " differ from the recomputed cube");
    }
    if (used != shipped) return reject(Check::Cubes, "shipped cubes differ from the cubes used by bases");
  }

  // (2) bases, (3) periods.
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    const auto& ac = c.atoms[a];
    const auto& layout = layouts[a];
    for (std::size_t l = 0; l < ac.bases.size(); ++l)
      if (!holds(layout.cubes[ac.bases[l].cube], layout.columns, ac.bases[l].vec))
        return reject(Check::Bases, "base " + std::to_string(l) + " of atom " + std::to_string(a) + " violates its cube");
  }
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    const auto& ac = c.atoms[a];
    const auto& layout = layouts[a];
    for (std::size_t s = 0; s < ac.periods.size(); ++s) {
      const auto& q = ac.periods[s];
      if (!holds_homogeneous(layout.cubes[ac.bases[q.base].cube], layout.columns, q.vec))
        return reject(Check::Periods, "period " + std::to_string(s) + " of atom " + std::to_string(a) + " leaves its cone");
    }
  }

  // (4) block rows and (5) exponent bookkeeping, on the rebuilt local blocks.
  std::vector<std::pair<NatSystem, IntVec>> blocks;
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    const auto& ac = c.atoms[a];
    const auto& star = p.stars[a];
    for (const auto& m : ac.mu)
      if (m < 1) return reject(Check::Block, "base with zero multiplicity in atom " + std::to_string(a));
    StarEncoding e{a, ac.bases, ac.periods, ac.mu, ac.lambda};
    NatSystem block = star_atom_encode(e, star.u.size());
    IntVec x;
    for (const auto& l : ac.lambda) x.push_back(l);
    for (const auto& m : ac.mu) x.push_back(m - 1);
    for (Symbol s : star.u) x.push_back(env.at(s));
    x.push_back(env.at(star.exponent));
    for (std::size_t r = 0; r + 1 < block.eq.size(); ++r) {
      Int lhs = 0;
      for (std::size_t j = 0; j < x.size(); ++j) lhs += block.eq[r][j] * x[j];
      if (lhs != block.eq_rhs[r])
        return reject(Check::Block, "component " + std::to_string(r) + " of atom " + std::to_string(a) + " does not add up to u");
    }
    blocks.emplace_back(std::move(block), std::move(x));
  }
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    const auto& [block, x] = blocks[a];
    const auto& row = block.eq.back();
    Int lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row[j] * x[j];
    if (lhs != block.eq_rhs.back())
      return reject(Check::Exponent, "exponent of atom " + std::to_string(a) + " differs from the number of addends");
  }

  // (6) F0 cube.
  if (!holds(outer.cubes[c.f0.cube], outer.vars, [&] {
        IntVec vals;
        for (Symbol s : outer.vars) vals.push_back(env.at(s));
        return vals;
      }()))
    return reject(Check::F0, "assignment violates the F0 cube");
  return {true, Check::F0, ""};
}

Reconstruction reconstruct_model(const FragmentProblem& original, const LiaCardProblem& p, const Certificate& c) {
  if (p.stars.size() > 1) throw std::invalid_argument("model reconstruction supports at most one star atom");
  Reconstruction out;
  for (std::size_t a = 0; a < p.stars.size(); ++a) {
    const auto& ac = c.atoms.at(a);
    StarWitness w;
    w.columns = atom_layout(p.stars[a], kVerifierDnf).columns;
    for (std::size_t l = 0; l < ac.bases.size(); ++l) {
      IntVec loaded = ac.bases[l].vec;
      for (std::size_t s = 0; s < ac.periods.size(); ++s) {
        if (ac.periods[s].base != l) continue;
        for (std::size_t i = 0; i < loaded.size(); ++i) loaded[i] += ac.lambda[s] * ac.periods[s].vec[i];
      }
      w.addends.push_back(std::move(loaded));
      for (Int k = 1; k < ac.mu[l]; ++k) w.addends.push_back(ac.bases[l].vec);
    }
    out.witnesses.push_back(std::move(w));
  }

  auto value = [&](Symbol s) -> Int {
    for (const auto* section : {&c.x, &c.u, &c.v}) {
      auto it = section->find(s);
      if (it != section->end()) return it->second;
    }
    return 0;
  };
  for (Symbol x : original.ints) out.model.ints[x] = value(x);
  for (Symbol arr : original.arrays) {
    IntVec vals;
    if (!out.witnesses.empty()) {
      const auto& w = out.witnesses[0];
      auto it = std::find(w.columns.begin(), w.columns.end(), arr);
      if (it != w.columns.end()) {
        const auto col = static_cast<std::size_t>(it - w.columns.begin());
        for (const auto& addend : w.addends) vals.push_back(addend[col]);
      }
    }
    out.model.arrays[arr] = std::move(vals);
  }
  derive_set_values(original, out.model);
  return out;
}

}  // namespace powsum
