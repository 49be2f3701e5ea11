#include "powsum/eval.hpp"

namespace powsum {

bool eval_atom(const QfpaAtom& a, const std::function<const Int&(Symbol)>& lookup) {
  const Int l = a.lhs.evaluate(lookup);
  const Int r = a.rhs.evaluate(lookup);
  switch (a.kind) {
    case AtomKind::Eq: return l == r;
    case AtomKind::Neq: return l != r;
    case AtomKind::Le: return l <= r;
    case AtomKind::Lt: return l < r;
    case AtomKind::Ge: return l >= r;
    case AtomKind::Gt: return l > r;
    case AtomKind::Mod: return mod_floor(l - r, a.modulus) == 0;
  }
  return false;
}

bool eval_qfpa(const QfpaFormula& f, const std::function<const Int&(Symbol)>& lookup) {
  switch (f.kind()) {
    case QfpaFormula::Kind::Atom: return eval_atom(f.atom(), lookup);
    case QfpaFormula::Kind::Not: return !eval_qfpa(f.children()[0], lookup);
    case QfpaFormula::Kind::And:
      for (const auto& c : f.children())
        if (!eval_qfpa(c, lookup)) return false;
      return true;
    case QfpaFormula::Kind::Or:
      for (const auto& c : f.children())
        if (eval_qfpa(c, lookup)) return true;
      return false;
  }
  return false;
}

bool eval_qfpa(const QfpaFormula& f, const Assignment& env) {
  // Check bindings up front so that short-circuiting never hides a gap.
  for (Symbol s : f.variables())
    if (!env.count(s)) throw MissingBinding(s);
  return eval_qfpa(f, [&](Symbol s) -> const Int& { return env.at(s); });
}

namespace {

using Dnf = std::vector<Cube>;

QfpaAtom shifted(AtomKind kind, const LinTerm& lhs, const LinTerm& rhs, int delta) {
  return QfpaAtom::make(kind, lhs, rhs + Int(delta));
}

// Literal expansion of a (possibly negated) atom into cubes.
Dnf literal(const QfpaAtom& a, bool positive) {
  const auto& l = a.lhs;
  const auto& r = a.rhs;
  if (positive) {
    if (a.kind == AtomKind::Neq) return {{shifted(AtomKind::Le, l, r, -1)}, {shifted(AtomKind::Ge, l, r, 1)}};
    return {{a}};
  }
  switch (a.kind) {
    case AtomKind::Eq: return {{shifted(AtomKind::Le, l, r, -1)}, {shifted(AtomKind::Ge, l, r, 1)}};
    case AtomKind::Neq: return {{QfpaAtom::make(AtomKind::Eq, l, r)}};
    case AtomKind::Le: return {{shifted(AtomKind::Ge, l, r, 1)}};
    case AtomKind::Lt: return {{QfpaAtom::make(AtomKind::Ge, l, r)}};
    case AtomKind::Ge: return {{shifted(AtomKind::Le, l, r, -1)}};
    case AtomKind::Gt: return {{QfpaAtom::make(AtomKind::Le, l, r)}};
    case AtomKind::Mod: {
      Dnf out;
      for (Int rho = 1; rho < a.modulus; ++rho) out.push_back({QfpaAtom::mod(l, r + rho, a.modulus)});
      return out;
    }
  }
  return {};
}

class DnfBuilder {
 public:
  explicit DnfBuilder(const DnfOptions& o) : opts_(o) {}

  Dnf run(const QfpaFormula& f, bool positive) {
    using K = QfpaFormula::Kind;
    switch (f.kind()) {
      case K::Atom: return filter(literal(f.atom(), positive));
      case K::Not: return run(f.children()[0], !positive);
      case K::And:
      case K::Or: {
        const bool conj = (f.kind() == K::And) == positive;
        if (conj) {
          Dnf acc{Cube{}};
          for (const auto& c : f.children()) {
            acc = product(acc, run(c, positive));
            if (acc.empty()) break;
          }
          return acc;
        }
        Dnf acc;
        for (const auto& c : f.children()) {
          for (auto& cube : run(c, positive)) acc.push_back(std::move(cube));
          check(acc.size());
        }
        return acc;
      }
    }
    return {};
  }

 private:
  void check(std::size_t n) const {
    if (n > opts_.max_cubes)
      throw SizeLimitExceeded("DNF exceeds " + std::to_string(opts_.max_cubes) + " cubes");
  }

  Dnf filter(Dnf d) const {
    if (!opts_.keep) return d;
    Dnf out;
    for (auto& c : d)
      if (opts_.keep(c)) out.push_back(std::move(c));
    return out;
  }

  Dnf product(const Dnf& a, const Dnf& b) const {
    Dnf out;
    for (const auto& x : a) {
      for (const auto& y : b) {
        Cube c = x;
        c.insert(c.end(), y.begin(), y.end());
        if (opts_.keep && !opts_.keep(c)) continue;
        out.push_back(std::move(c));
        check(out.size());
      }
    }
    return out;
  }

  const DnfOptions& opts_;
};

}  // namespace

std::vector<Cube> to_dnf(const QfpaFormula& f, const DnfOptions& options) {
  DnfBuilder b(options);
  auto out = b.run(f, true);
  if (out.size() > options.max_cubes)
    throw SizeLimitExceeded("DNF exceeds " + std::to_string(options.max_cubes) + " cubes");
  return out;
}

QfpaFormula cube_formula(const Cube& c) {
  std::vector<QfpaFormula> atoms;
  atoms.reserve(c.size());
  for (const auto& a : c) atoms.push_back(QfpaFormula::atom(a));
  return QfpaFormula::conjunction(std::move(atoms));
}

QfpaFormula dnf_formula(const std::vector<Cube>& cubes) {
  std::vector<QfpaFormula> ds;
  ds.reserve(cubes.size());
  for (const auto& c : cubes) ds.push_back(cube_formula(c));
  return QfpaFormula::disjunction(std::move(ds));
}

QfpaFormula negate(const QfpaFormula& f) {
  using K = QfpaFormula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      const auto& a = f.atom();
      switch (a.kind) {
        case AtomKind::Eq: return QfpaFormula::atom(QfpaAtom::make(AtomKind::Neq, a.lhs, a.rhs));
        case AtomKind::Neq: return QfpaFormula::atom(QfpaAtom::make(AtomKind::Eq, a.lhs, a.rhs));
        case AtomKind::Le: return QfpaFormula::atom(QfpaAtom::make(AtomKind::Gt, a.lhs, a.rhs));
        case AtomKind::Lt: return QfpaFormula::atom(QfpaAtom::make(AtomKind::Ge, a.lhs, a.rhs));
        case AtomKind::Ge: return QfpaFormula::atom(QfpaAtom::make(AtomKind::Lt, a.lhs, a.rhs));
        case AtomKind::Gt: return QfpaFormula::atom(QfpaAtom::make(AtomKind::Le, a.lhs, a.rhs));
        case AtomKind::Mod: return QfpaFormula::negation(f);
      }
      return f;
    }
    case K::Not: return f.children()[0];
    case K::And:
    case K::Or: {
      std::vector<QfpaFormula> cs;
      for (const auto& c : f.children()) cs.push_back(negate(c));
      return f.kind() == K::And ? QfpaFormula::disjunction(std::move(cs)) : QfpaFormula::conjunction(std::move(cs));
    }
  }
  return f;
}

}  // namespace powsum
