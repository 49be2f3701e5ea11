#include "powsum/pipeline.hpp"

#include "powsum/eval.hpp"

#include <map>
#include <stdexcept>

namespace powsum {

namespace {

const Int kZero = 0;

bool holds_on_zero(const QfpaFormula& f) {
  return eval_qfpa(f, [](Symbol) -> const Int& { return kZero; });
}

QfpaFormula equals(Symbol v, int value) {
  return QfpaFormula::atom(QfpaAtom::make(AtomKind::Eq, LinTerm::variable(v), LinTerm(Int(value))));
}

QfpaFormula equals(Symbol a, Symbol b) {
  return QfpaFormula::atom(QfpaAtom::make(AtomKind::Eq, LinTerm::variable(a), LinTerm::variable(b)));
}

// (φ ∧ then) ∨ (¬φ ∧ otherwise)
QfpaFormula ite(const QfpaFormula& phi, QfpaFormula then, QfpaFormula otherwise) {
  return QfpaFormula::disjunction({QfpaFormula::conjunction({phi, std::move(then)}),
                                   QfpaFormula::conjunction({QfpaFormula::negation(phi), std::move(otherwise)})});
}

class BapaEliminator {
 public:
  explicit BapaEliminator(const FragmentProblem& p) : p_(p) {}

  SumForm run() {
    out_.arrays = p_.arrays;
    out_.ints = p_.ints;

    for (const auto& in : p_.interps) guards_.emplace(*in.set_var, in.guard);
    for (Symbol s : p_.sets) {
      const QfpaFormula& phi = guards_.at(s);
      const bool tail = holds_on_zero(phi);
      Symbol ind = Symbol::intern("#ind_" + s.name());
      indicator_.emplace(s, Indicator{ind, tail});
      out_.arrays.push_back(ind);
      // The indicator is 0 on the zero tail whichever way the guard goes.
      const int member = tail ? 0 : 1;
      out_.interps.push_back({std::nullopt, ite(phi, equals(ind, member), equals(ind, 1 - member))});
    }

    out_.psi = rewrite(p_.bapa);

    const bool counters = !counters_.empty();
    if (p_.sum) {
      const SumSpec& user = *p_.sum;
      if (counters && !user.guard.is_truth()) {
        for (const auto& t : user.targets) {
          Symbol copy = Symbol::intern("#sum_" + t.array.name());
          out_.arrays.push_back(copy);
          out_.interps.push_back({std::nullopt, ite(user.guard, equals(copy, t.array), equals(copy, 0))});
          out_.sum.targets.push_back({t.sum_var, copy});
        }
        out_.sum.guard = QfpaFormula::truth();
      } else {
        out_.sum = user;
      }
    }
    for (const auto& t : counters_) out_.sum.targets.push_back(t);
    return std::move(out_);
  }

 private:
  struct Indicator {
    Symbol array;
    bool tail;  // membership of the zero tail
  };

  // Pointwise membership in t, or in its complement when !positive.
  QfpaFormula member(const SetTerm& t, bool positive) const {
    using K = SetTerm::Kind;
    switch (t.kind()) {
      case K::Var: {
        const auto& ind = indicator_.at(t.symbol());
        const int in = ind.tail ? 0 : 1;
        return equals(ind.array, positive ? in : 1 - in);
      }
      case K::Union:
      case K::Inter: {
        std::vector<QfpaFormula> cs{member(t.children()[0], positive), member(t.children()[1], positive)};
        const bool conj = (t.kind() == K::Inter) == positive;
        return conj ? QfpaFormula::conjunction(std::move(cs)) : QfpaFormula::disjunction(std::move(cs));
      }
      case K::Compl: return member(t.children()[0], !positive);
      case K::Empty: return positive ? QfpaFormula::falsity() : QfpaFormula::truth();
      case K::Full: return positive ? QfpaFormula::truth() : QfpaFormula::falsity();
    }
    return QfpaFormula::falsity();
  }

  bool tail_member(const SetTerm& t) const {
    using K = SetTerm::Kind;
    switch (t.kind()) {
      case K::Var: return indicator_.at(t.symbol()).tail;
      case K::Union: return tail_member(t.children()[0]) || tail_member(t.children()[1]);
      case K::Inter: return tail_member(t.children()[0]) && tail_member(t.children()[1]);
      case K::Compl: return !tail_member(t.children()[0]);
      case K::Empty: return false;
      case K::Full: return true;
    }
    return false;
  }

  QfpaFormula card(const SetTerm& t, CardOp op, const LinTerm& bound) {
    const std::size_t k = counters_.size();
    Symbol x = Symbol::intern("#card_" + std::to_string(k));
    Symbol cnt = Symbol::intern("#cnt_" + std::to_string(k));
    out_.arrays.push_back(x);
    out_.ints.push_back(cnt);
    counters_.push_back({cnt, x});
    if (tail_member(t)) {
      // Infinite set: no natural equals its cardinality.
      out_.interps.push_back({std::nullopt, equals(x, 0)});
      return QfpaFormula::falsity();
    }
    out_.interps.push_back({std::nullopt, ite(member(t, true), equals(x, 1), equals(x, 0))});
    AtomKind kind = AtomKind::Eq;
    switch (op) {
      case CardOp::Eq: kind = AtomKind::Eq; break;
      case CardOp::Le: kind = AtomKind::Le; break;
      case CardOp::Lt: kind = AtomKind::Lt; break;
      case CardOp::Ge: kind = AtomKind::Ge; break;
      case CardOp::Gt: kind = AtomKind::Gt; break;
    }
    return QfpaFormula::atom(QfpaAtom::make(kind, LinTerm::variable(cnt), bound));
  }

  QfpaFormula rewrite(const BapaFormula& f) {
    using K = BapaFormula::Kind;
    switch (f.kind()) {
      case K::Subset:
        return card(SetTerm::intersection(f.left(), SetTerm::complement(f.right())), CardOp::Eq, LinTerm());
      case K::SetEq:
        return QfpaFormula::conjunction({card(SetTerm::intersection(f.left(), SetTerm::complement(f.right())), CardOp::Eq, LinTerm()),
                                         card(SetTerm::intersection(f.right(), SetTerm::complement(f.left())), CardOp::Eq, LinTerm())});
      case K::Card: return card(f.left(), f.card_op(), f.bound());
      case K::Qfpa: return f.qfpa_formula();
      case K::And:
      case K::Or: {
        std::vector<QfpaFormula> cs;
        for (const auto& c : f.children()) cs.push_back(rewrite(c));
        return f.kind() == K::And ? QfpaFormula::conjunction(std::move(cs)) : QfpaFormula::disjunction(std::move(cs));
      }
      case K::Not: return QfpaFormula::negation(rewrite(f.children()[0]));
    }
    return QfpaFormula::truth();
  }

  const FragmentProblem& p_;
  SumForm out_;
  std::map<Symbol, QfpaFormula> guards_;
  std::map<Symbol, Indicator> indicator_;
  std::vector<SumTarget> counters_;
};

}  // namespace

SumForm eliminate_bapa(const ValidatedProblem& p) { return BapaEliminator(p.problem()).run(); }

GuardedSum merge_set_interpretations(const SumForm& s) {
  GuardedSum g{s.arrays, s.ints, s.psi, s.sum};
  if (s.interps.empty()) return g;
  std::vector<QfpaFormula> parts;
  if (!s.sum.guard.is_truth()) parts.push_back(s.sum.guard);
  for (const auto& in : s.interps) {
    if (!in.universal()) throw std::invalid_argument("merge_set_interpretations expects universal constraints only");
    parts.push_back(in.guard);
  }
  g.sum.guard = parts.size() == 1 ? parts[0] : QfpaFormula::conjunction(std::move(parts));
  return g;
}

LiaCardProblem sums_to_star(const GuardedSum& g) {
  LiaCardProblem out;
  out.f0 = g.psi;
  if (g.sum.targets.empty()) return out;
  StarAtom star;
  for (const auto& t : g.sum.targets) {
    star.u.push_back(t.sum_var);
    star.body_vars.push_back(t.array);
  }
  star.body = g.sum.guard;
  star.exponent = Symbol::intern("#x0");
  out.stars.push_back(std::move(star));
  return out;
}

Stages normalize(const ValidatedProblem& p, Fault fault) {
  Stages st;
  st.sum_form = eliminate_bapa(p);
  st.guarded = merge_set_interpretations(st.sum_form);
  if (fault == Fault::SkipMerge) st.guarded.sum.guard = st.sum_form.sum.guard;
  st.lia = sums_to_star(st.guarded);
  return st;
}

FragmentProblem as_fragment(const SumForm& s) {
  FragmentProblem p;
  p.arrays = s.arrays;
  p.ints = s.ints;
  p.bapa = BapaFormula::qfpa(s.psi);
  p.interps = s.interps;
  if (!s.sum.targets.empty()) p.sum = s.sum;
  return p;
}

FragmentProblem as_fragment(const GuardedSum& g) {
  FragmentProblem p;
  p.arrays = g.arrays;
  p.ints = g.ints;
  p.bapa = BapaFormula::qfpa(g.psi);
  if (!g.sum.targets.empty()) p.sum = g.sum;
  return p;
}

}  // namespace powsum
