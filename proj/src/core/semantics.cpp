#include "powsum/semantics.hpp"

#include "powsum/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace powsum {

int SetProfile::index_of(Symbol s) const {
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sets[i] == s) return static_cast<int>(i);
  return -1;
}

bool set_term_holds(const SetTerm& t, const SetProfile& profile, std::uint64_t pattern) {
  using K = SetTerm::Kind;
  switch (t.kind()) {
    case K::Var: {
      int i = profile.index_of(t.symbol());
      if (i < 0) throw std::invalid_argument("unknown set '" + t.symbol().name() + "'");
      return (pattern >> i) & 1U;
    }
    case K::Union: return set_term_holds(t.children()[0], profile, pattern) || set_term_holds(t.children()[1], profile, pattern);
    case K::Inter: return set_term_holds(t.children()[0], profile, pattern) && set_term_holds(t.children()[1], profile, pattern);
    case K::Compl: return !set_term_holds(t.children()[0], profile, pattern);
    case K::Empty: return false;
    case K::Full: return true;
  }
  return false;
}

std::optional<Int> cardinality(const SetTerm& t, const SetProfile& profile) {
  if (set_term_holds(t, profile, profile.tail)) return std::nullopt;
  Int n = 0;
  for (const auto& [pattern, count] : profile.positions)
    if (set_term_holds(t, profile, pattern)) n += count;
  return n;
}

namespace {

bool subset_of(const SetTerm& a, const SetTerm& b, const SetProfile& profile) {
  auto ok = [&](std::uint64_t p) { return !set_term_holds(a, profile, p) || set_term_holds(b, profile, p); };
  if (!ok(profile.tail)) return false;
  for (const auto& [pattern, count] : profile.positions)
    if (count > 0 && !ok(pattern)) return false;
  return true;
}

bool compare_card(CardOp op, const Int& n, const Int& t) {
  switch (op) {
    case CardOp::Eq: return n == t;
    case CardOp::Le: return n <= t;
    case CardOp::Lt: return n < t;
    case CardOp::Ge: return n >= t;
    case CardOp::Gt: return n > t;
  }
  return false;
}

}  // namespace

bool eval_bapa(const BapaFormula& f, const SetProfile& profile, const std::function<const Int&(Symbol)>& ints) {
  using K = BapaFormula::Kind;
  switch (f.kind()) {
    case K::Subset: return subset_of(f.left(), f.right(), profile);
    case K::SetEq: return subset_of(f.left(), f.right(), profile) && subset_of(f.right(), f.left(), profile);
    case K::Card: {
      auto n = cardinality(f.left(), profile);
      return n && compare_card(f.card_op(), *n, f.bound().evaluate(ints));
    }
    case K::Qfpa: return eval_qfpa(f.qfpa_formula(), ints);
    case K::And:
      for (const auto& c : f.children())
        if (!eval_bapa(c, profile, ints)) return false;
      return true;
    case K::Or:
      for (const auto& c : f.children())
        if (eval_bapa(c, profile, ints)) return true;
      return false;
    case K::Not: return !eval_bapa(f.children()[0], profile, ints);
  }
  return false;
}

namespace {

const Int kZero = 0;

struct Positions {
  const FragmentProblem& p;
  const Model& m;
  std::size_t length = 0;

  Positions(const FragmentProblem& prob, const Model& model) : p(prob), m(model) {
    for (const auto& [a, vs] : m.arrays) length = std::max(length, vs.size());
  }

  // Value of array `a` at position n; n == length denotes the zero tail.
  const Int& at(Symbol a, std::size_t n) const {
    auto it = m.arrays.find(a);
    if (it == m.arrays.end() || n >= it->second.size()) return kZero;
    return it->second[n];
  }

  bool guard(const QfpaFormula& g, std::size_t n) const {
    return eval_qfpa(g, [&](Symbol s) -> const Int& { return at(s, n); });
  }
};

std::vector<const SetInterpretation*> set_interps(const FragmentProblem& p) {
  std::vector<const SetInterpretation*> out(p.sets.size(), nullptr);
  for (const auto& in : p.interps) {
    if (in.universal()) continue;
    for (std::size_t i = 0; i < p.sets.size(); ++i)
      if (p.sets[i] == *in.set_var && !out[i]) out[i] = &in;
  }
  return out;
}

std::uint64_t pattern_at(const Positions& pos, const std::vector<const SetInterpretation*>& interps, std::size_t n) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < interps.size(); ++i)
    if (interps[i] && pos.guard(interps[i]->guard, n)) bits |= (std::uint64_t{1} << i);
  return bits;
}

}  // namespace

ModelReport check_model_raw(const FragmentProblem& p, const Model& m) {
  ModelReport report;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    report.ok = report.ok && ok;
    report.conjuncts.push_back({std::move(name), ok, std::move(detail)});
  };

  if (p.sets.size() > 64) throw std::invalid_argument("at most 64 set variables are supported");

  // Coverage and non-negativity.
  {
    std::string detail;
    for (Symbol a : p.arrays) {
      auto it = m.arrays.find(a);
      if (it == m.arrays.end()) continue;  // empty prefix
      for (const auto& v : it->second)
        if (v < 0) detail += "array '" + a.name() + "' has a negative entry; ";
    }
    for (Symbol x : p.ints) {
      auto it = m.ints.find(x);
      if (it == m.ints.end()) detail += "int '" + x.name() + "' unbound; ";
      else if (it->second < 0) detail += "int '" + x.name() + "' is negative; ";
    }
    add("coverage", detail.empty(), detail);
    if (!detail.empty()) return report;
  }

  Positions pos(p, m);
  const std::size_t tail = pos.length;  // index of the zero tail

  // Universal interpretations: every prefix position and the tail.
  {
    std::string detail;
    for (const auto& in : p.interps) {
      if (!in.universal()) continue;
      for (std::size_t n = 0; n <= tail; ++n) {
        if (!pos.guard(in.guard, n)) {
          detail += n == tail ? "universal constraint fails on the zero tail; "
                              : "universal constraint fails at index " + std::to_string(n) + "; ";
          break;
        }
      }
    }
    add("universal", detail.empty(), detail);
  }

  // Set interpretations, compared with any stored set values.
  auto interps = set_interps(p);
  SetProfile profile;
  profile.sets = p.sets;
  for (std::size_t n = 0; n < tail; ++n) profile.positions.emplace_back(pattern_at(pos, interps, n), 1);
  profile.tail = pattern_at(pos, interps, tail);
  {
    std::string detail;
    if (!m.sets.empty()) {
      Model derived = m;
      derive_set_values(p, derived);
      for (const auto& [s, v] : m.sets) {
        auto it = derived.sets.find(s);
        if (it == derived.sets.end() || !(it->second == v))
          detail += "stored value of set '" + s.name() + "' disagrees with its interpretation; ";
      }
    }
    add("interpretations", detail.empty(), detail);
  }

  // Sums over guarded positions; the zero tail contributes nothing.
  {
    std::string detail;
    if (p.sum) {
      std::vector<Int> totals(p.sum->targets.size());
      for (std::size_t n = 0; n < tail; ++n) {
        if (!pos.guard(p.sum->guard, n)) continue;
        for (std::size_t t = 0; t < totals.size(); ++t) totals[t] += pos.at(p.sum->targets[t].array, n);
      }
      for (std::size_t t = 0; t < totals.size(); ++t) {
        const auto& target = p.sum->targets[t];
        const Int& have = m.ints.at(target.sum_var);
        if (have != totals[t])
          detail += "'" + target.sum_var.name() + "' is " + have.str() + " but the guarded sum of '" +
                    target.array.name() + "' is " + totals[t].str() + "; ";
      }
    }
    add("sum", detail.empty(), detail);
  }

  {
    bool ok = eval_bapa(p.bapa, profile, [&](Symbol s) -> const Int& {
      auto it = m.ints.find(s);
      if (it == m.ints.end()) throw MissingBinding(s);
      return it->second;
    });
    add("bapa", ok, ok ? "" : "Boolean algebra part evaluates to false");
  }
  return report;
}

ModelReport check_model(const ValidatedProblem& p, const Model& m) { return check_model_raw(p.problem(), m); }

void derive_set_values(const FragmentProblem& p, Model& m) {
  Positions pos(p, m);
  auto interps = set_interps(p);
  m.sets.clear();
  for (std::size_t i = 0; i < p.sets.size(); ++i) {
    if (!interps[i]) continue;
    SetValue v;
    v.cofinite = pos.guard(interps[i]->guard, pos.length);
    for (std::size_t n = 0; n < pos.length; ++n)
      if (pos.guard(interps[i]->guard, n) != v.cofinite) v.elements.push_back(n);
    m.sets[p.sets[i]] = std::move(v);
  }
}

}  // namespace powsum
