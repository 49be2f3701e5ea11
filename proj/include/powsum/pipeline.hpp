#pragma once

#include "powsum/formula.hpp"
#include "powsum/validate.hpp"

#include <vector>

namespace powsum {

/// Set-free form: ψ over integers, universal constraints over arrays and one
/// sum whose targets include the cardinality counters.
struct SumForm {
  std::vector<Symbol> arrays;  // user arrays followed by fresh ones
  std::vector<Symbol> ints;    // user ints followed by counters
  QfpaFormula psi;
  std::vector<SetInterpretation> interps;  // all universal
  SumSpec sum;                             // empty targets when nothing is summed
};

/// Universal constraints folded into the single sum guard.
struct GuardedSum {
  std::vector<Symbol> arrays;
  std::vector<Symbol> ints;
  QfpaFormula psi;
  SumSpec sum;
};

/// u ∈ {body_vars : body}^exponent. Variables of `body` other than
/// `body_vars` are existential per addend.
struct StarAtom {
  std::vector<Symbol> u;
  std::vector<Symbol> body_vars;
  QfpaFormula body;
  Symbol exponent;
  friend bool operator==(const StarAtom&, const StarAtom&) = default;
};

struct LiaCardProblem {
  QfpaFormula f0;
  std::vector<StarAtom> stars;
  friend bool operator==(const LiaCardProblem&, const LiaCardProblem&) = default;
};

struct Stages {
  SumForm sum_form;
  GuardedSum guarded;
  LiaCardProblem lia;
};

enum class Fault { None, SkipMerge };

SumForm eliminate_bapa(const ValidatedProblem& p);
GuardedSum merge_set_interpretations(const SumForm& s);
LiaCardProblem sums_to_star(const GuardedSum& g);
Stages normalize(const ValidatedProblem& p, Fault fault = Fault::None);

/// Stage as a problem of the input shape (with universal interpretations),
/// so the oracle and check_model_raw can evaluate it.
FragmentProblem as_fragment(const SumForm& s);
FragmentProblem as_fragment(const GuardedSum& g);

}  // namespace powsum
