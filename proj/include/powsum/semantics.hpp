#pragma once

#include "powsum/formula.hpp"
#include "powsum/validate.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace powsum {

/// Membership pattern of index positions with respect to the declared set
/// variables. Positions sharing a pattern are interchangeable for every
/// set-level question, so they are stored once with a multiplicity. The tail
/// describes the infinitely many positions where every array is zero.
struct SetProfile {
  std::vector<Symbol> sets;  // bit i of a pattern is membership in sets[i]
  std::vector<std::pair<std::uint64_t, Int>> positions;
  std::uint64_t tail = 0;

  int index_of(Symbol s) const;
};

bool set_term_holds(const SetTerm& t, const SetProfile& profile, std::uint64_t pattern);

/// |t|, or nullopt when the set is infinite.
std::optional<Int> cardinality(const SetTerm& t, const SetProfile& profile);

/// Truth of a BAPA formula. Cardinality atoms over infinite sets are false.
bool eval_bapa(const BapaFormula& f, const SetProfile& profile, const std::function<const Int&(Symbol)>& ints);

struct ConjunctReport {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct ModelReport {
  bool ok = true;
  std::vector<ConjunctReport> conjuncts;
};

/// Checks a finite-support model against the problem: sums, set
/// interpretations and the BAPA part, one report entry per conjunct group.
ModelReport check_model(const ValidatedProblem& p, const Model& m);

/// Same check on an unvalidated problem; also understands universal
/// interpretations, so intermediate pipeline stages can be evaluated.
ModelReport check_model_raw(const FragmentProblem& p, const Model& m);

/// Fills `m.sets` from the arrays and interpretations of `p`.
void derive_set_values(const FragmentProblem& p, Model& m);

}  // namespace powsum
