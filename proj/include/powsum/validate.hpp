#pragma once

#include "powsum/formula.hpp"

#include <optional>
#include <string>
#include <vector>

namespace powsum {

enum class ViolationKind {
  UndecidableSharing,  // declared integer variable inside a guard
  NegativeCardinality, // set/cardinality atom under negation, or card op other than = and <=
  UndeclaredSymbol,
  DuplicateDeclaration,
  SortMismatch,        // e.g. an array used outside a guard, a set used as a number
  MissingInterpretation,
  DuplicateInterpretation,
  UniversalInterpretation,
  DuplicateTarget,
  ReservedName,        // '#'-prefixed names belong to the normalizer
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationResult;
ValidationResult validate_fragment(const FragmentProblem& p);

/// A FragmentProblem that passed validate_fragment. Only constructible there.
class ValidatedProblem {
 public:
  const FragmentProblem& problem() const { return problem_; }
  const FragmentProblem* operator->() const { return &problem_; }

 private:
  friend ValidationResult validate_fragment(const FragmentProblem& p);
  explicit ValidatedProblem(FragmentProblem p) : problem_(std::move(p)) {}
  FragmentProblem problem_;
};

struct ValidationResult {
  std::optional<ValidatedProblem> problem;
  std::vector<Violation> violations;
  bool ok() const { return problem.has_value(); }
};

/// Checks the shape restrictions that keep the fragment decidable and the
/// encoding complete. Reports every violation, not just the first.
ValidationResult validate_fragment(const FragmentProblem& p);

}  // namespace powsum
