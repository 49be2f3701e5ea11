#pragma once

#include "powsum/formula.hpp"

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace powsum {

class MissingBinding : public std::runtime_error {
 public:
  explicit MissingBinding(Symbol s) : std::runtime_error("no binding for '" + s.name() + "'"), symbol_(s) {}
  Symbol symbol() const { return symbol_; }

 private:
  Symbol symbol_;
};

class SizeLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool eval_atom(const QfpaAtom& a, const std::function<const Int&(Symbol)>& lookup);
bool eval_qfpa(const QfpaFormula& f, const std::function<const Int&(Symbol)>& lookup);

/// Throws MissingBinding when a free variable of `f` is not in `env`.
bool eval_qfpa(const QfpaFormula& f, const Assignment& env);

/// Conjunction of negation-free atoms. Cubes produced by to_dnf never
/// contain Neq atoms.
using Cube = std::vector<QfpaAtom>;

struct DnfOptions {
  std::size_t max_cubes = 64;
  /// Optional pruning hook applied to partial cubes; returning false drops
  /// the cube. Must only drop unsatisfiable cubes.
  std::function<bool(const Cube&)> keep;
};

/// Disjunctive normal form with negations eliminated:
/// ¬(a ≤ b) ↦ a ≥ b+1, ¬(a = b) ↦ a ≤ b−1 ∨ a ≥ b+1, ¬(a ≡ b mod k) ↦ ∨ a ≡ b+ρ (mod k).
/// Throws SizeLimitExceeded when more than `max_cubes` cubes survive.
std::vector<Cube> to_dnf(const QfpaFormula& f, const DnfOptions& options = {});

QfpaFormula cube_formula(const Cube& c);
QfpaFormula dnf_formula(const std::vector<Cube>& cubes);

/// Pushes negation through the Boolean structure down to atoms.
QfpaFormula negate(const QfpaFormula& f);

}  // namespace powsum
