#pragma once

#include "powsum/eval.hpp"
#include "powsum/formula.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace powsum {

/// Linear system over naturals: eq·x = eq_rhs and le·x ≤ le_rhs.
struct NatSystem {
  std::size_t arity = 0;
  IntMatrix eq;
  IntVec eq_rhs;
  IntMatrix le;
  IntVec le_rhs;

  explicit NatSystem(std::size_t n = 0) : arity(n) {}
  void add_eq(IntVec row, Int rhs);
  void add_le(IntVec row, Int rhs);
  std::size_t rows() const { return eq.size() + le.size(); }
  bool homogeneous() const;
  /// Row-by-row check; entries of x must be naturals.
  bool satisfied_by(const IntVec& x) const;
  /// The system with every right-hand side replaced by zero.
  NatSystem homogenized() const;
};

/// Translates a negation-free cube. Columns are `vars` in order, followed by
/// two slack columns per modulo atom: t1 ≡ t2 (mod k) becomes
/// t1 − t2 − k·q + k·q' = 0. Throws std::invalid_argument on Neq atoms or
/// variables outside `vars`.
NatSystem atoms_to_system(const Cube& cube, const std::vector<Symbol>& vars);

enum class IlpStatus { Feasible, Infeasible, ResourceLimit };

struct IlpOptions {
  std::uint64_t max_nodes = 200000;
  /// Replaces the small-model bound as the search box when set.
  std::optional<Int> box;
};

struct IlpResult {
  IlpStatus status = IlpStatus::Infeasible;
  IntVec solution;
  Int box;
  std::uint64_t nodes = 0;
};

/// M = n·(m·a)^(2m+1) with m the row count, n the column count after adding
/// one slack per inequality, and a the largest absolute entry of the matrix
/// and right-hand side.
Int small_model_bound(const NatSystem& sys);

/// Exact feasibility over [0..box]^n by depth-first branch and bound with
/// interval propagation, a lattice test on the equalities and
/// Fourier–Motzkin refutation of stalled nodes.
IlpResult ilp_feasible(const NatSystem& sys, const IlpOptions& options = {});

/// Root-level refutation only (no branching). True means infeasible.
bool quick_infeasible(const NatSystem& sys);

/// Thrown when a completion search or enumeration exceeds its node cap.
using ResourceLimitExceeded = SizeLimitExceeded;

struct HilbertOptions {
  std::uint64_t max_nodes = 400000;
};

/// Irreducible nonzero solutions of a homogeneous system. Inequalities are
/// lifted with slack columns before the completion search, so for systems
/// with inequalities the vectors are ≤-incomparable in the lifted space.
/// Sorted lexicographically.
std::vector<IntVec> hilbert_basis(const NatSystem& sys, const HilbertOptions& options = {});

/// {a + Σ α_j p_j : a ∈ bases, α ∈ ℕ}.
struct HybridLinearSet {
  std::vector<IntVec> bases;
  std::vector<IntVec> periods;
  friend bool operator==(const HybridLinearSet&, const HybridLinearSet&) = default;
};

/// Minimal solutions together with the Hilbert basis of the homogeneous
/// part, computed by one completion search on the homogenized system.
HybridLinearSet solution_set(const NatSystem& sys, const HilbertOptions& options = {});

/// Solutions minimal for x ≼ y ⇔ x ≤ y and y − x solves the homogeneous part.
std::vector<IntVec> minimal_solutions(const NatSystem& sys, const HilbertOptions& options = {});

struct SemilinearSet {
  std::size_t arity = 0;
  std::vector<HybridLinearSet> components;
};

struct SemilinearOptions {
  std::size_t max_cubes = 64;
  HilbertOptions hilbert;
  IlpOptions ilp;
};

/// One component per satisfiable DNF cube of f, projected onto `vars`.
SemilinearSet semilinear_nf(const QfpaFormula& f, const std::vector<Symbol>& vars, const SemilinearOptions& options = {});

/// Throws ResourceLimitExceeded when an ILP call hits its node cap.
bool member(const SemilinearSet& s, const IntVec& x, const IlpOptions& options = {});

enum class SatStatus { Sat, Unsat, ResourceLimit };

struct QfpaSatResult {
  SatStatus status = SatStatus::Unsat;
  Assignment model;
  std::string diagnostic;
};

/// DNF cube by cube; the witness satisfies f under eval_qfpa.
QfpaSatResult qfpa_sat(const QfpaFormula& f, const SemilinearOptions& options = {});

/// Filter for DnfOptions::keep: false only for cubes refuted at the root.
bool cube_may_be_satisfiable(const Cube& cube);

}  // namespace powsum
