#pragma once

#include "powsum/pipeline.hpp"
#include "powsum/semilinear.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace powsum {

struct SolveOptions {
  std::size_t max_dnf = 64;
  /// Cap on |I₁| and |J| per star atom.
  std::size_t max_support = 8;
  /// Cap on implication branches per F0 cube.
  std::uint64_t max_branches = 2048;
  IlpOptions ilp;
  HilbertOptions hilbert;
};

/// Columns and DNF cubes of one star body. Columns are the body variables
/// followed by the remaining body symbols in name order.
struct AtomLayout {
  std::vector<Symbol> columns;
  std::vector<Cube> cubes;
};

/// Variables of F0, star u-vectors and exponents in name order, with the
/// DNF cubes of F0.
struct OuterLayout {
  std::vector<Symbol> vars;
  std::vector<Cube> cubes;
};

/// Deterministic; shared by solver, certificate emission and verification.
/// Throws SizeLimitExceeded when a DNF exceeds `max_dnf` cubes.
AtomLayout atom_layout(const StarAtom& a, std::size_t max_dnf);
OuterLayout outer_layout(const LiaCardProblem& p, std::size_t max_dnf);

struct BaseGenerator {
  std::size_t cube = 0;
  IntVec vec;  // over AtomLayout::columns
};

struct PeriodGenerator {
  std::size_t base = 0;  // index into StarEncoding::bases
  IntVec vec;
};

/// Support of one star atom: bases I₁ with multiplicities μ ≥ 1, periods J
/// attached to bases with coefficients λ. Loaded bases I₀ are those with an
/// attached period.
struct StarEncoding {
  std::size_t atom = 0;
  std::vector<BaseGenerator> bases;
  std::vector<PeriodGenerator> periods;
  IntVec mu;
  IntVec lambda;

  std::vector<std::size_t> loaded() const;
};

/// Rows over the local columns [λ (|J|), μ' (|I₁|), u (u_dim), x] with
/// μ' = μ − 1: Σλ·b + Σμ'·a − u = −Σa and Σμ' − x = −|I₁|.
NatSystem star_atom_encode(const StarEncoding& e, std::size_t u_dim);

struct Column {
  enum class Kind { Lambda, Mu, Outer, Slack };
  Kind kind;
  std::size_t atom = 0;
  std::size_t index = 0;
  Symbol symbol;  // Outer only
};

struct CombinedSystem {
  NatSystem system;
  std::vector<Column> legend;
};

/// Generator blocks stacked above the F0 cube block; u and x columns are
/// shared through the outer variables. Throws std::invalid_argument on
/// dimension mismatches.
CombinedSystem build_combined_system(const LiaCardProblem& p, const std::vector<StarEncoding>& encodings,
                                     const OuterLayout& outer, std::size_t f0_cube);

struct LiaCardSolution {
  std::size_t f0_cube = 0;
  std::vector<StarEncoding> encodings;
  Assignment outer;
};

struct LiaCardResult {
  SatStatus status = SatStatus::Unsat;
  std::optional<LiaCardSolution> solution;
  std::string diagnostic;
};

LiaCardResult solve_lia_card(const LiaCardProblem& p, const SolveOptions& options = {});

}  // namespace powsum
