#pragma once

#include "powsum/liacard.hpp"
#include "powsum/semantics.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace powsum {

/// Matrices of a DNF cube as shipped in a certificate. The verifier rebuilds
/// them and rejects a certificate whose copy differs.
struct ShippedSystem {
  std::size_t cube = 0;
  NatSystem system;
  friend bool operator==(const ShippedSystem& a, const ShippedSystem& b);
};

struct AtomCertificate {
  std::size_t arity = 0;
  std::vector<ShippedSystem> cubes;
  std::vector<BaseGenerator> bases;
  std::vector<PeriodGenerator> periods;
  IntVec mu;      // per base, ≥ 1
  IntVec lambda;  // per period
};

struct Certificate {
  std::uint64_t digest = 0;
  ShippedSystem f0;
  std::vector<AtomCertificate> atoms;
  std::map<Symbol, Int, ByName> x;  // exponents
  std::map<Symbol, Int, ByName> u;  // star u-vectors
  std::map<Symbol, Int, ByName> v;  // remaining F0 variables
};

/// FNV-1a (64 bit) of the printed problem.
std::uint64_t digest(const LiaCardProblem& p);

Certificate emit_certificate(const LiaCardProblem& p, const LiaCardSolution& s, const SolveOptions& options = {});

enum class Check { Digest, Malformed, Cubes, Bases, Periods, Block, Exponent, F0 };

const char* to_string(Check c);

struct VerifyResult {
  bool accepted = false;
  Check failed = Check::Malformed;
  std::string reason;
};

/// Checks in order: digest, well-formedness, (1) cube indices and matrices,
/// (2) bases satisfy their cube, (3) periods satisfy its homogeneous part,
/// (4) generator block rows, (5) exponent bookkeeping, (6) the F0 cube.
VerifyResult verify_certificate(const LiaCardProblem& p, const Certificate& c);

/// Addends of one star atom over the atom's layout columns.
struct StarWitness {
  std::vector<Symbol> columns;
  std::vector<IntVec> addends;
};

struct Reconstruction {
  std::vector<StarWitness> witnesses;
  Model model;  // for `original`
};

/// Unfolds the generators into explicit addends and lays them out as array
/// prefixes of a model of `original`. Expects a verified certificate and at
/// most one star atom.
Reconstruction reconstruct_model(const FragmentProblem& original, const LiaCardProblem& p, const Certificate& c);

std::string print_certificate(const Certificate& c);
/// Throws SyntaxError or DimensionMismatch.
Certificate parse_certificate(std::string_view text);

}  // namespace powsum
