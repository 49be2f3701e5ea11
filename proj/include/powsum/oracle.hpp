#pragma once

#include "powsum/driver.hpp"
#include "powsum/formula.hpp"
#include "powsum/validate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace powsum {

struct OracleBounds {
  std::size_t max_len = 3;  // L
  std::size_t max_val = 4;  // V
  std::optional<Int> int_bound;  // default V·L
  std::uint64_t max_steps = 20'000'000;

  Int effective_int_bound() const;
};

enum class OracleStatus { Sat, UnsatAtBound, ResourceLimit };

const char* to_string(OracleStatus s);

struct OracleResult {
  OracleStatus status = OracleStatus::UnsatAtBound;
  std::optional<Model> model;
  std::uint64_t steps = 0;
};

/// Exhaustive search over array prefixes of length L with entries in [0..V]
/// and integers in [0..int_bound]. Prefixes are ordered position by position,
/// each position being the tuple of array values in declaration order; the
/// returned model is the least one in that order, ints last.
OracleResult brute_force_sat(const ValidatedProblem& p, const OracleBounds& b);

/// Same search without validation; accepts universal interpretations so
/// pipeline stages can be explored.
OracleResult brute_force_sat_raw(const FragmentProblem& p, const OracleBounds& b);

enum class ProblemSize { Small, Medium };

/// Reproducible sampler; every result passes validate_fragment.
FragmentProblem gen_random_problem(std::uint64_t seed, ProblemSize size = ProblemSize::Small);

struct DifferentialEntry {
  std::uint64_t seed = 0;
  Verdict solver = Verdict::Unknown;
  OracleStatus oracle = OracleStatus::ResourceLimit;
  bool disagreement = false;
  bool resource_limit = false;
  std::string note;
};

struct DifferentialReport {
  std::vector<DifferentialEntry> entries;
  std::size_t disagreements() const;
  std::size_t resource_limits() const;
};

/// Instance i uses seed + i.
DifferentialReport differential_run(std::uint64_t seed, std::size_t count, const OracleBounds& bounds,
                                    Fault fault = Fault::None, const SolveOptions& options = {});

/// One instance: solver against oracle on a given problem.
DifferentialEntry differential_check(const FragmentProblem& p, const OracleBounds& bounds, Fault fault = Fault::None,
                                     const SolveOptions& options = {});

std::string format_entry(const DifferentialEntry& e);

}  // namespace powsum
