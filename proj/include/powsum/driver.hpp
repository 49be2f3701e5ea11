#pragma once

#include "powsum/certificate.hpp"
#include "powsum/liacard.hpp"
#include "powsum/pipeline.hpp"
#include "powsum/semantics.hpp"
#include "powsum/validate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace powsum {

enum class Verdict { Sat, Unsat, Unknown, Invalid };

const char* to_string(Verdict v);

struct SolveReport {
  Verdict verdict = Verdict::Unknown;
  std::vector<Violation> violations;  // Invalid only
  std::optional<Stages> stages;
  std::optional<Certificate> certificate;
  std::optional<VerifyResult> self_check;
  std::optional<Model> model;
  std::optional<ModelReport> model_report;
  std::string diagnostic;

  /// Sat with an accepted certificate and a model that checks.
  bool consistent() const;
};

/// validate, normalize, solve, then emit, verify and unfold the certificate.
SolveReport solve_problem(const FragmentProblem& p, const SolveOptions& options = {}, Fault fault = Fault::None);

}  // namespace powsum
