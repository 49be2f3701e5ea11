#include "powsum/driver.hpp"

namespace powsum {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Unknown: return "UNKNOWN";
    case Verdict::Invalid: return "INVALID";
  }
  return "?";
}

bool SolveReport::consistent() const {
  return verdict == Verdict::Sat && self_check && self_check->accepted && model_report && model_report->ok;
}

SolveReport solve_problem(const FragmentProblem& p, const SolveOptions& options, Fault fault) {
  SolveReport r;
  auto v = validate_fragment(p);
  if (!v.ok()) {
    r.verdict = Verdict::Invalid;
    r.violations = std::move(v.violations);
    return r;
  }
  try {
    r.stages = normalize(*v.problem, fault);
    auto result = solve_lia_card(r.stages->lia, options);
    r.diagnostic = result.diagnostic;
    if (result.status == SatStatus::Unsat) {
      r.verdict = Verdict::Unsat;
      return r;
    }
    if (result.status == SatStatus::ResourceLimit) {
      r.verdict = Verdict::Unknown;
      return r;
    }
    r.verdict = Verdict::Sat;
    r.certificate = emit_certificate(r.stages->lia, *result.solution, options);
    r.self_check = verify_certificate(r.stages->lia, *r.certificate);
    if (!r.self_check->accepted) return r;
    auto rec = reconstruct_model(p, r.stages->lia, *r.certificate);
    r.model_report = check_model(*v.problem, rec.model);
    r.model = std::move(rec.model);
  } catch (const SizeLimitExceeded& e) {
    r.verdict = Verdict::Unknown;
    r.diagnostic = e.what();
  }
  return r;
}

}  // namespace powsum
