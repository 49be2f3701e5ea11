#include "powsum/oracle.hpp"

#include <sstream>

namespace powsum {

std::size_t DifferentialReport::disagreements() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.disagreement;
  return n;
}

std::size_t DifferentialReport::resource_limits() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.resource_limit;
  return n;
}

DifferentialEntry differential_check(const FragmentProblem& p, const OracleBounds& bounds, Fault fault,
                                     const SolveOptions& options) {
  DifferentialEntry e;
  auto v = validate_fragment(p);
  if (!v.ok()) {
    e.solver = Verdict::Invalid;
    e.disagreement = true;
    e.note = "generated problem failed validation";
    return e;
  }
  SolveReport r = solve_problem(p, options, fault);
  e.solver = r.verdict;
  e.oracle = brute_force_sat(*v.problem, bounds).status;

  if (r.verdict == Verdict::Sat && !r.consistent()) {
    e.disagreement = true;
    if (r.self_check && !r.self_check->accepted)
      e.note = std::string("certificate rejected at ") + to_string(r.self_check->failed);
    else
      for (const auto& c : r.model_report->conjuncts)
        if (!c.ok) e.note += c.name + " fails; ";
  } else if (r.verdict == Verdict::Unsat && e.oracle == OracleStatus::Sat) {
    e.disagreement = true;
    e.note = "oracle found a model";
  } else if (r.verdict == Verdict::Unknown || e.oracle == OracleStatus::ResourceLimit) {
    e.resource_limit = true;
    e.note = r.diagnostic;
  }
  return e;
}

DifferentialReport differential_run(std::uint64_t seed, std::size_t count, const OracleBounds& bounds, Fault fault,
                                    const SolveOptions& options) {
  DifferentialReport report;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    DifferentialEntry e = differential_check(gen_random_problem(s), bounds, fault, options);
    e.seed = s;
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::string format_entry(const DifferentialEntry& e) {
  std::ostringstream os;
  os << "seed=" << e.seed << " solver=" << to_string(e.solver) << " oracle=" << to_string(e.oracle)
     << " status=" << (e.disagreement ? "DISAGREE" : e.resource_limit ? "RESOURCE_LIMIT" : "ok");
  if (!e.note.empty()) os << " note=\"" << e.note << '"';
  return os.str();
}

}  // namespace powsum
