#include "powsum/cli.hpp"

#include "powsum/driver.hpp"
#include "powsum/oracle.hpp"
#include "powsum/text.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace powsum {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FragmentProblem load_problem(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_problem(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

ValidatedProblem validated(const FragmentProblem& p) {
  auto v = validate_fragment(p);
  if (v.ok()) return std::move(*v.problem);
  std::string msg;
  for (const auto& x : v.violations) msg += std::string(msg.empty() ? "" : "\n") + to_string(x.kind) + ": " + x.message;
  throw UsageError(msg);
}

void dump_stages(std::ostream& out, const Stages& st) {
  out << "; set-free form\n" << print_sum_form(st.sum_form) << "; single guarded sum\n"
      << print_guarded_sum(st.guarded) << "; star form\n" << print_lia_card(st.lia);
}

struct Options {
  std::string file;
  std::string cert;
  bool dump = false;
  std::size_t max_dnf = 64;
  std::size_t max_support = 8;
  std::size_t max_len = 3;
  std::size_t max_val = 4;
  std::optional<std::uint64_t> int_bound;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::string fault = "none";
};

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  FragmentProblem p = load_problem(o.file);
  validated(p);
  SolveOptions so;
  so.max_dnf = o.max_dnf;
  so.max_support = o.max_support;
  SolveReport r = solve_problem(p, so);
  if (o.dump && r.stages) dump_stages(out, *r.stages);
  switch (r.verdict) {
    case Verdict::Unsat:
      out << "unsat\n";
      return kExitUnsat;
    case Verdict::Unknown:
      out << "unknown\n";
      if (!r.diagnostic.empty()) err << "resource limit: " << r.diagnostic << '\n';
      return kExitUnknown;
    case Verdict::Invalid:
      throw UsageError("invalid problem");
    case Verdict::Sat:
      break;
  }
  if (!r.consistent()) throw std::logic_error("solver produced a certificate or model that does not check");
  out << "sat\n" << print_model(*r.model);
  if (!o.cert.empty()) {
    std::ofstream f(o.cert, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.cert + "'");
    f << print_certificate(*r.certificate);
  }
  return kExitSat;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  FragmentProblem p = load_problem(o.file);
  ValidatedProblem vp = validated(p);
  const std::string text = read_file(o.cert);
  Stages st = normalize(vp);
  Certificate c;
  try {
    c = parse_certificate(text);
  } catch (const ParseError& e) {
    out << "rejected: unreadable certificate: " << e.what() << '\n';
    return kExitUnsat;
  }
  VerifyResult v = verify_certificate(st.lia, c);
  if (!v.accepted) {
    out << "rejected: " << to_string(v.failed) << ": " << v.reason << '\n';
    return kExitUnsat;
  }
  Reconstruction rec = reconstruct_model(p, st.lia, c);
  ModelReport m = check_model(vp, rec.model);
  if (!m.ok) {
    out << "rejected: reconstructed model fails";
    for (const auto& x : m.conjuncts)
      if (!x.ok) out << ' ' << x.name;
    out << '\n';
    return kExitUnsat;
  }
  out << "accepted\n" << print_model(rec.model);
  return kExitSat;
}

OracleBounds bounds_of(const Options& o) {
  OracleBounds b;
  b.max_len = o.max_len;
  b.max_val = o.max_val;
  if (o.int_bound) b.int_bound = Int(*o.int_bound);
  return b;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream&) {
  ValidatedProblem vp = validated(load_problem(o.file));
  OracleResult r = brute_force_sat(vp, bounds_of(o));
  switch (r.status) {
    case OracleStatus::Sat:
      out << "sat\n" << print_model(*r.model);
      return kExitSat;
    case OracleStatus::UnsatAtBound:
      out << "unsat-at-bound (max-len " << o.max_len << ") (max-val " << o.max_val << ")\n";
      return kExitUnsat;
    case OracleStatus::ResourceLimit:
      out << "unknown\n";
      return kExitUnknown;
  }
  return kExitUnknown;
}

int cmd_fuzz(const Options& o, std::ostream& out, std::ostream&) {
  Fault fault = Fault::None;
  if (o.fault == "skip-merge") fault = Fault::SkipMerge;
  else if (o.fault != "none") throw UsageError("unknown fault '" + o.fault + "'");
  std::size_t disagreements = 0, limits = 0;
  const OracleBounds b = bounds_of(o);
  for (std::size_t i = 0; i < o.count; ++i) {
    DifferentialEntry e = differential_check(gen_random_problem(o.seed + i), b, fault);
    e.seed = o.seed + i;
    disagreements += e.disagreement;
    limits += e.resource_limit;
    out << format_entry(e) << '\n';
  }
  out << "instances=" << o.count << " disagreements=" << disagreements << " resource_limits=" << limits << '\n';
  return disagreements == 0 ? kExitSat : kExitUnsat;
}

int cmd_normalize(const Options& o, std::ostream& out, std::ostream&) {
  dump_stages(out, normalize(validated(load_problem(o.file))));
  return kExitUnknown;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedure for arrays with guarded sums and sets"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "decide a problem and print a model");
  solve->add_option("FILE", o.file)->required();
  solve->add_option("--cert", o.cert, "write a certificate on SAT");
  solve->add_flag("--dump-stages", o.dump, "print every normal form");
  solve->add_option("--max-dnf", o.max_dnf)->check(CLI::PositiveNumber);
  solve->add_option("--max-support", o.max_support)->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "check a certificate");
  verify->add_option("FILE", o.file)->required();
  verify->add_option("--cert", o.cert)->required();

  auto* oracle = app.add_subcommand("oracle", "bounded exhaustive search");
  oracle->add_option("FILE", o.file)->required();
  oracle->add_option("--max-len", o.max_len)->required()->check(CLI::PositiveNumber);
  oracle->add_option("--max-val", o.max_val)->required();
  oracle->add_option("--int-bound", o.int_bound);

  auto* fuzz = app.add_subcommand("fuzz", "differential run against the oracle");
  fuzz->add_option("--seed", o.seed)->required();
  fuzz->add_option("--count", o.count)->required();
  fuzz->add_option("--max-len", o.max_len)->check(CLI::PositiveNumber);
  fuzz->add_option("--max-val", o.max_val);
  fuzz->add_option("--inject-fault", o.fault, "none or skip-merge");

  auto* norm = app.add_subcommand("normalize", "print the normal forms");
  norm->add_option("FILE", o.file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitUnknown;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out, err);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (oracle->parsed()) return cmd_oracle(o, out, err);
    if (fuzz->parsed()) return cmd_fuzz(o, out, err);
    return cmd_normalize(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace powsum
