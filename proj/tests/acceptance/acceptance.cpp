// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when a
// blocking criterion fails.

#include "powsum/certificate.hpp"
#include "powsum/cli.hpp"
#include "powsum/driver.hpp"
#include "powsum/eval.hpp"
#include "powsum/oracle.hpp"
#include "powsum/semilinear.hpp"
#include "powsum/text.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

using namespace powsum;
namespace fs = std::filesystem;
using Rational = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rational>;

namespace {

constexpr std::uint64_t kFuzzSeed = 42;
constexpr std::size_t kFuzzCount = 500;
constexpr std::size_t kMaxLen = 3;
constexpr std::size_t kMaxVal = 4;
constexpr std::size_t kMinFormulas = 50;
constexpr int kGrid = 8;
constexpr int kIlpSystems = 200;
constexpr double kMaxSlope = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

OracleBounds fuzz_bounds() {
  OracleBounds b;
  b.max_len = kMaxLen;
  b.max_val = kMaxVal;
  return b;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Solver runs of the criterion-1 corpus, shared by criteria 1, 2 and 7.
struct FuzzInstance {
  std::uint64_t seed;
  FragmentProblem problem;
  SolveReport report;
};

std::vector<FuzzInstance>& fuzz_corpus() {
  static std::vector<FuzzInstance> runs = [] {
    std::vector<FuzzInstance> out;
    for (std::uint64_t s = kFuzzSeed; s < kFuzzSeed + kFuzzCount; ++s) {
      auto p = gen_random_problem(s);
      auto r = solve_problem(p);
      out.push_back({s, std::move(p), std::move(r)});
    }
    return out;
  }();
  return runs;
}

Outcome differential_soundness() {
  DifferentialReport report = differential_run(kFuzzSeed, kFuzzCount, fuzz_bounds());
  std::size_t rejected_models = 0, sat = 0;
  for (const auto& run : fuzz_corpus()) {
    if (run.report.verdict != Verdict::Sat) continue;
    ++sat;
    if (!run.report.model_report || !run.report.model_report->ok) ++rejected_models;
  }
  std::ostringstream os;
  os << report.entries.size() << " instances, " << sat << " sat, " << report.disagreements() << " disagreements, "
     << rejected_models << " models rejected, " << report.resource_limits() << " resource limits";
  for (const auto& e : report.entries)
    if (e.disagreement) os << "\n    " << format_entry(e);
  return {report.entries.size() == kFuzzCount && report.disagreements() == 0 && rejected_models == 0, os.str()};
}

// Reads the witness the certificate describes and checks it against the
// star bodies and F0 directly.
bool certificate_claim_holds(const LiaCardProblem& lia, const FragmentProblem& original, const Certificate& c) {
  Assignment outer;
  for (const auto* section : {&c.x, &c.u, &c.v})
    for (const auto& [k, v] : *section) outer[k] = v;
  if (!eval_qfpa(lia.f0, outer)) return false;
  Reconstruction rec = reconstruct_model(original, lia, c);
  if (rec.witnesses.size() != lia.stars.size()) return false;
  for (std::size_t a = 0; a < lia.stars.size(); ++a) {
    const StarAtom& star = lia.stars[a];
    const StarWitness& w = rec.witnesses[a];
    if (Int(w.addends.size()) != outer.at(star.exponent)) return false;
    IntVec total(star.u.size(), 0);
    for (const auto& add : w.addends) {
      Assignment env;
      for (std::size_t k = 0; k < w.columns.size(); ++k) env[w.columns[k]] = add[k];
      if (!eval_qfpa(star.body, env)) return false;
      for (std::size_t d = 0; d < star.u.size(); ++d) total[d] += add[d];
    }
    for (std::size_t d = 0; d < star.u.size(); ++d)
      if (total[d] != outer.at(star.u[d])) return false;
  }
  auto v = validate_fragment(original);
  return v.ok() && check_model(*v.problem, rec.model).ok;
}

Outcome certificate_round_trip() {
  static const std::regex token(R"((^|[\s(])(-?\d+)(?=[\s)]))");
  std::size_t sat = 0, accepted = 0, mutants = 0, rejected = 0, unsound = 0;
  for (const auto& run : fuzz_corpus()) {
    if (run.report.verdict != Verdict::Sat) continue;
    ++sat;
    const LiaCardProblem& lia = run.report.stages->lia;
    const std::string printed = print_certificate(*run.report.certificate);
    Certificate reread = parse_certificate(printed);
    if (verify_certificate(lia, reread).accepted && certificate_claim_holds(lia, run.problem, reread)) ++accepted;

    for (auto it = std::sregex_iterator(printed.begin(), printed.end(), token); it != std::sregex_iterator(); ++it) {
      const auto pos = static_cast<std::size_t>(it->position(2));
      const auto len = static_cast<std::size_t>(it->length(2));
      const Int value(printed.substr(pos, len));
      for (int delta : {-1, 1}) {
        std::string mutant = printed;
        mutant.replace(pos, len, Int(value + delta).str());
        ++mutants;
        Certificate c;
        try {
          c = parse_certificate(mutant);
        } catch (const std::exception&) {
          ++rejected;
          continue;
        }
        if (!verify_certificate(lia, c).accepted) {
          ++rejected;
          continue;
        }
        bool holds = false;
        try {
          holds = certificate_claim_holds(lia, run.problem, c);
        } catch (const std::exception&) {
        }
        if (!holds) {
          ++unsound;
          std::cerr << "    accepted false mutant for seed " << run.seed << "\n";
        }
      }
    }
  }
  std::ostringstream os;
  os << accepted << "/" << sat << " certificates accepted; " << mutants << " mutants, " << rejected << " rejected, "
     << mutants - rejected - unsound << " accepted and still valid, " << unsound << " accepted but false";
  return {sat > 0 && accepted == sat && unsound == 0, os.str()};
}

Outcome semilinear_correctness() {
  std::size_t formulas = 0, points = 0, mismatches = 0;
  std::istringstream lines(slurp(fs::path(POWSUM_CORPUS_DIR) / "qfpa" / "formulas.qf"));
  std::string line;
  std::ostringstream notes;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == ';') continue;
    QfpaFormula f = parse_qfpa(line);
    auto set = f.variables();
    std::vector<Symbol> vars(set.begin(), set.end());
    std::sort(vars.begin(), vars.end(), ByName{});
    if (vars.size() > 3) return {false, "formula of arity > 3: " + line};
    ++formulas;
    SemilinearSet s = semilinear_nf(f, vars);
    IntVec x(vars.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == vars.size()) {
        Assignment env;
        for (std::size_t k = 0; k < vars.size(); ++k) env[vars[k]] = x[k];
        ++points;
        if (member(s, x) != eval_qfpa(f, env)) {
          if (++mismatches <= 5) notes << "\n    mismatch on " << line;
        }
        return;
      }
      for (int v = 0; v <= kGrid; ++v) {
        x[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  std::ostringstream os;
  os << formulas << " formulas, " << points << " points, " << mismatches << " mismatches" << notes.str();
  return {formulas >= kMinFormulas && mismatches == 0, os.str()};
}

// Minimal nonzero solutions of the homogeneous system in [0..bound]^n.
std::vector<IntVec> enumerate_minimal(const NatSystem& sys, int bound) {
  std::vector<IntVec> sols;
  IntVec x(sys.arity, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == sys.arity) {
      bool zero = std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; });
      if (!zero && sys.satisfied_by(x)) sols.push_back(x);
      return;
    }
    for (int v = 0; v <= bound; ++v) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  std::vector<IntVec> minimal;
  for (const auto& a : sols) {
    bool dominated = false;
    for (const auto& b : sols) {
      if (a == b) continue;
      bool le = true;
      for (std::size_t k = 0; k < a.size(); ++k) le = le && b[k] <= a[k];
      dominated = dominated || le;
    }
    if (!dominated) minimal.push_back(a);
  }
  std::sort(minimal.begin(), minimal.end());
  return minimal;
}

std::string show(const std::vector<IntVec>& vs) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    os << (i ? " " : "") << "(";
    for (std::size_t k = 0; k < vs[i].size(); ++k) os << (k ? "," : "") << vs[i][k];
    os << ")";
  }
  os << "}";
  return os.str();
}

Outcome hilbert_golden() {
  NatSystem sys(3);
  sys.add_eq({Int(1), Int(1), Int(-2)}, Int(0));
  auto basis = hilbert_basis(sys);
  std::sort(basis.begin(), basis.end());
  auto expected = enumerate_minimal(sys, 3);
  std::vector<IntVec> golden = {{Int(0), Int(2), Int(1)}, {Int(1), Int(1), Int(1)}, {Int(2), Int(0), Int(1)}};
  std::ostringstream os;
  os << "basis " << show(basis) << ", enumeration " << show(expected);
  return {basis == golden && expected == golden, os.str()};
}

// Exact integer feasibility of a small system inside [0..box]^n. The
// polyhedron is pointed, so an integer point z, written as a convex
// combination of vertices plus a conic combination of extreme rays, can be
// reduced by the integral parts of the ray coefficients without leaving the
// polyhedron or growing any coordinate. Searching below the vertex maxima
// plus the ray sums therefore decides the same question as the full box.
class ExactSmallIlp {
 public:
  explicit ExactSmallIlp(const NatSystem& sys) : sys_(sys), n_(sys.arity) {
    for (std::size_t r = 0; r < sys.le.size(); ++r) optional_.push_back({to_rat(sys.le[r]), Rational(sys.le_rhs[r])});
    for (std::size_t i = 0; i < n_; ++i) {
      RatVec row(n_, 0);
      row[i] = -1;
      optional_.push_back({row, Rational(0)});
    }
    extreme_points();
  }

  bool feasible_within(const Int& box) const {
    if (vertices_.empty()) return false;
    IntVec limit(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      Rational top = 0;
      for (const auto& v : vertices_) top = std::max(top, v[i]);
      Int reach = ceil(top);
      for (const auto& r : rays_) reach += r[i];
      limit[i] = std::min(reach, box);
    }
    IntVec x(n_, 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
      if (i == n_) return sys_.satisfied_by(x);
      for (Int v = 0; v <= limit[i]; ++v) {
        x[i] = v;
        if (rec(i + 1)) return true;
      }
      return false;
    };
    return rec(0);
  }

 private:
  struct Row {
    RatVec a;
    Rational b;
  };

  static RatVec to_rat(const IntVec& v) { return RatVec(v.begin(), v.end()); }

  static Int ceil(const Rational& q) {
    Int num = numerator(q), den = denominator(q);
    Int f = num / den;
    if (f * den < num) ++f;
    return f;
  }

  // Solution set of rows as {particular + span(kernel)}, or nothing.
  std::optional<std::pair<RatVec, std::vector<RatVec>>> solve(std::vector<Row> rows) const {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n_ && r < rows.size(); ++c) {
      std::size_t p = r;
      while (p < rows.size() && rows[p].a[c] == 0) ++p;
      if (p == rows.size()) continue;
      std::swap(rows[p], rows[r]);
      Rational inv = 1 / rows[r].a[c];
      for (auto& v : rows[r].a) v *= inv;
      rows[r].b *= inv;
      for (std::size_t q = 0; q < rows.size(); ++q) {
        if (q == r || rows[q].a[c] == 0) continue;
        Rational f = rows[q].a[c];
        for (std::size_t k = 0; k < n_; ++k) rows[q].a[k] -= f * rows[r].a[k];
        rows[q].b -= f * rows[r].b;
      }
      pivots.push_back(c);
      ++r;
    }
    for (std::size_t q = r; q < rows.size(); ++q)
      if (rows[q].b != 0) return std::nullopt;
    RatVec particular(n_, 0);
    for (std::size_t k = 0; k < pivots.size(); ++k) particular[pivots[k]] = rows[k].b;
    std::vector<RatVec> kernel;
    for (std::size_t c = 0; c < n_; ++c) {
      if (std::find(pivots.begin(), pivots.end(), c) != pivots.end()) continue;
      RatVec d(n_, 0);
      d[c] = 1;
      for (std::size_t k = 0; k < pivots.size(); ++k) d[pivots[k]] = -rows[k].a[c];
      kernel.push_back(d);
    }
    return std::make_pair(particular, kernel);
  }

  bool inside(const RatVec& x, bool homogeneous) const {
    for (std::size_t r = 0; r < sys_.eq.size(); ++r) {
      Rational s = 0;
      for (std::size_t k = 0; k < n_; ++k) s += Rational(sys_.eq[r][k]) * x[k];
      if (s != (homogeneous ? Rational(0) : Rational(sys_.eq_rhs[r]))) return false;
    }
    for (const auto& row : optional_) {
      Rational s = 0;
      for (std::size_t k = 0; k < n_; ++k) s += row.a[k] * x[k];
      if (s > (homogeneous ? Rational(0) : row.b)) return false;
    }
    return true;
  }

  static IntVec primitive(const RatVec& d) {
    Int l = 1;
    for (const auto& v : d) l = boost::multiprecision::lcm(l, Int(denominator(v)));
    IntVec out;
    Int g = 0;
    for (const auto& v : d) {
      out.push_back(Int(numerator(v) * (l / denominator(v))));
      g = boost::multiprecision::gcd(g, out.back());
    }
    for (auto& v : out) v /= g;
    return out;
  }

  void extreme_points() {
    const std::size_t k = optional_.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      for (bool homogeneous : {false, true}) {
        std::vector<Row> rows;
        for (std::size_t r = 0; r < sys_.eq.size(); ++r)
          rows.push_back({to_rat(sys_.eq[r]), homogeneous ? Rational(0) : Rational(sys_.eq_rhs[r])});
        for (std::size_t j = 0; j < k; ++j)
          if (mask >> j & 1) rows.push_back({optional_[j].a, homogeneous ? Rational(0) : optional_[j].b});
        auto sol = solve(rows);
        if (!sol) continue;
        if (!homogeneous && sol->second.empty() && inside(sol->first, false)) vertices_.insert(sol->first);
        if (homogeneous && sol->second.size() == 1)
          for (int sign : {1, -1}) {
            RatVec d = sol->second[0];
            for (auto& v : d) v *= sign;
            if (inside(d, true)) rays_.insert(primitive(d));
          }
      }
    }
  }

  const NatSystem& sys_;
  std::size_t n_;
  std::vector<Row> optional_;
  std::set<RatVec> vertices_;
  std::set<IntVec> rays_;
};

Outcome small_model_check() {
  std::mt19937 rng(20240613);
  std::uniform_int_distribution<int> dim(1, 3), entry(-2, 2), rhs(-3, 3), kind(0, 1);
  int agree = 0, feasible = 0, unstable = 0, limits = 0;
  std::ostringstream notes;
  for (int t = 0; t < kIlpSystems; ++t) {
    const int n = dim(rng), m = dim(rng);
    NatSystem sys(n);
    for (int r = 0; r < m; ++r) {
      IntVec row;
      for (int c = 0; c < n; ++c) row.emplace_back(entry(rng));
      if (kind(rng)) sys.add_eq(row, rhs(rng));
      else sys.add_le(row, rhs(rng));
    }
    const Int bound = small_model_bound(sys);
    ExactSmallIlp exact(sys);
    const bool at_m = exact.feasible_within(bound);
    const bool at_2m = exact.feasible_within(2 * bound);
    IlpResult r1 = ilp_feasible(sys);
    IlpOptions wide;
    wide.box = 2 * bound;
    IlpResult r2 = ilp_feasible(sys, wide);
    if (r1.status == IlpStatus::ResourceLimit || r2.status == IlpStatus::ResourceLimit) {
      ++limits;
      continue;
    }
    const bool s1 = r1.status == IlpStatus::Feasible, s2 = r2.status == IlpStatus::Feasible;
    if (s1 && !sys.satisfied_by(r1.solution)) {
      notes << "\n    system " << t << ": returned point violates the system";
      continue;
    }
    unstable += s1 != s2 || at_m != at_2m;
    if (s1 == at_m && s2 == at_2m) ++agree;
    else notes << "\n    system " << t << ": solver " << s1 << "/" << s2 << ", exhaustive " << at_m << "/" << at_2m;
    feasible += at_m;
  }
  std::ostringstream os;
  os << agree << "/" << kIlpSystems << " verdicts agree (" << feasible << " feasible), " << unstable
     << " change at 2M, " << limits << " resource limits" << notes.str();
  return {agree == kIlpSystems && unstable == 0 && limits == 0, os.str()};
}

Outcome sharing_rejected() {
  const std::string path = (fs::path(POWSUM_CORPUS_DIR) / "problems" / "product_by_sharing.ps").string();
  const char* argv[] = {"powsum", "solve", path.c_str()};
  std::ostringstream out, err;
  const int code = run_cli(3, argv, out, err);
  auto v = validate_fragment(parse_problem(slurp(path)));
  bool kind = false;
  for (const auto& x : v.violations) kind = kind || x.kind == ViolationKind::UndecidableSharing;
  const bool message = err.str().find("UndecidableSharing") != std::string::npos;
  std::ostringstream os;
  os << "exit code " << code << ", violation " << (kind ? "UndecidableSharing" : "missing");
  return {code == kExitUsage && kind && message && !v.ok(), os.str()};
}

Outcome stage_equisatisfiability() {
  std::size_t agree = 0, limits = 0;
  std::ostringstream notes;
  for (const auto& run : fuzz_corpus()) {
    if (!run.report.stages) {
      notes << "\n    seed " << run.seed << ": no stages";
      continue;
    }
    const auto& st = *run.report.stages;
    auto a = brute_force_sat_raw(run.problem, fuzz_bounds()).status;
    auto b = brute_force_sat_raw(as_fragment(st.sum_form), fuzz_bounds()).status;
    auto c = brute_force_sat_raw(as_fragment(st.guarded), fuzz_bounds()).status;
    if (a == OracleStatus::ResourceLimit || b == OracleStatus::ResourceLimit || c == OracleStatus::ResourceLimit) ++limits;
    else if (a == b && b == c) ++agree;
    else notes << "\n    seed " << run.seed << ": " << to_string(a) << " " << to_string(b) << " " << to_string(c);
  }
  std::ostringstream os;
  os << agree << "/" << kFuzzCount << " instances agree across the three stages, " << limits << " resource limits"
     << notes.str();
  return {agree == kFuzzCount, os.str()};
}

Outcome certificate_growth() {
  std::vector<double> xs, ys;
  std::ostringstream notes;
  for (int k = 1; k <= 12; ++k) {
    const Int sigma = Int(1) << k;
    const std::string text =
        "(declare-array y) (declare-int s) (sum ((s y)) (>= y 1)) (bapa (= s " + sigma.str() + "))";
    auto r = solve_problem(parse_problem(text));
    if (!r.consistent()) return {false, "no accepted certificate for k = " + std::to_string(k)};
    const double in_bits = 8.0 * static_cast<double>(print_problem(parse_problem(text)).size());
    const double cert_bits = 8.0 * static_cast<double>(print_certificate(*r.certificate).size());
    xs.push_back(std::log(in_bits));
    ys.push_back(std::log(cert_bits));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  std::ostringstream os;
  os.precision(3);
  os << "log-log slope " << slope << " (limit " << kMaxSlope << ", non-blocking), certificate "
     << std::lround(std::exp(ys.front())) << " -> " << std::lround(std::exp(ys.back())) << " bits";
  return {slope <= kMaxSlope, os.str()};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
  bool blocking;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "differential soundness", differential_soundness, true},
      {2, "certificate round-trip", certificate_round_trip, true},
      {3, "semilinear correctness", semilinear_correctness, true},
      {4, "hilbert basis golden", hilbert_golden, true},
      {5, "small-model bound", small_model_check, true},
      {6, "undecidable sharing rejected", sharing_rejected, true},
      {7, "stage equisatisfiability", stage_equisatisfiability, true},
      {8, "certificate size growth", certificate_growth, false},
  };
  bool ok = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail
              << " [" << std::lround(secs * 10) / 10.0 << "s]" << std::endl;
    if (c.blocking && !o.pass) ok = false;
  }
  return ok ? 0 : 1;
}
