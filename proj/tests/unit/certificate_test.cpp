#include "powsum/certificate.hpp"
#include "powsum/driver.hpp"
#include "powsum/oracle.hpp"
#include "powsum/text.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace powsum;
namespace fs = std::filesystem;

namespace {

Symbol sym(const std::string& s) { return Symbol::intern(s); }

struct Solved {
  FragmentProblem problem;
  SolveReport report;
};

Solved solve_text(const std::string& text) {
  Solved s{parse_problem(text), {}};
  s.report = solve_problem(s.problem);
  return s;
}

Solved solve_corpus(const char* name) {
  std::ifstream in(fs::path(POWSUM_CORPUS_DIR) / "problems" / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return solve_text(ss.str());
}

std::vector<int> ints_of(const IntVec& v) {
  std::vector<int> out;
  for (const auto& x : v) out.push_back(static_cast<int>(x));
  return out;
}

// Every standalone integer token of a printed certificate.
std::vector<std::pair<std::size_t, std::size_t>> integer_tokens(const std::string& text) {
  static const std::regex token(R"((^|[\s(])(-?\d+)(?=[\s)]))");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), token); it != std::sregex_iterator(); ++it)
    out.push_back({static_cast<std::size_t>(it->position(2)), static_cast<std::size_t>(it->length(2))});
  return out;
}

}  // namespace

TEST(Certificate, SumFiveIsAccepted) {
  auto s = solve_corpus("sum_five.ps");
  ASSERT_EQ(s.report.verdict, Verdict::Sat);
  ASSERT_TRUE(s.report.consistent());
  const Certificate& c = *s.report.certificate;
  EXPECT_EQ(c.digest, digest(s.report.stages->lia));
  ASSERT_EQ(c.atoms.size(), 1u);
  EXPECT_EQ(c.u.at(sym("s")), 5);
}

TEST(Certificate, TamperedBaseFailsCheckTwo) {
  auto s = solve_text("(declare-array c) (declare-int s) (sum ((s c)) (= c 2)) (bapa (= s 6))");
  ASSERT_TRUE(s.report.consistent());
  Certificate c = *s.report.certificate;
  ASSERT_FALSE(c.atoms[0].bases.empty());
  c.atoms[0].bases[0].vec[0] += 1;
  auto r = verify_certificate(s.report.stages->lia, c);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.failed, Check::Bases);
}

TEST(Certificate, InflatedExponentFailsCheckFive) {
  auto s = solve_text("(declare-array c) (declare-int s) (sum ((s c)) (= c 2)) (bapa (= s 6))");
  ASSERT_TRUE(s.report.consistent());
  Certificate c = *s.report.certificate;
  Int total = 0;
  for (const auto& m : c.atoms[0].mu) total += m;
  for (const auto& l : c.atoms[0].lambda) total += l;
  ASSERT_EQ(c.x.size(), 1u);
  c.x.begin()->second = total + 1;
  auto r = verify_certificate(s.report.stages->lia, c);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.failed, Check::Exponent);
}

TEST(Certificate, WrongProblemFailsDigest) {
  auto a = solve_text("(declare-array c) (declare-int s) (sum ((s c)) (= c 2)) (bapa (= s 6))");
  auto b = solve_text("(declare-array c) (declare-int s) (sum ((s c)) (= c 2)) (bapa (= s 8))");
  ASSERT_TRUE(a.report.consistent());
  auto r = verify_certificate(b.report.stages->lia, *a.report.certificate);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.failed, Check::Digest);
}

TEST(Certificate, NoStarAtoms) {
  auto s = solve_text("(declare-int x) (bapa (= x 2))");
  ASSERT_TRUE(s.report.consistent());
  EXPECT_TRUE(s.report.certificate->atoms.empty());
  EXPECT_EQ(s.report.model->ints.at(sym("x")), 2);
  auto back = parse_certificate(print_certificate(*s.report.certificate));
  EXPECT_TRUE(verify_certificate(s.report.stages->lia, back).accepted);
}

TEST(Reconstruction, ThreeTwos) {
  auto s = solve_text("(declare-array c) (declare-int s) (sum ((s c)) (= c 2)) (bapa (= s 6))");
  ASSERT_TRUE(s.report.consistent());
  auto rec = reconstruct_model(s.problem, s.report.stages->lia, *s.report.certificate);
  ASSERT_EQ(rec.witnesses.size(), 1u);
  ASSERT_EQ(rec.witnesses[0].addends.size(), 3u);
  for (const auto& a : rec.witnesses[0].addends) EXPECT_EQ(a[0], 2);
  EXPECT_EQ(ints_of(rec.model.arrays.at(sym("c"))), (std::vector<int>{2, 2, 2}));
}

TEST(Reconstruction, ZeroExponentGivesNoAddends) {
  auto s = solve_text("(declare-array c) (declare-int s) (sum ((s c)) (= c 2)) (bapa (= s 0))");
  ASSERT_TRUE(s.report.consistent());
  auto rec = reconstruct_model(s.problem, s.report.stages->lia, *s.report.certificate);
  ASSERT_EQ(rec.witnesses.size(), 1u);
  EXPECT_TRUE(rec.witnesses[0].addends.empty());
  EXPECT_EQ(rec.model.ints.at(sym("s")), 0);
}

TEST(Reconstruction, TwoAddendsOfSeven) {
  auto s = solve_corpus("two_addends.ps");
  ASSERT_TRUE(s.report.consistent());
  std::vector<int> summed;
  for (const auto& v : s.report.model->arrays.at(sym("c")))
    if (v >= 3) summed.push_back(static_cast<int>(v));
  std::sort(summed.begin(), summed.end());
  EXPECT_EQ(summed, (std::vector<int>{3, 4}));
}

TEST(Reconstruction, CorpusModelsCheck) {
  for (const auto& e : fs::directory_iterator(fs::path(POWSUM_CORPUS_DIR) / "problems")) {
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    auto p = parse_problem(ss.str());
    auto r = solve_problem(p);
    if (r.verdict == Verdict::Sat) EXPECT_TRUE(r.consistent()) << e.path() << ": " << r.diagnostic;
  }
}

TEST(MutationSweep, EveryAcceptedMutantStillYieldsAModel) {
  const char* problems[] = {
      "(declare-array c) (declare-int s) (sum ((s c)) (= c 2)) (bapa (= s 6))",
      "(declare-array c) (declare-int s) (sum ((s c)) (>= c 1)) (bapa (= s 5))",
      "(declare-array c) (declare-set P) (declare-int s) (interp P (>= c 3)) (sum ((s c)) (>= c 3))"
      " (bapa (and (= s 7) (card= P 2)))",
  };
  std::size_t rejected = 0, total = 0;
  for (const char* text : problems) {
    auto s = solve_text(text);
    ASSERT_TRUE(s.report.consistent()) << text;
    const std::string printed = print_certificate(*s.report.certificate);
    for (auto [pos, len] : integer_tokens(printed)) {
      for (int delta : {-1, 1}) {
        Int value(printed.substr(pos, len));
        std::string mutant = printed;
        mutant.replace(pos, len, Int(value + delta).str());
        ++total;
        Certificate c;
        try {
          c = parse_certificate(mutant);
        } catch (const std::exception&) {
          ++rejected;
          continue;
        }
        if (!verify_certificate(s.report.stages->lia, c).accepted) {
          ++rejected;
          continue;
        }
        auto rec = reconstruct_model(s.problem, s.report.stages->lia, c);
        auto v = validate_fragment(s.problem);
        EXPECT_TRUE(check_model(*v.problem, rec.model).ok) << mutant;
      }
    }
  }
  EXPECT_GT(total, 50u);
  EXPECT_GT(rejected, total / 2);
}

TEST(CertificateText, ModuloCubeCarriesSlackColumns) {
  auto s = solve_text("(declare-array c) (declare-int s) (sum ((s c)) (mod c 1 2)) (bapa (= s 5))");
  ASSERT_TRUE(s.report.consistent());
  const auto& atom = s.report.certificate->atoms.at(0);
  ASSERT_FALSE(atom.cubes.empty());
  EXPECT_GT(atom.cubes[0].system.arity, atom.arity);
  auto back = parse_certificate(print_certificate(*s.report.certificate));
  EXPECT_TRUE(verify_certificate(s.report.stages->lia, back).accepted);
}
