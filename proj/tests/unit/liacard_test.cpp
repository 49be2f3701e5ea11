#include "powsum/certificate.hpp"
#include "powsum/eval.hpp"
#include "powsum/liacard.hpp"
#include "powsum/oracle.hpp"
#include "powsum/text.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <set>
#include <tuple>
#include <random>

using namespace powsum;

namespace {

Symbol sym(const std::string& s) { return Symbol::intern(s); }

IntVec vec(std::initializer_list<int> xs) {
  IntVec v;
  for (int x : xs) v.emplace_back(x);
  return v;
}

QfpaFormula f(const std::string& text) { return parse_qfpa(text); }

LiaCardProblem single_star(const std::string& f0, const std::string& body, std::size_t arity = 1) {
  LiaCardProblem p;
  p.f0 = f(f0);
  StarAtom a;
  for (std::size_t i = 0; i < arity; ++i) {
    a.u.push_back(sym("u" + std::to_string(i + 1)));
    a.body_vars.push_back(sym("y" + std::to_string(i + 1)));
  }
  a.body = f(body);
  a.exponent = sym("x");
  p.stars.push_back(a);
  return p;
}

// Local column order of star_atom_encode: λ, μ', u, x.
IntVec local(const IntVec& lambda, const IntVec& mu_shifted, const IntVec& u, int x) {
  IntVec v = lambda;
  v.insert(v.end(), mu_shifted.begin(), mu_shifted.end());
  v.insert(v.end(), u.begin(), u.end());
  v.emplace_back(x);
  return v;
}

// Is u a sum of exactly m vectors from {y ∈ [0..max]^n : body(y)}?
bool decomposes(const QfpaFormula& body, const std::vector<Symbol>& vars, const IntVec& u, int m) {
  std::vector<IntVec> elements;
  const std::size_t n = vars.size();
  IntVec y(n, 0);
  std::function<void(std::size_t)> collect = [&](std::size_t i) {
    if (i == n) {
      Assignment env;
      for (std::size_t k = 0; k < n; ++k) env[vars[k]] = y[k];
      if (eval_qfpa(body, env)) elements.push_back(y);
      return;
    }
    for (int v = 0; v <= u[i]; ++v) {
      y[i] = v;
      collect(i + 1);
    }
  };
  collect(0);
  std::function<bool(std::size_t, int, IntVec)> search = [&](std::size_t from, int left, IntVec rest) {
    if (left == 0) return std::all_of(rest.begin(), rest.end(), [](const Int& v) { return v == 0; });
    for (std::size_t e = from; e < elements.size(); ++e) {
      IntVec r = rest;
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k) ok = (r[k] -= elements[e][k]) >= 0;
      if (ok && search(e, left - 1, r)) return true;
    }
    return false;
  };
  return search(0, m, u);
}

}  // namespace

TEST(StarAtomEncode, ThreeTwos) {
  StarEncoding e;
  e.bases = {{0, vec({2})}};
  e.mu = vec({3});
  NatSystem s = star_atom_encode(e, 1);
  EXPECT_EQ(s.arity, 3u);
  EXPECT_TRUE(s.satisfied_by(local({}, vec({2}), vec({6}), 3)));
  EXPECT_FALSE(s.satisfied_by(local({}, vec({2}), vec({6}), 2)));
  EXPECT_FALSE(s.satisfied_by(local({}, vec({1}), vec({6}), 2)));
}

TEST(StarAtomEncode, EmptySupportForcesZero) {
  StarEncoding e;
  NatSystem s = star_atom_encode(e, 2);
  EXPECT_TRUE(s.satisfied_by(vec({0, 0, 0})));
  EXPECT_FALSE(s.satisfied_by(vec({1, 0, 0})));
  EXPECT_FALSE(s.satisfied_by(vec({0, 0, 1})));
}

TEST(StarAtomEncode, LoadedBaseCarriesPeriods) {
  // {y : y ≥ 1} has base 1 and period 1; 5 = (1 + 3·1) + 1 with two addends.
  StarEncoding e;
  e.bases = {{0, vec({1})}};
  e.periods = {{0, vec({1})}};
  e.mu = vec({2});
  e.lambda = vec({3});
  NatSystem s = star_atom_encode(e, 1);
  EXPECT_TRUE(s.satisfied_by(local(vec({3}), vec({1}), vec({5}), 2)));
  EXPECT_TRUE(decomposes(f("(>= y1 1)"), {sym("y1")}, vec({5}), 2));
}

TEST(CombinedSystem, NoStarsIsTheF0Cube) {
  LiaCardProblem p;
  p.f0 = f("(and (= a 2) (<= b a))");
  OuterLayout outer = outer_layout(p, 64);
  CombinedSystem c = build_combined_system(p, {}, outer, 0);
  EXPECT_EQ(c.system.arity, c.legend.size());
  std::size_t outer_cols = 0;
  for (const auto& col : c.legend) outer_cols += col.kind == Column::Kind::Outer;
  EXPECT_EQ(outer_cols, 2u);
  auto r = ilp_feasible(c.system);
  ASSERT_EQ(r.status, IlpStatus::Feasible);
  EXPECT_TRUE(c.system.satisfied_by(r.solution));
}

TEST(CombinedSystem, CouplingForcesTotal) {
  LiaCardProblem p = single_star("(= u1 6)", "(= y1 2)");
  StarEncoding e;
  e.bases = {{0, vec({2})}};
  e.mu = vec({1});
  OuterLayout outer = outer_layout(p, 64);
  CombinedSystem c = build_combined_system(p, {e}, outer, 0);
  auto r = ilp_feasible(c.system);
  ASSERT_EQ(r.status, IlpStatus::Feasible);
  ASSERT_TRUE(c.system.satisfied_by(r.solution));
  for (std::size_t i = 0; i < c.legend.size(); ++i) {
    if (c.legend[i].kind == Column::Kind::Outer && c.legend[i].symbol == sym("x")) EXPECT_EQ((r.solution)[i], 3);
    if (c.legend[i].kind == Column::Kind::Mu) EXPECT_EQ((r.solution)[i], 2);
  }
}

TEST(CombinedSystem, LegendIsABijection) {
  LiaCardProblem p = single_star("(and (= u1 4) (= u2 2))", "(and (>= y1 1) (<= y2 y1))", 2);
  StarEncoding e;
  e.bases = {{0, vec({1, 0})}, {0, vec({1, 1})}};
  e.periods = {{0, vec({1, 0})}, {1, vec({1, 1})}};
  e.mu = vec({1, 1});
  e.lambda = vec({0, 0});
  CombinedSystem c = build_combined_system(p, {e}, outer_layout(p, 64), 0);
  std::set<std::tuple<int, std::size_t, std::size_t, std::string>> keys;
  for (const auto& col : c.legend)
    keys.insert({static_cast<int>(col.kind), col.atom, col.index, col.symbol.valid() ? col.symbol.name() : ""});
  EXPECT_EQ(keys.size(), c.legend.size());
  EXPECT_EQ(c.system.arity, c.legend.size());
}

TEST(CombinedSystem, WrongDimensionsRejected) {
  LiaCardProblem p = single_star("(= u1 6)", "(= y1 2)");
  StarEncoding e;
  e.bases = {{0, IntVec{}}};
  EXPECT_THROW(build_combined_system(p, {e}, outer_layout(p, 64), 0), std::invalid_argument);
  EXPECT_THROW(build_combined_system(p, {}, outer_layout(p, 64), 0), std::invalid_argument);
}

TEST(SolveLiaCard, ThreeTwosMakeSix) {
  auto r = solve_lia_card(single_star("(= u1 6)", "(= y1 2)"));
  ASSERT_EQ(r.status, SatStatus::Sat);
  EXPECT_EQ(r.solution->outer.at(sym("x")), 3);
  EXPECT_EQ(r.solution->outer.at(sym("u1")), 6);
}

TEST(SolveLiaCard, SevenIsNotEven) { EXPECT_EQ(solve_lia_card(single_star("(= u1 7)", "(= y1 2)")).status, SatStatus::Unsat); }

TEST(SolveLiaCard, FiveInTwoPositiveAddends) {
  LiaCardProblem p = single_star("(and (= u1 5) (= x 2))", "(>= y1 1)");
  auto r = solve_lia_card(p);
  ASSERT_EQ(r.status, SatStatus::Sat);
  Certificate c = emit_certificate(p, *r.solution);
  ASSERT_TRUE(verify_certificate(p, c).accepted);
  FragmentProblem none;
  auto rec = reconstruct_model(none, p, c);
  ASSERT_EQ(rec.witnesses.size(), 1u);
  const auto& addends = rec.witnesses[0].addends;
  ASSERT_EQ(addends.size(), 2u);
  Int total = 0;
  for (const auto& a : addends) {
    EXPECT_GE(a[0], 1);
    total += a[0];
  }
  EXPECT_EQ(total, 5);
}

TEST(SolveLiaCard, ZeroExponentMeansEmptySum) {
  auto r = solve_lia_card(single_star("(and (= x 0) (>= u1 1))", "(>= y1 1)"));
  EXPECT_EQ(r.status, SatStatus::Unsat);
  auto s = solve_lia_card(single_star("(= x 0)", "(>= y1 1)"));
  ASSERT_EQ(s.status, SatStatus::Sat);
  EXPECT_EQ(s.solution->outer.at(sym("u1")), 0);
}

TEST(SolveLiaCard, TwoStarAtoms) {
  LiaCardProblem p = single_star("(and (= u1 8) (= v1 (+ u1 6)) (= x w))", "(mod y1 1 2)");
  StarAtom b;
  b.u = {sym("v1")};
  b.body_vars = {sym("z1")};
  b.body = f("(= z1 7)");
  b.exponent = sym("w");
  p.stars.push_back(b);
  auto r = solve_lia_card(p);
  ASSERT_EQ(r.status, SatStatus::Sat);
  EXPECT_EQ(r.solution->outer.at(sym("w")), 2);
  EXPECT_EQ(r.solution->outer.at(sym("x")), 2);
  EXPECT_TRUE(verify_certificate(p, emit_certificate(p, *r.solution)).accepted);
}

TEST(SolveLiaCard, DisjunctiveBody) {
  // Addends are 3 or 5; 11 = 3 + 3 + 5 but never in two addends.
  EXPECT_EQ(solve_lia_card(single_star("(and (= u1 11) (= x 3))", "(or (= y1 3) (= y1 5))")).status, SatStatus::Sat);
  EXPECT_EQ(solve_lia_card(single_star("(and (= u1 11) (= x 2))", "(or (= y1 3) (= y1 5))")).status, SatStatus::Unsat);
}

TEST(SolveLiaCard, SupportCapYieldsResourceLimit) {
  SolveOptions o;
  o.max_support = 1;
  auto r = solve_lia_card(single_star("(and (= u1 8) (= x 2))", "(or (= y1 3) (= y1 5))"), o);
  EXPECT_EQ(r.status, SatStatus::ResourceLimit);
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(SolveLiaCard, AgreesWithDecompositionSearch) {
  std::mt19937 rng(77);
  const std::vector<std::string> bodies1 = {"(>= y1 2)", "(mod y1 0 3)", "(or (= y1 1) (= y1 4))", "(and (>= y1 1) (<= y1 2))",
                                            "(distinct y1 2)", "(< y1 1)"};
  const std::vector<std::string> bodies2 = {"(= y1 y2)", "(<= (+ y1 y2) 2)", "(and (>= y1 1) (= y2 (* 2 y1)))",
                                            "(or (= y1 0) (= y2 0))", "(mod (+ y1 y2) 1 2)", "(> y2 y1)"};
  std::uniform_int_distribution<int> val(0, 6), cnt(0, 4), coin(0, 1);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = coin(rng) + 1;
    const auto& bodies = n == 1 ? bodies1 : bodies2;
    const std::string body = bodies[static_cast<std::size_t>(val(rng)) % bodies.size()];
    IntVec u;
    std::string f0 = "(and";
    for (std::size_t k = 0; k < n; ++k) {
      u.emplace_back(val(rng));
      f0 += " (= u" + std::to_string(k + 1) + " " + u.back().str() + ")";
    }
    const int m = cnt(rng);
    f0 += " (= x " + std::to_string(m) + "))";
    LiaCardProblem p = single_star(f0, body, n);
    auto r = solve_lia_card(p);
    ASSERT_NE(r.status, SatStatus::ResourceLimit) << f0 << ' ' << body;
    const bool expected = decomposes(f(body), p.stars[0].body_vars, u, m);
    ASSERT_EQ(r.status == SatStatus::Sat, expected) << f0 << ' ' << body;
    (expected ? sat : unsat)++;
    if (r.status == SatStatus::Sat) {
      Certificate c = emit_certificate(p, *r.solution);
      ASSERT_TRUE(verify_certificate(p, c).accepted);
      auto rec = reconstruct_model(FragmentProblem{}, p, c);
      ASSERT_EQ(rec.witnesses[0].addends.size(), static_cast<std::size_t>(m));
      IntVec total(n);
      for (const auto& a : rec.witnesses[0].addends) {
        Assignment env;
        for (std::size_t k = 0; k < n; ++k) {
          env[p.stars[0].body_vars[k]] = a[k];
          total[k] += a[k];
        }
        EXPECT_TRUE(eval_qfpa(p.stars[0].body, env));
      }
      EXPECT_EQ(total, u);
    }
  }
  EXPECT_GT(sat, 20);
  EXPECT_GT(unsat, 20);
}

TEST(SolveLiaCard, WiderCapsNeverLoseSat) {
  SolveOptions tight;
  tight.max_support = 2;
  tight.max_branches = 64;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto v = validate_fragment(gen_random_problem(seed));
    LiaCardProblem p = normalize(*v.problem).lia;
    auto narrow = solve_lia_card(p, tight);
    auto wide = solve_lia_card(p);
    if (narrow.status == SatStatus::Sat) EXPECT_EQ(wide.status, SatStatus::Sat) << seed;
    if (narrow.status == SatStatus::Unsat) EXPECT_EQ(wide.status, SatStatus::Unsat) << seed;
  }
}
