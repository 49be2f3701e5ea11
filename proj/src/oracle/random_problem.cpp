#include "powsum/oracle.hpp"

#include <algorithm>
#include <random>

namespace powsum {

namespace {

class Sampler {
 public:
  Sampler(std::uint64_t seed, ProblemSize size)
      : rng_(seed), max_const_(size == ProblemSize::Small ? 6 : 10), max_bapa_(size == ProblemSize::Small ? 3 : 4) {}

  FragmentProblem sample() {
    FragmentProblem p;
    const char* array_names[] = {"c", "d"};
    const char* set_names[] = {"A", "B"};
    const char* int_names[] = {"s", "t", "k"};
    for (std::size_t i = 0, n = pick(1, 2); i < n; ++i) p.arrays.push_back(Symbol::intern(array_names[i]));
    for (std::size_t i = 0, n = pick(0, 2); i < n; ++i) p.sets.push_back(Symbol::intern(set_names[i]));
    const bool with_sum = chance(0.8);
    for (std::size_t i = 0, n = pick(with_sum ? 1 : 0, 3); i < n; ++i) p.ints.push_back(Symbol::intern(int_names[i]));

    for (Symbol s : p.sets) p.interps.push_back({s, guard(p.arrays, pick(1, 2))});
    if (with_sum) {
      SumSpec sum;
      const std::size_t n = pick(1, std::min(p.arrays.size(), p.ints.size()));
      for (std::size_t i = 0; i < n; ++i) sum.targets.push_back({p.ints[i], p.arrays[i]});
      sum.guard = guard(p.arrays, pick(0, 3));
      p.sum = std::move(sum);
    }

    std::vector<BapaFormula> parts;
    for (std::size_t i = 0, n = pick(1, max_bapa_); i < n; ++i) {
      auto f = bapa_part(p);
      if (f) parts.push_back(std::move(*f));
    }
    if (parts.size() >= 2 && chance(0.2)) {
      BapaFormula alt = BapaFormula::disjunction({parts[parts.size() - 2], parts.back()});
      parts.resize(parts.size() - 2);
      parts.push_back(std::move(alt));
    }
    p.bapa = parts.empty() ? BapaFormula()
             : parts.size() == 1 ? parts[0]
                                 : BapaFormula::conjunction(std::move(parts));
    return p;
  }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool chance(double q) { return std::bernoulli_distribution(q)(rng_); }
  Int constant() { return Int(pick(0, max_const_)); }

  LinTerm term(const std::vector<Symbol>& vars) {
    LinTerm t;
    const std::size_t n = std::min<std::size_t>(vars.size(), pick(1, 2));
    std::vector<Symbol> pool = vars;
    std::shuffle(pool.begin(), pool.end(), rng_);
    for (std::size_t i = 0; i < n; ++i) t += LinTerm::variable(pool[i], Int(pick(1, 3)));
    return t;
  }

  QfpaAtom atom(const std::vector<Symbol>& vars) {
    static constexpr AtomKind kinds[] = {AtomKind::Eq, AtomKind::Neq, AtomKind::Le, AtomKind::Lt,
                                         AtomKind::Ge, AtomKind::Gt,  AtomKind::Mod};
    AtomKind k = kinds[pick(0, 6)];
    if (k == AtomKind::Mod) {
      Int m(pick(2, 3));
      return QfpaAtom::mod(term(vars), LinTerm(Int(pick(0, static_cast<std::size_t>(m) - 1))), m);
    }
    return QfpaAtom::make(k, term(vars), LinTerm(constant()));
  }

  // A random boolean combination of `atoms` atoms; zero atoms is true.
  QfpaFormula guard(const std::vector<Symbol>& vars, std::size_t atoms) {
    if (atoms == 0) return QfpaFormula::truth();
    std::vector<QfpaFormula> leaves;
    for (std::size_t i = 0; i < atoms; ++i) {
      auto f = QfpaFormula::atom(atom(vars));
      leaves.push_back(chance(0.15) ? QfpaFormula::negation(f) : f);
    }
    if (leaves.size() == 1) return leaves[0];
    return chance(0.6) ? QfpaFormula::conjunction(std::move(leaves)) : QfpaFormula::disjunction(std::move(leaves));
  }

  SetTerm set_term(const std::vector<Symbol>& sets, int depth) {
    const std::size_t r = pick(0, depth > 0 ? 9 : 5);
    if (r == 0) return chance(0.5) ? SetTerm::empty() : SetTerm::full();
    auto leaf = SetTerm::var(sets[pick(0, sets.size() - 1)]);
    if (r <= 3) return leaf;
    if (r <= 5) return SetTerm::complement(leaf);
    auto other = set_term(sets, depth - 1);
    return r <= 7 ? SetTerm::intersection(leaf, other) : SetTerm::set_union(leaf, other);
  }

  std::optional<BapaFormula> bapa_part(const FragmentProblem& p) {
    const bool sets = !p.sets.empty();
    const bool ints = !p.ints.empty();
    const std::size_t r = pick(0, 9);
    if (sets && r < 5) {
      LinTerm bound = ints && chance(0.5) ? LinTerm::variable(p.ints[pick(0, p.ints.size() - 1)]) : LinTerm(Int(pick(0, 3)));
      return chance(0.5) ? BapaFormula::card(set_term(p.sets, 1), CardOp::Eq, bound)
                         : BapaFormula::card(set_term(p.sets, 1), CardOp::Le, bound);
    }
    if (sets && r < 7)
      return chance(0.5) ? BapaFormula::subset(set_term(p.sets, 1), set_term(p.sets, 1))
                         : BapaFormula::set_eq(set_term(p.sets, 1), set_term(p.sets, 1));
    if (ints) return BapaFormula::qfpa(guard(p.ints, 1));
    return std::nullopt;
  }

  std::mt19937_64 rng_;
  std::size_t max_const_;
  std::size_t max_bapa_;
};

}  // namespace

FragmentProblem gen_random_problem(std::uint64_t seed, ProblemSize size) { return Sampler(seed, size).sample(); }

}  // namespace powsum
