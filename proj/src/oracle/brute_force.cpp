#include "powsum/eval.hpp"
#include "powsum/oracle.hpp"
#include "powsum/semantics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace powsum {

Int OracleBounds::effective_int_bound() const {
  return int_bound ? *int_bound : Int(max_val) * Int(max_len);
}

const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Sat: return "SAT";
    case OracleStatus::UnsatAtBound: return "UNSAT_AT_BOUND";
    case OracleStatus::ResourceLimit: return "RESOURCE_LIMIT";
  }
  return "?";
}

namespace {

struct StepLimit {};

/// A candidate value tuple for one position, with everything the search
/// needs precomputed.
struct Cell {
  std::vector<Int> values;  // per array
  std::uint64_t pattern = 0;
  bool summed = false;
};

class Search {
 public:
  Search(const FragmentProblem& p, const OracleBounds& b) : p_(p), b_(b), int_bound_(b.effective_int_bound()) {
    if (b.max_len < 1) throw std::invalid_argument("oracle bounds need max_len >= 1");
    if (p.sets.size() > 63) throw std::invalid_argument("too many sets for the oracle");
    for (std::size_t i = 0; i < p.arrays.size(); ++i) array_index_[p.arrays[i]] = i;
    set_guards_.resize(p.sets.size());
    for (const auto& in : p.interps) {
      if (in.universal()) {
        universals_.push_back(in.guard);
        continue;
      }
      for (std::size_t s = 0; s < p.sets.size(); ++s)
        if (p.sets[s] == *in.set_var) set_guards_[s] = in.guard;
    }
    profile_.sets = p.sets;
    if (p.sum)
      for (const auto& t : p.sum->targets) {
        sum_columns_.push_back(array_index_.at(t.array));
        sum_vars_.push_back(t.sum_var);
      }
    for (Symbol x : p.ints) {
      bool bound = false;
      for (Symbol s : sum_vars_) bound = bound || s == x;
      if (!bound) free_ints_.push_back(x);
    }
  }

  OracleResult run() {
    OracleResult out;
    try {
      build_cells();
      if (cells_.empty() || !is_zero(cells_.front())) {
        out.steps = steps_;
        return out;  // no admissible zero tail
      }
      profile_.tail = cells_.front().pattern;
      std::vector<std::size_t> choice(b_.max_len, 0);
      if (choose(choice, 0, 0)) {
        out.status = OracleStatus::Sat;
        out.model = build_model(choice);
      }
    } catch (const StepLimit&) {
      out.status = OracleStatus::ResourceLimit;
    }
    out.steps = steps_;
    return out;
  }

 private:
  void tick() {
    if (++steps_ > b_.max_steps) throw StepLimit{};
  }

  static bool is_zero(const Cell& c) {
    for (const auto& v : c.values)
      if (v != 0) return false;
    return true;
  }

  const Int& lookup_array(Symbol s, const std::vector<Int>& values) const {
    auto it = array_index_.find(s);
    if (it == array_index_.end()) throw MissingBinding(s);
    return values[it->second];
  }

  // Formulas checked at the DFS level where their last array is assigned.
  std::vector<std::vector<const QfpaFormula*>> schedule(const std::vector<const QfpaFormula*>& fs) const {
    std::vector<std::vector<const QfpaFormula*>> at(p_.arrays.size() + 1);
    for (const auto* f : fs) {
      std::size_t level = 0;
      for (Symbol s : f->variables()) {
        auto it = array_index_.find(s);
        if (it == array_index_.end()) throw MissingBinding(s);
        level = std::max(level, it->second + 1);
      }
      at[level].push_back(f);
    }
    return at;
  }

  // Depth-first walk over [0..V]^k in lexicographic order; `visit` returns
  // false to stop.
  void walk(const std::vector<std::vector<const QfpaFormula*>>& prune,
            const std::function<bool(const std::vector<Int>&)>& visit) {
    const std::size_t k = p_.arrays.size();
    std::vector<Int> values(k, 0);
    auto ok_at = [&](std::size_t level) {
      auto look = [&](Symbol s) -> const Int& { return lookup_array(s, values); };
      for (const auto* f : prune[level])
        if (!eval_qfpa(*f, look)) return false;
      return true;
    };
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == k) {
        tick();
        stop = !visit(values);
        return;
      }
      for (std::size_t v = 0; v <= b_.max_val && !stop; ++v) {
        values[i] = v;
        if (ok_at(i + 1)) rec(i + 1);
      }
      values[i] = 0;
    };
    if (ok_at(0)) rec(0);
  }

  Cell make_cell(const std::vector<Int>& values) const {
    Cell c;
    c.values = values;
    auto look = [&](Symbol s) -> const Int& { return lookup_array(s, values); };
    for (std::size_t s = 0; s < set_guards_.size(); ++s)
      if (eval_qfpa(set_guards_[s], look)) c.pattern |= std::uint64_t{1} << s;
    c.summed = p_.sum && eval_qfpa(p_.sum->guard, look);
    return c;
  }

  // Cells in lexicographic order, pruned by universal constraints. Without
  // sets and universal constraints, cells outside the sum guard only differ
  // by their values, which nothing observes; the least of them stands in
  // for all.
  void build_cells() {
    std::vector<const QfpaFormula*> universal;
    for (const auto& u : universals_) universal.push_back(&u);
    if (!p_.sets.empty() || !universals_.empty() || !p_.sum) {
      walk(schedule(universal), [&](const std::vector<Int>& v) {
        cells_.push_back(make_cell(v));
        return true;
      });
      return;
    }
    std::vector<const QfpaFormula*> conjuncts;
    const QfpaFormula& g = p_.sum->guard;
    if (g.kind() == QfpaFormula::Kind::And)
      for (const auto& c : g.children()) conjuncts.push_back(&c);
    else
      conjuncts.push_back(&g);
    walk(schedule(conjuncts), [&](const std::vector<Int>& v) {
      cells_.push_back(make_cell(v));
      return true;
    });
    std::optional<Cell> inert;
    walk(schedule({}), [&](const std::vector<Int>& v) {
      Cell c = make_cell(v);
      if (c.summed) return true;
      inert = std::move(c);
      return false;
    });
    if (inert) {
      auto pos = std::lower_bound(cells_.begin(), cells_.end(), *inert,
                                  [](const Cell& a, const Cell& b) { return a.values < b.values; });
      cells_.insert(pos, std::move(*inert));
    }
  }

  // Non-decreasing sequences of cell indices in lexicographic order. The
  // least sequence of a permutation class is its sorted one, so the first
  // hit is also the least model among all sequences.
  bool choose(std::vector<std::size_t>& choice, std::size_t pos, std::size_t from) {
    if (pos == choice.size()) return evaluate(choice);
    for (std::size_t c = from; c < cells_.size(); ++c) {
      choice[pos] = c;
      if (choose(choice, pos + 1, c)) return true;
    }
    return false;
  }

  bool evaluate(const std::vector<std::size_t>& choice) {
    tick();
    std::map<std::uint64_t, Int> counts;
    std::vector<Int> sums(sum_columns_.size(), 0);
    for (std::size_t c : choice) {
      const Cell& cell = cells_[c];
      ++counts[cell.pattern];
      if (cell.summed)
        for (std::size_t t = 0; t < sum_columns_.size(); ++t) sums[t] += cell.values[sum_columns_[t]];
    }
    for (const auto& s : sums)
      if (s > int_bound_) return false;

    std::vector<Int> key;
    for (const auto& [pattern, n] : counts) {
      key.emplace_back(pattern);
      key.push_back(n);
    }
    key.insert(key.end(), sums.begin(), sums.end());
    auto [it, fresh] = cache_.try_emplace(key);
    if (fresh) it->second = solve_ints(counts, sums);
    if (!it->second) return false;
    ints_ = *it->second;
    return true;
  }

  std::optional<Assignment> solve_ints(const std::map<std::uint64_t, Int>& counts, const std::vector<Int>& sums) {
    profile_.positions.assign(counts.begin(), counts.end());
    Assignment env;
    for (std::size_t t = 0; t < sum_vars_.size(); ++t) env[sum_vars_[t]] = sums[t];
    for (Symbol x : free_ints_) env[x] = 0;
    auto look = [&](Symbol s) -> const Int& {
      auto it = env.find(s);
      if (it == env.end()) throw MissingBinding(s);
      return it->second;
    };
    while (true) {
      tick();
      if (eval_bapa(p_.bapa, profile_, look)) return env;
      // Odometer with the first free int most significant.
      std::size_t i = free_ints_.size();
      while (i > 0) {
        Int& v = env[free_ints_[i - 1]];
        if (v < int_bound_) {
          ++v;
          break;
        }
        v = 0;
        --i;
      }
      if (i == 0) return std::nullopt;
    }
  }

  Model build_model(const std::vector<std::size_t>& choice) const {
    Model m;
    for (std::size_t a = 0; a < p_.arrays.size(); ++a) {
      IntVec v;
      for (std::size_t c : choice) v.push_back(cells_[c].values[a]);
      m.arrays[p_.arrays[a]] = std::move(v);
    }
    m.ints = ints_;
    derive_set_values(p_, m);
    return m;
  }

  const FragmentProblem& p_;
  const OracleBounds& b_;
  Int int_bound_;
  std::unordered_map<Symbol, std::size_t> array_index_;
  std::vector<QfpaFormula> set_guards_;
  std::vector<QfpaFormula> universals_;
  std::vector<std::size_t> sum_columns_;
  std::vector<Symbol> sum_vars_;
  std::vector<Symbol> free_ints_;
  std::vector<Cell> cells_;
  SetProfile profile_;
  std::map<std::vector<Int>, std::optional<Assignment>> cache_;
  Assignment ints_;
  std::uint64_t steps_ = 0;
};

}  // namespace

OracleResult brute_force_sat_raw(const FragmentProblem& p, const OracleBounds& b) {
  Search search(p, b);
  OracleResult r = search.run();
  if (r.model) {
    auto report = check_model_raw(p, *r.model);
    if (!report.ok) throw std::logic_error("oracle model rejected by check_model");
  }
  return r;
}

OracleResult brute_force_sat(const ValidatedProblem& p, const OracleBounds& b) {
  return brute_force_sat_raw(p.problem(), b);
}

}  // namespace powsum
