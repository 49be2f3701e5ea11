#include "powsum/semilinear.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace powsum {

namespace {

// Homogeneous equality system given by its columns; the completion search
// of Contejean and Devie enumerates its irreducible solutions.
struct Completion {
  std::vector<IntVec> columns;  // column i is E·e_i
  std::size_t rows = 0;
  std::size_t bounded = SIZE_MAX;  // column whose value must stay ≤ 1
  std::uint64_t max_nodes = 0;

  std::vector<IntVec> run() const {
    const std::size_t n = columns.size();
    std::vector<IntVec> found;
    struct Item {
      IntVec x;
      IntVec defect;
    };
    auto dominates = [](const IntVec& big, const IntVec& small) {
      for (std::size_t i = 0; i < big.size(); ++i)
        if (big[i] < small[i]) return false;
      return true;
    };
    auto is_zero = [](const IntVec& v) {
      return std::all_of(v.begin(), v.end(), [](const Int& c) { return c == 0; });
    };

    std::vector<Item> frontier;
    for (std::size_t i = 0; i < n; ++i) {
      IntVec x(n);
      x[i] = 1;
      frontier.push_back({std::move(x), columns[i]});
    }
    std::uint64_t nodes = 0;
    while (!frontier.empty()) {
      std::vector<const Item*> open;
      for (const auto& it : frontier) {
        if (is_zero(it.defect)) found.push_back(it.x);
        else open.push_back(&it);
      }
      std::set<IntVec> seen;
      std::vector<Item> next;
      for (const Item* it : open) {
        for (std::size_t i = 0; i < n; ++i) {
          Int d = 0;
          for (std::size_t r = 0; r < rows; ++r) d += it->defect[r] * columns[i][r];
          if (d >= 0) continue;
          if (i == bounded && it->x[i] >= 1) continue;
          IntVec x = it->x;
          x[i] += 1;
          if (seen.count(x)) continue;
          bool pruned = false;
          for (const auto& s : found)
            if (dominates(x, s)) {
              pruned = true;
              break;
            }
          if (pruned) continue;
          if (++nodes > max_nodes) throw ResourceLimitExceeded("completion search exceeds " + std::to_string(max_nodes) + " nodes");
          IntVec defect = it->defect;
          for (std::size_t r = 0; r < rows; ++r) defect[r] += columns[i][r];
          seen.insert(x);
          next.push_back({std::move(x), std::move(defect)});
        }
      }
      frontier = std::move(next);
    }
    return found;
  }
};

// Lifts inequalities with slack columns; the extra column `extra` (if any)
// carries the negated right-hand side.
Completion lift(const NatSystem& sys, bool with_rhs) {
  const std::size_t n = sys.arity;
  const std::size_t slacks = sys.le.size();
  const std::size_t width = n + slacks + (with_rhs ? 1 : 0);
  const std::size_t rows = sys.rows();
  Completion c;
  c.rows = rows;
  c.columns.assign(width, IntVec(rows));
  for (std::size_t r = 0; r < sys.eq.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) c.columns[j][r] = sys.eq[r][j];
    if (with_rhs) c.columns[width - 1][r] = -sys.eq_rhs[r];
  }
  for (std::size_t r = 0; r < slacks; ++r) {
    const std::size_t row = sys.eq.size() + r;
    for (std::size_t j = 0; j < n; ++j) c.columns[j][row] = sys.le[r][j];
    c.columns[n + r][row] = 1;
    if (with_rhs) c.columns[width - 1][row] = -sys.le_rhs[r];
  }
  if (with_rhs) c.bounded = width - 1;
  return c;
}

// Affine change of variables applied before the completion: original
// column j equals offset[j] + Σ map[j][k]·y_k over the kept columns y, with
// every map entry non-negative. Such maps preserve and reflect the
// componentwise order, so irreducible solutions stay irreducible.
struct Presolved {
  NatSystem reduced;
  std::vector<std::size_t> kept;
  IntVec offset;
  std::vector<IntVec> map;  // per original column, over original columns
  bool empty = false;

  IntVec expand(const IntVec& y, bool affine) const {
    const std::size_t n = offset.size();
    IntVec full(n);
    for (std::size_t j = 0; j < n; ++j) {
      Int v = affine ? offset[j] : Int(0);
      for (std::size_t k = 0; k < kept.size(); ++k) v += map[j][kept[k]] * y[k];
      full[j] = v;
    }
    return full;
  }
};

Presolved presolve(const NatSystem& sys) {
  Presolved p;
  const std::size_t n = sys.arity;
  std::vector<bool> gone(n, false);
  p.offset.assign(n, 0);
  p.map.assign(n, IntVec(n));
  for (std::size_t j = 0; j < n; ++j) p.map[j][j] = 1;
  NatSystem cur = sys;

  // x_j := b + Σ g_k x_k everywhere.
  auto substitute = [&](std::size_t j, const Int& b, const IntVec& g) {
    auto apply_row = [&](IntVec& row, Int& rhs) {
      if (row[j] == 0) return;
      const Int c = row[j];
      rhs -= c * b;
      row[j] = 0;
      for (std::size_t k = 0; k < n; ++k) row[k] += c * g[k];
    };
    for (std::size_t r = 0; r < cur.eq.size(); ++r) apply_row(cur.eq[r], cur.eq_rhs[r]);
    for (std::size_t r = 0; r < cur.le.size(); ++r) apply_row(cur.le[r], cur.le_rhs[r]);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.map[i][j] == 0) continue;
      const Int c = p.map[i][j];
      p.offset[i] += c * b;
      p.map[i][j] = 0;
      for (std::size_t k = 0; k < n; ++k) p.map[i][k] += c * g[k];
    }
  };
  auto nonzeros = [&](const IntVec& row, std::size_t& last) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (row[k] != 0) ++count, last = k;
    return count;
  };

  bool progress = true;
  while (progress && !p.empty) {
    progress = false;
    for (std::size_t r = 0; r < cur.eq.size() && !p.empty; ++r) {
      std::size_t col = 0;
      const std::size_t count = nonzeros(cur.eq[r], col);
      if (count == 0) {
        if (cur.eq_rhs[r] != 0) p.empty = true;
        continue;
      }
      if (count == 1) {
        const Int a = cur.eq[r][col];
        if (mod_floor(cur.eq_rhs[r], a) != 0 || cur.eq_rhs[r] / a < 0) {
          p.empty = true;
          break;
        }
        substitute(col, cur.eq_rhs[r] / a, IntVec(n));
        gone[col] = true;
        progress = true;
        continue;
      }
      // A unit column whose value is a non-negative combination of the rest.
      for (std::size_t j = 0; j < n; ++j) {
        const Int a = cur.eq[r][j];
        if (a != 1 && a != -1) continue;
        const Int b = cur.eq_rhs[r] * a;
        if (b < 0) continue;
        IntVec g(n);
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
          if (k == j) continue;
          g[k] = -cur.eq[r][k] * a;
          ok = g[k] >= 0;
        }
        if (!ok) continue;
        substitute(j, b, g);
        gone[j] = true;
        progress = true;
        break;
      }
    }
    // Lower bounds a·x ≤ rhs with a < 0 become offsets.
    for (std::size_t r = 0; r < cur.le.size() && !p.empty; ++r) {
      std::size_t col = 0;
      if (nonzeros(cur.le[r], col) != 1 || cur.le[r][col] >= 0) continue;
      const Int a = -cur.le[r][col];
      const Int bound = -cur.le_rhs[r];
      if (bound <= 0) continue;
      const Int low = (bound + a - 1) / a;
      IntVec g(n);
      g[col] = 1;
      substitute(col, low, g);
      progress = true;
    }
  }

  for (std::size_t j = 0; j < n; ++j)
    if (!gone[j]) p.kept.push_back(j);
  p.reduced = NatSystem(p.kept.size());
  auto project = [&](const IntVec& row) {
    IntVec out;
    for (std::size_t j : p.kept) out.push_back(row[j]);
    return out;
  };
  std::set<std::pair<IntVec, Int>> eqs, les;
  for (std::size_t r = 0; r < cur.eq.size() && !p.empty; ++r) {
    IntVec row = project(cur.eq[r]);
    if (std::all_of(row.begin(), row.end(), [](const Int& v) { return v == 0; })) {
      if (cur.eq_rhs[r] != 0) p.empty = true;
      continue;
    }
    if (eqs.emplace(row, cur.eq_rhs[r]).second) p.reduced.add_eq(std::move(row), cur.eq_rhs[r]);
  }
  for (std::size_t r = 0; r < cur.le.size() && !p.empty; ++r) {
    IntVec row = project(cur.le[r]);
    if (std::all_of(row.begin(), row.end(), [](const Int& v) { return v <= 0; })) {
      if (cur.le_rhs[r] < 0 && std::all_of(row.begin(), row.end(), [](const Int& v) { return v == 0; })) p.empty = true;
      if (cur.le_rhs[r] >= 0) continue;
    }
    if (les.emplace(row, cur.le_rhs[r]).second) p.reduced.add_le(std::move(row), cur.le_rhs[r]);
  }
  return p;
}

void sort_unique(std::vector<IntVec>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<IntVec> hilbert_basis(const NatSystem& sys, const HilbertOptions& options) {
  if (!sys.homogeneous()) throw std::invalid_argument("hilbert_basis expects a homogeneous system");
  Completion c = lift(sys, false);
  c.max_nodes = options.max_nodes;
  std::vector<IntVec> out;
  for (auto& x : c.run()) {
    x.resize(sys.arity);
    out.push_back(std::move(x));
  }
  sort_unique(out);
  return out;
}

HybridLinearSet solution_set(const NatSystem& sys, const HilbertOptions& options) {
  HybridLinearSet result;
  Presolved p = presolve(sys);
  if (p.empty) return result;
  const NatSystem& red = p.reduced;
  Completion c = lift(red, true);
  c.max_nodes = options.max_nodes;
  const std::size_t z = c.columns.size() - 1;
  for (auto x : c.run()) {
    const bool base = x[z] == 1;
    x.resize(p.kept.size());
    (base ? result.bases : result.periods).push_back(p.expand(x, base));
  }
  sort_unique(result.bases);
  sort_unique(result.periods);
  return result;
}

std::vector<IntVec> minimal_solutions(const NatSystem& sys, const HilbertOptions& options) {
  return solution_set(sys, options).bases;
}

}  // namespace powsum
