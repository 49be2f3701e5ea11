#include "powsum/semilinear.hpp"

#include <algorithm>
#include <map>

namespace powsum {

Int small_model_bound(const NatSystem& sys) {
  const std::size_t m = sys.rows();
  const std::size_t n = sys.arity + sys.le.size();
  Int a = sys.le.empty() ? 0 : 1;
  auto scan = [&](const IntMatrix& rows, const IntVec& rhs) {
    for (const auto& r : rows)
      for (const auto& v : r) a = std::max(a, Int(abs(v)));
    for (const auto& v : rhs) a = std::max(a, Int(abs(v)));
  };
  scan(sys.eq, sys.eq_rhs);
  scan(sys.le, sys.le_rhs);
  return Int(n) * pow(Int(m) * a, static_cast<unsigned>(2 * m + 1));
}

namespace {

struct Row {
  IntVec a;
  Int b;
};

Int row_gcd(const IntVec& a) {
  Int g = 0;
  for (const auto& v : a)
    if (v != 0) g = gcd(g, v);
  return g;
}

// Divides by the coefficient gcd; inequalities round the bound down.
// Returns false when the row alone is unsatisfiable. Zero rows are marked
// by an empty coefficient vector.
bool normalize_eq(Row& r) {
  Int g = row_gcd(r.a);
  if (g == 0) {
    if (r.b != 0) return false;
    r.a.clear();
    return true;
  }
  if (mod_floor(r.b, g) != 0) return false;
  if (g != 1) {
    for (auto& v : r.a) v /= g;
    r.b /= g;
  }
  return true;
}

bool normalize_le(Row& r) {
  Int g = row_gcd(r.a);
  if (g == 0) {
    if (r.b < 0) return false;
    r.a.clear();
    return true;
  }
  if (g != 1) {
    for (auto& v : r.a) v /= g;
    r.b = floor_div(r.b, g);
  }
  return true;
}

enum class Prop { Fixpoint, Stalled, Infeasible };

struct Box {
  IntVec lo;
  IntVec hi;
};

// Tightens bounds from sign·a·x ≤ sign·b. Returns false on an empty domain.
bool tighten(const IntVec& a, const Int& b, int sign, Box& box, bool& changed) {
  Int minsum = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    const Int c = sign * a[j];
    minsum += c > 0 ? c * box.lo[j] : c * box.hi[j];
  }
  const Int rhs = sign * b;
  if (minsum > rhs) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0 || box.lo[j] == box.hi[j]) continue;
    const Int c = sign * a[j];
    const Int own = c > 0 ? c * box.lo[j] : c * box.hi[j];
    const Int slack = rhs - (minsum - own);
    if (c > 0) {
      Int nh = floor_div(slack, c);
      if (nh < box.hi[j]) {
        box.hi[j] = nh;
        changed = true;
        if (nh < box.lo[j]) return false;
      }
    } else {
      Int nl = ceil_div(slack, c);
      if (nl > box.lo[j]) {
        box.lo[j] = nl;
        changed = true;
        if (nl > box.hi[j]) return false;
      }
    }
  }
  return true;
}

constexpr int kMaxRounds = 64;
constexpr std::size_t kMaxFmRows = 400;
constexpr int kEnumerateWidth = 16;

class Search {
 public:
  Search(const NatSystem& sys, const IlpOptions& options) : sys_(sys), options_(options) {}

  IlpResult run(bool root_only, bool& refuted) {
    IlpResult result;
    result.box = options_.box ? *options_.box : small_model_bound(sys_);
    refuted = false;
    if (!load()) {
      refuted = true;
      result.status = IlpStatus::Infeasible;
      return result;
    }
    const std::size_t n = sys_.arity;
    std::vector<Box> stack;
    stack.push_back({IntVec(n, 0), IntVec(n, result.box)});
    bool root = true;
    while (!stack.empty()) {
      if (++result.nodes > options_.max_nodes) {
        result.status = IlpStatus::ResourceLimit;
        return result;
      }
      Box node = std::move(stack.back());
      stack.pop_back();
      const bool was_root = root;
      root = false;

      Prop p = propagate(node);
      bool dead = p == Prop::Infeasible || !lattice_ok(node);
      if (!dead && (p == Prop::Stalled || was_root)) dead = fm_refutes(node, result.box);
      if (dead) {
        if (was_root) refuted = true;
        continue;
      }
      if (root_only) {
        result.status = IlpStatus::ResourceLimit;
        return result;
      }

      std::size_t pick = n;
      Int width;
      for (std::size_t j = 0; j < n; ++j) {
        if (node.lo[j] == node.hi[j]) continue;
        Int w = node.hi[j] - node.lo[j];
        if (pick == n || w < width) {
          pick = j;
          width = w;
        }
      }
      if (pick == n) {
        if (sys_.satisfied_by(node.lo)) {
          result.status = IlpStatus::Feasible;
          result.solution = std::move(node.lo);
          return result;
        }
        continue;
      }
      if (width < kEnumerateWidth) {
        for (Int v = node.hi[pick]; v >= node.lo[pick]; --v) {
          Box child = node;
          child.lo[pick] = v;
          child.hi[pick] = v;
          stack.push_back(std::move(child));
        }
      } else {
        Int mid = node.lo[pick] + width / 2;
        Box upper = node;
        upper.lo[pick] = mid + 1;
        node.hi[pick] = mid;
        stack.push_back(std::move(upper));
        stack.push_back(std::move(node));
      }
    }
    result.status = IlpStatus::Infeasible;
    return result;
  }

 private:
  bool load() {
    for (std::size_t r = 0; r < sys_.eq.size(); ++r) {
      Row row{sys_.eq[r], sys_.eq_rhs[r]};
      if (!normalize_eq(row)) return false;
      if (!row.a.empty()) eq_.push_back(std::move(row));
    }
    for (std::size_t r = 0; r < sys_.le.size(); ++r) {
      Row row{sys_.le[r], sys_.le_rhs[r]};
      if (!normalize_le(row)) return false;
      if (!row.a.empty()) le_.push_back(std::move(row));
    }
    return true;
  }

  Prop propagate(Box& box) const {
    for (int round = 0; round < kMaxRounds; ++round) {
      bool changed = false;
      for (const auto& r : eq_)
        if (!tighten(r.a, r.b, 1, box, changed) || !tighten(r.a, r.b, -1, box, changed)) return Prop::Infeasible;
      for (const auto& r : le_)
        if (!tighten(r.a, r.b, 1, box, changed)) return Prop::Infeasible;
      if (!changed) return Prop::Fixpoint;
    }
    return Prop::Stalled;
  }

  // Integer solvability of the equalities ignoring bounds, by unimodular
  // column operations to a lower echelon form.
  bool lattice_ok(const Box& box) const {
    if (eq_.empty()) return true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < sys_.arity; ++j)
      if (box.lo[j] != box.hi[j]) free.push_back(j);
    const std::size_t m = eq_.size();
    const std::size_t k = free.size();
    IntMatrix a(m, IntVec(k));
    IntVec rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      rhs[i] = eq_[i].b;
      for (std::size_t j = 0; j < sys_.arity; ++j)
        if (eq_[i].a[j] != 0 && box.lo[j] == box.hi[j]) rhs[i] -= eq_[i].a[j] * box.lo[j];
      for (std::size_t c = 0; c < k; ++c) a[i][c] = eq_[i].a[free[c]];
    }
    IntVec y;
    std::size_t col = 0;
    for (std::size_t i = 0; i < m; ++i) {
      while (true) {
        std::size_t p = k;
        std::size_t nonzero = 0;
        for (std::size_t c = col; c < k; ++c) {
          if (a[i][c] == 0) continue;
          ++nonzero;
          if (p == k || abs(a[i][c]) < abs(a[i][p])) p = c;
        }
        if (nonzero <= 1) {
          if (p != k && p != col)
            for (std::size_t r = i; r < m; ++r) std::swap(a[r][p], a[r][col]);
          break;
        }
        for (std::size_t c = col; c < k; ++c) {
          if (c == p || a[i][c] == 0) continue;
          Int t = a[i][c] / a[i][p];
          for (std::size_t r = i; r < m; ++r) a[r][c] -= t * a[r][p];
        }
      }
      Int residual = rhs[i];
      for (std::size_t c = 0; c < col; ++c) residual -= a[i][c] * y[c];
      if (col < k && a[i][col] != 0) {
        if (mod_floor(residual, a[i][col]) != 0) return false;
        y.push_back(residual / a[i][col]);
        ++col;
      } else if (residual != 0) {
        return false;
      }
    }
    return true;
  }

  // Fourier–Motzkin on the integer-tightened system. True means refuted;
  // false also when the row cap is reached.
  bool fm_refutes(const Box& box, const Int& global) const {
    const std::size_t n = sys_.arity;
    auto substitute = [&](const Row& r) {
      Row out{IntVec(n), r.b};
      for (std::size_t j = 0; j < n; ++j) {
        if (r.a[j] == 0) continue;
        if (box.lo[j] == box.hi[j]) out.b -= r.a[j] * box.lo[j];
        else out.a[j] = r.a[j];
      }
      return out;
    };
    std::vector<Row> eqs, les;
    for (const auto& r : eq_) eqs.push_back(substitute(r));
    for (const auto& r : le_) les.push_back(substitute(r));
    for (std::size_t j = 0; j < n; ++j) {
      if (box.lo[j] == box.hi[j]) continue;
      Row lower{IntVec(n), -box.lo[j]};
      lower.a[j] = -1;
      les.push_back(std::move(lower));
      if (box.hi[j] < global) {
        Row upper{IntVec(n), box.hi[j]};
        upper.a[j] = 1;
        les.push_back(std::move(upper));
      }
    }

    for (std::size_t e = 0; e < eqs.size(); ++e) {
      if (!normalize_eq(eqs[e])) return true;
      if (eqs[e].a.empty()) continue;
      const Row pivot = eqs[e];
      std::size_t j = 0;
      while (pivot.a[j] == 0) ++j;
      const Int p = abs(pivot.a[j]);
      const int s = pivot.a[j] > 0 ? 1 : -1;
      for (std::size_t f = e + 1; f < eqs.size(); ++f) {
        auto& r = eqs[f];
        if (r.a.empty() || r.a[j] == 0) continue;
        const Int c = r.a[j];
        for (std::size_t t = 0; t < n; ++t) r.a[t] = p * r.a[t] - c * s * pivot.a[t];
        r.b = p * r.b - c * s * pivot.b;
      }
      for (auto& r : les) {
        if (r.a.empty() || r.a[j] == 0) continue;
        const Int c = r.a[j];
        for (std::size_t t = 0; t < n; ++t) r.a[t] = p * r.a[t] - c * s * pivot.a[t];
        r.b = p * r.b - c * s * pivot.b;
        if (!normalize_le(r)) return true;
      }
    }

    while (true) {
      std::map<IntVec, Int> best;
      for (auto& r : les) {
        if (r.a.empty()) continue;
        if (!normalize_le(r)) return true;
        if (r.a.empty()) continue;
        auto [it, fresh] = best.emplace(r.a, r.b);
        if (!fresh && r.b < it->second) it->second = r.b;
      }
      les.clear();
      for (auto& [a, b] : best) les.push_back({a, b});
      if (les.size() > kMaxFmRows) return false;

      std::size_t pick = n;
      std::size_t pick_cost = 0;
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t pos = 0, neg = 0;
        for (const auto& r : les) {
          if (r.a[j] > 0) ++pos;
          else if (r.a[j] < 0) ++neg;
        }
        if (pos + neg == 0) continue;
        std::size_t cost = pos * neg;
        if (pick == n || cost < pick_cost) {
          pick = j;
          pick_cost = cost;
        }
      }
      if (pick == n) return false;
      if (les.size() + pick_cost > kMaxFmRows * 4) return false;

      std::vector<Row> next, pos, neg;
      for (auto& r : les) {
        if (r.a[pick] > 0) pos.push_back(std::move(r));
        else if (r.a[pick] < 0) neg.push_back(std::move(r));
        else next.push_back(std::move(r));
      }
      for (const auto& u : pos) {
        for (const auto& l : neg) {
          const Int cu = -l.a[pick];
          const Int cl = u.a[pick];
          Row r{IntVec(n), cu * u.b + cl * l.b};
          for (std::size_t t = 0; t < n; ++t) r.a[t] = cu * u.a[t] + cl * l.a[t];
          if (!normalize_le(r)) return true;
          if (!r.a.empty()) next.push_back(std::move(r));
        }
      }
      les = std::move(next);
    }
  }

  const NatSystem& sys_;
  const IlpOptions& options_;
  std::vector<Row> eq_;
  std::vector<Row> le_;
};

}  // namespace

IlpResult ilp_feasible(const NatSystem& sys, const IlpOptions& options) {
  bool refuted = false;
  return Search(sys, options).run(false, refuted);
}

bool quick_infeasible(const NatSystem& sys) {
  IlpOptions options;
  bool refuted = false;
  Search(sys, options).run(true, refuted);
  return refuted;
}

}  // namespace powsum
