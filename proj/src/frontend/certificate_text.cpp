#include "powsum/certificate.hpp"
#include "powsum/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace powsum {

namespace {

void print_vec(std::ostream& os, const char* head, const IntVec& v) {
  os << '(' << head;
  for (const auto& x : v) os << ' ' << x.str();
  os << ')';
}

void print_system(std::ostream& os, const NatSystem& s) {
  os << "(columns " << s.arity << ") (eq";
  for (const auto& r : s.eq) {
    os << ' ';
    print_vec(os, "row", r);
  }
  os << ") ";
  print_vec(os, "eq-rhs", s.eq_rhs);
  os << " (le";
  for (const auto& r : s.le) {
    os << ' ';
    print_vec(os, "row", r);
  }
  os << ") ";
  print_vec(os, "le-rhs", s.le_rhs);
}

void print_bindings(std::ostream& os, const char* head, const std::map<Symbol, Int, ByName>& m) {
  for (const auto& [s, v] : m) os << "\n  (" << head << ' ' << s.name() << ' ' << v.str() << ')';
}

// ------------------------------------------------------------- parsing

Int integer(const SExpr& e) {
  const std::string& s = e.atom;
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (e.is_list || i == s.size() ||
      !std::all_of(s.begin() + i, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    e.fail("expected an integer");
  return Int(s);
}

std::size_t index(const SExpr& e) {
  Int v = integer(e);
  if (v < 0 || v > 1000000000) e.fail("index out of range");
  return static_cast<std::size_t>(v);
}

const SExpr& expect_call(const SExpr& e, std::string_view head, std::size_t min_items) {
  if (!e.is_call(head) || e.items.size() < min_items) e.fail("expected (" + std::string(head) + " ...)");
  return e;
}

IntVec vec_items(const SExpr& e, std::size_t from) {
  IntVec v;
  for (std::size_t i = from; i < e.items.size(); ++i) v.push_back(integer(e.items[i]));
  return v;
}

IntVec sized_vec(const SExpr& e, std::string_view head, std::size_t arity) {
  expect_call(e, head, 1);
  IntVec v = vec_items(e, 1);
  if (v.size() != arity)
    throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " where " + std::to_string(arity) + " is declared",
                            e.line, e.column);
  return v;
}

// Items: (cube K) (columns n) (eq (row ...)...) (eq-rhs ...) (le ...) (le-rhs ...)
ShippedSystem parse_system(const SExpr& e, std::size_t from) {
  if (e.items.size() != from + 6) e.fail("malformed system");
  ShippedSystem s;
  s.cube = index(expect_call(e.items[from], "cube", 2).items[1]);
  const std::size_t n = index(expect_call(e.items[from + 1], "columns", 2).items[1]);
  s.system = NatSystem(n);
  const auto& eq = expect_call(e.items[from + 2], "eq", 1);
  IntVec eq_rhs = vec_items(expect_call(e.items[from + 3], "eq-rhs", 1), 1);
  const auto& le = expect_call(e.items[from + 4], "le", 1);
  IntVec le_rhs = vec_items(expect_call(e.items[from + 5], "le-rhs", 1), 1);
  if (eq_rhs.size() != eq.items.size() - 1 || le_rhs.size() != le.items.size() - 1)
    throw DimensionMismatch("right-hand side length differs from the row count", e.line, e.column);
  for (std::size_t r = 1; r < eq.items.size(); ++r) s.system.add_eq(sized_vec(eq.items[r], "row", n), eq_rhs[r - 1]);
  for (std::size_t r = 1; r < le.items.size(); ++r) s.system.add_le(sized_vec(le.items[r], "row", n), le_rhs[r - 1]);
  return s;
}

// (atom i ...) with i equal to its position.
const SExpr& atom_entry(const SExpr& e, std::size_t expected) {
  expect_call(e, "atom", 2);
  if (index(e.items[1]) != expected) e.fail("atoms must be listed in order");
  return e;
}

}  // namespace

std::string print_certificate(const Certificate& c) {
  std::ostringstream os;
  os << "(certificate\n (digest " << c.digest << ")\n (disjuncts\n  (f0 (cube " << c.f0.cube << ") ";
  print_system(os, c.f0.system);
  os << ')';
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    os << "\n  (atom " << a << " (arity " << c.atoms[a].arity << ')';
    for (const auto& s : c.atoms[a].cubes) {
      os << "\n   (system (cube " << s.cube << ") ";
      print_system(os, s.system);
      os << ')';
    }
    os << ')';
  }
  os << ")\n (bases";
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    os << "\n  (atom " << a;
    for (std::size_t l = 0; l < c.atoms[a].bases.size(); ++l) {
      const auto& b = c.atoms[a].bases[l];
      os << "\n   (base " << l << " (cube " << b.cube << ") ";
      print_vec(os, "vec", b.vec);
      os << ')';
    }
    os << ')';
  }
  os << ")\n (periods";
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    os << "\n  (atom " << a;
    for (std::size_t s = 0; s < c.atoms[a].periods.size(); ++s) {
      const auto& q = c.atoms[a].periods[s];
      os << "\n   (period " << s << " (base " << q.base << ") ";
      print_vec(os, "vec", q.vec);
      os << ')';
    }
    os << ')';
  }
  os << ")\n (assignment";
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    for (std::size_t l = 0; l < c.atoms[a].mu.size(); ++l) os << "\n  (mu " << a << ' ' << l << ' ' << c.atoms[a].mu[l].str() << ')';
    for (std::size_t s = 0; s < c.atoms[a].lambda.size(); ++s)
      os << "\n  (lambda " << a << ' ' << s << ' ' << c.atoms[a].lambda[s].str() << ')';
  }
  print_bindings(os, "x", c.x);
  print_bindings(os, "u", c.u);
  print_bindings(os, "v", c.v);
  os << "))\n";
  return os.str();
}

Certificate parse_certificate(std::string_view text) {
  auto doc = parse_sexprs(text);
  if (doc.size() != 1) throw SyntaxError("expected exactly one certificate", 1, 1);
  const SExpr& root = doc[0];
  if (!root.is_call("certificate") || root.items.size() != 6) root.fail("expected (certificate digest disjuncts bases periods assignment)");
  Certificate c;

  const auto& dg = expect_call(root.items[1], "digest", 2);
  Int d = integer(dg.items[1]);
  if (d < 0 || d > Int(UINT64_MAX)) dg.fail("digest out of range");
  c.digest = static_cast<std::uint64_t>(d);

  const auto& disj = expect_call(root.items[2], "disjuncts", 2);
  c.f0 = parse_system(expect_call(disj.items[1], "f0", 7), 1);
  for (std::size_t i = 2; i < disj.items.size(); ++i) {
    const auto& e = atom_entry(disj.items[i], i - 2);
    if (e.items.size() < 3) e.fail("atom needs an arity");
    AtomCertificate ac;
    ac.arity = index(expect_call(e.items[2], "arity", 2).items[1]);
    for (std::size_t k = 3; k < e.items.size(); ++k) {
      const auto& s = expect_call(e.items[k], "system", 7);
      ac.cubes.push_back(parse_system(s, 1));
      if (ac.cubes.back().system.arity < ac.arity) throw DimensionMismatch("system narrower than the atom arity", s.line, s.column);
    }
    c.atoms.push_back(std::move(ac));
  }

  const auto& bases = expect_call(root.items[3], "bases", 1);
  const auto& periods = expect_call(root.items[4], "periods", 1);
  if (bases.items.size() != c.atoms.size() + 1 || periods.items.size() != c.atoms.size() + 1)
    root.fail("bases and periods need one entry per atom");
  for (std::size_t a = 0; a < c.atoms.size(); ++a) {
    auto& ac = c.atoms[a];
    const auto& be = atom_entry(bases.items[a + 1], a);
    for (std::size_t k = 2; k < be.items.size(); ++k) {
      const auto& b = expect_call(be.items[k], "base", 4);
      if (b.items.size() != 4 || index(b.items[1]) != k - 2) b.fail("bases must be numbered in order");
      ac.bases.push_back({index(expect_call(b.items[2], "cube", 2).items[1]), sized_vec(b.items[3], "vec", ac.arity)});
    }
    const auto& pe = atom_entry(periods.items[a + 1], a);
    for (std::size_t k = 2; k < pe.items.size(); ++k) {
      const auto& q = expect_call(pe.items[k], "period", 4);
      if (q.items.size() != 4 || index(q.items[1]) != k - 2) q.fail("periods must be numbered in order");
      ac.periods.push_back({index(expect_call(q.items[2], "base", 2).items[1]), sized_vec(q.items[3], "vec", ac.arity)});
    }
  }

  const auto& asg = expect_call(root.items[5], "assignment", 1);
  std::vector<std::size_t> mu_seen(c.atoms.size()), lambda_seen(c.atoms.size());
  for (std::size_t k = 1; k < asg.items.size(); ++k) {
    const auto& e = asg.items[k];
    if (e.is_call("mu") || e.is_call("lambda")) {
      if (e.items.size() != 4) e.fail("expected (" + e.head() + " atom index value)");
      const std::size_t a = index(e.items[1]);
      if (a >= c.atoms.size()) e.fail("atom index out of range");
      auto& seen = e.is_call("mu") ? mu_seen[a] : lambda_seen[a];
      if (index(e.items[2]) != seen) e.fail("coefficients must be listed in order");
      ++seen;
      (e.is_call("mu") ? c.atoms[a].mu : c.atoms[a].lambda).push_back(integer(e.items[3]));
    } else if (e.is_call("x") || e.is_call("u") || e.is_call("v")) {
      if (e.items.size() != 3 || e.items[1].is_list) e.fail("expected (" + e.head() + " name value)");
      auto& section = e.is_call("x") ? c.x : e.is_call("u") ? c.u : c.v;
      if (!section.emplace(Symbol::intern(e.items[1].atom), integer(e.items[2])).second) e.fail("variable bound twice");
    } else {
      e.fail("unknown assignment entry");
    }
  }
  return c;
}

}  // namespace powsum
