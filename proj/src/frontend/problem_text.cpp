#include "powsum/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace powsum {

namespace {

enum class Sort { Array, Set, Int };

bool is_integer_literal(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + i, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Int literal(const SExpr& e) {
  if (!e.is_atom() || !is_integer_literal(e.atom)) e.fail("expected an integer literal");
  return Int(e.atom);
}

Symbol identifier(const SExpr& e) {
  if (!e.is_atom() || e.atom.empty() || is_integer_literal(e.atom)) e.fail("expected an identifier");
  return Symbol::intern(e.atom);
}

LinTerm parse_term(const SExpr& e) {
  if (e.is_atom()) {
    if (is_integer_literal(e.atom)) return LinTerm(Int(e.atom));
    return LinTerm::variable(identifier(e));
  }
  if (e.is_call("+")) {
    if (e.items.size() < 2) e.fail("'+' needs at least one operand");
    LinTerm t;
    for (std::size_t i = 1; i < e.items.size(); ++i) t += parse_term(e.items[i]);
    return t;
  }
  if (e.is_call("*")) {
    if (e.items.size() != 3) e.fail("'*' takes a literal and a term");
    return literal(e.items[1]) * parse_term(e.items[2]);
  }
  e.fail("malformed term");
}

const std::map<std::string, AtomKind, std::less<>>& comparison_heads() {
  static const std::map<std::string, AtomKind, std::less<>> heads{
      {"=", AtomKind::Eq}, {"distinct", AtomKind::Neq}, {"<=", AtomKind::Le},
      {"<", AtomKind::Lt}, {">=", AtomKind::Ge},        {">", AtomKind::Gt}};
  return heads;
}

QfpaAtom parse_atom(const SExpr& e) {
  if (e.is_call("mod")) {
    if (e.items.size() != 4) e.fail("'mod' takes two terms and a modulus");
    Int k = literal(e.items[3]);
    if (k < 2) e.items[3].fail("modulus must be at least 2");
    return QfpaAtom::mod(parse_term(e.items[1]), parse_term(e.items[2]), k);
  }
  auto it = comparison_heads().find(e.head());
  if (it == comparison_heads().end()) e.fail("expected a formula");
  if (e.items.size() != 3) e.fail("'" + e.head() + "' takes two terms");
  return QfpaAtom::make(it->second, parse_term(e.items[1]), parse_term(e.items[2]));
}

std::vector<QfpaFormula> parse_qfpa_list(const SExpr& e) {
  std::vector<QfpaFormula> out;
  for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(parse_qfpa(e.items[i]));
  return out;
}

class ProblemParser {
 public:
  FragmentProblem run(std::string_view text) {
    auto doc = parse_sexprs(text);
    for (const auto& e : doc) {
      if (e.is_call("declare-array")) declare(e, Sort::Array);
      else if (e.is_call("declare-set")) declare(e, Sort::Set);
      else if (e.is_call("declare-int")) declare(e, Sort::Int);
    }
    std::vector<BapaFormula> bapa;
    for (const auto& e : doc) {
      const std::string& h = e.head();
      if (h == "declare-array" || h == "declare-set" || h == "declare-int") continue;
      if (h == "bapa") {
        if (e.items.size() != 2) e.fail("'bapa' takes one formula");
        bapa.push_back(parse_bf(e.items[1]));
      } else if (h == "interp") {
        if (e.items.size() != 3) e.fail("'interp' takes a set and a formula");
        SetInterpretation in;
        if (!e.items[1].is_atom("full")) in.set_var = identifier(e.items[1]);
        in.guard = parse_qfpa(e.items[2]);
        p_.interps.push_back(std::move(in));
      } else if (h == "sum") {
        if (p_.sum) e.fail("at most one sum constraint is allowed");
        if (e.items.size() != 3 || !e.items[1].is_list || e.items[1].items.empty())
          e.fail("'sum' takes a list of (sumvar array) pairs and a guard");
        SumSpec s;
        for (const auto& pair : e.items[1].items) {
          if (!pair.is_list || pair.items.size() != 2) pair.fail("expected (sumvar array)");
          s.targets.push_back({identifier(pair.items[0]), identifier(pair.items[1])});
        }
        s.guard = parse_qfpa(e.items[2]);
        p_.sum = std::move(s);
      } else {
        e.fail("expected a declaration or constraint");
      }
    }
    if (bapa.size() == 1) p_.bapa = bapa[0];
    else if (bapa.size() > 1) p_.bapa = BapaFormula::conjunction(std::move(bapa));
    return std::move(p_);
  }

 private:
  void declare(const SExpr& e, Sort s) {
    if (e.items.size() != 2) e.fail("'" + e.head() + "' takes one identifier");
    Symbol x = identifier(e.items[1]);
    if (!sorts_.emplace(x, s).second)
      throw DuplicateDeclarationError("'" + x.name() + "' is declared more than once", e.line, e.column);
    (s == Sort::Array ? p_.arrays : s == Sort::Set ? p_.sets : p_.ints).push_back(x);
  }

  bool is_set_expr(const SExpr& e) const {
    if (e.is_atom()) {
      if (is_integer_literal(e.atom)) return false;
      auto it = sorts_.find(Symbol::intern(e.atom));
      if (it != sorts_.end()) return it->second == Sort::Set;
      return e.atom == "empty" || e.atom == "full";
    }
    return e.is_call("union") || e.is_call("inter") || e.is_call("compl");
  }

  SetTerm parse_set(const SExpr& e) const {
    if (e.is_atom()) {
      auto it = sorts_.find(Symbol::intern(e.atom));
      if (it == sorts_.end()) {
        if (e.atom == "empty") return SetTerm::empty();
        if (e.atom == "full") return SetTerm::full();
      }
      return SetTerm::var(identifier(e));
    }
    if (e.is_call("union") || e.is_call("inter")) {
      if (e.items.size() != 3) e.fail("'" + e.head() + "' takes two set terms");
      auto a = parse_set(e.items[1]);
      auto b = parse_set(e.items[2]);
      return e.is_call("union") ? SetTerm::set_union(a, b) : SetTerm::intersection(a, b);
    }
    if (e.is_call("compl")) {
      if (e.items.size() != 2) e.fail("'compl' takes one set term");
      return SetTerm::complement(parse_set(e.items[1]));
    }
    e.fail("expected a set term");
  }

  BapaFormula parse_bf(const SExpr& e) const {
    static const std::map<std::string, CardOp, std::less<>> card_ops{
        {"card=", CardOp::Eq}, {"card<=", CardOp::Le}, {"card<", CardOp::Lt}, {"card>=", CardOp::Ge}, {"card>", CardOp::Gt}};
    if (e.is_call("and") || e.is_call("or")) {
      std::vector<BapaFormula> cs;
      for (std::size_t i = 1; i < e.items.size(); ++i) cs.push_back(parse_bf(e.items[i]));
      return e.is_call("and") ? BapaFormula::conjunction(std::move(cs)) : BapaFormula::disjunction(std::move(cs));
    }
    if (e.is_call("not")) {
      if (e.items.size() != 2) e.fail("'not' takes one formula");
      return BapaFormula::negation(parse_bf(e.items[1]));
    }
    if (e.is_call("subset")) {
      if (e.items.size() != 3) e.fail("'subset' takes two set terms");
      return BapaFormula::subset(parse_set(e.items[1]), parse_set(e.items[2]));
    }
    if (e.is_call("=") && e.items.size() == 3 && (is_set_expr(e.items[1]) || is_set_expr(e.items[2])))
      return BapaFormula::set_eq(parse_set(e.items[1]), parse_set(e.items[2]));
    if (auto it = card_ops.find(e.head()); it != card_ops.end()) {
      if (e.items.size() != 3) e.fail("'" + e.head() + "' takes a set term and a term");
      return BapaFormula::card(parse_set(e.items[1]), it->second, parse_term(e.items[2]));
    }
    return BapaFormula::qfpa(QfpaFormula::atom(parse_atom(e)));
  }

  FragmentProblem p_;
  std::map<Symbol, Sort> sorts_;
};

// ------------------------------------------------------------- printing

void print_term_to(std::ostream& os, const LinTerm& t) {
  auto coeffs = t.coefficients();
  std::sort(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) { return ByName{}(a.first, b.first); });
  std::vector<std::string> parts;
  for (const auto& [s, c] : coeffs) parts.push_back(c == 1 ? s.name() : "(* " + c.str() + " " + s.name() + ")");
  if (t.constant() != 0 || parts.empty()) parts.push_back(t.constant().str());
  if (parts.size() == 1) {
    os << parts[0];
    return;
  }
  os << "(+";
  for (const auto& p : parts) os << ' ' << p;
  os << ')';
}

bool has_negative(const LinTerm& t) {
  if (t.constant() < 0) return true;
  for (const auto& [s, c] : t.coefficients())
    if (c < 0) return true;
  return false;
}

// Moves negative parts across so both sides print inside the grammar.
std::pair<LinTerm, LinTerm> balanced(const LinTerm& l, const LinTerm& r) {
  if (!has_negative(l) && !has_negative(r)) return {l, r};
  LinTerm d = l - r;
  LinTerm left, right;
  if (d.constant() > 0) left += LinTerm(d.constant());
  else right += LinTerm(-d.constant());
  for (const auto& [s, c] : d.coefficients()) {
    if (c > 0) left += LinTerm::variable(s, c);
    else right += LinTerm::variable(s, -c);
  }
  return {left, right};
}

const char* atom_head(AtomKind k) {
  switch (k) {
    case AtomKind::Eq: return "=";
    case AtomKind::Neq: return "distinct";
    case AtomKind::Le: return "<=";
    case AtomKind::Lt: return "<";
    case AtomKind::Ge: return ">=";
    case AtomKind::Gt: return ">";
    case AtomKind::Mod: return "mod";
  }
  return "?";
}

void print_atom_to(std::ostream& os, const QfpaAtom& a) {
  auto [l, r] = balanced(a.lhs, a.rhs);
  os << '(' << atom_head(a.kind) << ' ';
  print_term_to(os, l);
  os << ' ';
  print_term_to(os, r);
  if (a.kind == AtomKind::Mod) os << ' ' << a.modulus.str();
  os << ')';
}

void print_qfpa_to(std::ostream& os, const QfpaFormula& f) {
  using K = QfpaFormula::Kind;
  switch (f.kind()) {
    case K::Atom: print_atom_to(os, f.atom()); return;
    case K::Not:
      os << "(not ";
      print_qfpa_to(os, f.children()[0]);
      os << ')';
      return;
    case K::And:
    case K::Or:
      os << (f.kind() == K::And ? "(and" : "(or");
      for (const auto& c : f.children()) {
        os << ' ';
        print_qfpa_to(os, c);
      }
      os << ')';
      return;
  }
}

void print_set_to(std::ostream& os, const SetTerm& t) {
  using K = SetTerm::Kind;
  switch (t.kind()) {
    case K::Var: os << t.symbol().name(); return;
    case K::Union:
    case K::Inter:
      os << (t.kind() == K::Union ? "(union " : "(inter ");
      print_set_to(os, t.children()[0]);
      os << ' ';
      print_set_to(os, t.children()[1]);
      os << ')';
      return;
    case K::Compl:
      os << "(compl ";
      print_set_to(os, t.children()[0]);
      os << ')';
      return;
    case K::Empty: os << "empty"; return;
    case K::Full: os << "full"; return;
  }
}

const char* card_head(CardOp op) {
  switch (op) {
    case CardOp::Eq: return "card=";
    case CardOp::Le: return "card<=";
    case CardOp::Lt: return "card<";
    case CardOp::Ge: return "card>=";
    case CardOp::Gt: return "card>";
  }
  return "?";
}

void print_bapa_to(std::ostream& os, const BapaFormula& f) {
  using K = BapaFormula::Kind;
  switch (f.kind()) {
    case K::Subset:
    case K::SetEq:
      os << (f.kind() == K::Subset ? "(subset " : "(= ");
      print_set_to(os, f.left());
      os << ' ';
      print_set_to(os, f.right());
      os << ')';
      return;
    case K::Card:
      os << '(' << card_head(f.card_op()) << ' ';
      print_set_to(os, f.left());
      os << ' ';
      print_term_to(os, f.bound());
      os << ')';
      return;
    case K::Qfpa: print_qfpa_to(os, f.qfpa_formula()); return;
    case K::And:
    case K::Or:
      os << (f.kind() == K::And ? "(and" : "(or");
      for (const auto& c : f.children()) {
        os << ' ';
        print_bapa_to(os, c);
      }
      os << ')';
      return;
    case K::Not:
      os << "(not ";
      print_bapa_to(os, f.children()[0]);
      os << ')';
      return;
  }
}

void print_decls(std::ostream& os, const char* kind, const std::vector<Symbol>& xs) {
  for (Symbol x : xs) os << "(declare-" << kind << ' ' << x.name() << ")\n";
}

void print_interps(std::ostream& os, const std::vector<SetInterpretation>& interps) {
  for (const auto& in : interps) {
    os << "(interp " << (in.universal() ? std::string("full") : in.set_var->name()) << ' ';
    print_qfpa_to(os, in.guard);
    os << ")\n";
  }
}

void print_sum(std::ostream& os, const SumSpec& s) {
  if (s.targets.empty()) return;
  os << "(sum (";
  for (std::size_t i = 0; i < s.targets.size(); ++i)
    os << (i ? " " : "") << '(' << s.targets[i].sum_var.name() << ' ' << s.targets[i].array.name() << ')';
  os << ") ";
  print_qfpa_to(os, s.guard);
  os << ")\n";
}

void print_psi(std::ostream& os, const QfpaFormula& psi) {
  if (psi.is_truth()) return;
  os << "(bapa ";
  print_qfpa_to(os, psi);
  os << ")\n";
}

template <class F>
std::string to_text(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

void print_names(std::ostream& os, const char* head, const std::vector<Symbol>& xs) {
  os << '(' << head;
  for (Symbol x : xs) os << ' ' << x.name();
  os << ')';
}

}  // namespace

FragmentProblem parse_problem(std::string_view text) { return ProblemParser().run(text); }

QfpaFormula parse_qfpa(const SExpr& e) {
  if (e.is_call("and") || e.is_call("or")) {
    auto cs = parse_qfpa_list(e);
    return e.is_call("and") ? QfpaFormula::conjunction(std::move(cs)) : QfpaFormula::disjunction(std::move(cs));
  }
  if (e.is_call("not")) {
    if (e.items.size() != 2) e.fail("'not' takes one formula");
    return QfpaFormula::negation(parse_qfpa(e.items[1]));
  }
  if (!e.is_list) e.fail("expected a formula");
  return QfpaFormula::atom(parse_atom(e));
}

QfpaFormula parse_qfpa(std::string_view text) {
  auto doc = parse_sexprs(text);
  if (doc.size() != 1) throw SyntaxError("expected exactly one formula", 1, 1);
  return parse_qfpa(doc[0]);
}

std::string print_term(const LinTerm& t) {
  return to_text([&](std::ostream& os) { print_term_to(os, t); });
}
std::string print_atom(const QfpaAtom& a) {
  return to_text([&](std::ostream& os) { print_atom_to(os, a); });
}
std::string print_qfpa(const QfpaFormula& f) {
  return to_text([&](std::ostream& os) { print_qfpa_to(os, f); });
}
std::string print_set_term(const SetTerm& t) {
  return to_text([&](std::ostream& os) { print_set_to(os, t); });
}
std::string print_bapa(const BapaFormula& f) {
  return to_text([&](std::ostream& os) { print_bapa_to(os, f); });
}

std::string print_problem(const FragmentProblem& p) {
  return to_text([&](std::ostream& os) {
    print_decls(os, "array", p.arrays);
    print_decls(os, "set", p.sets);
    print_decls(os, "int", p.ints);
    print_interps(os, p.interps);
    if (p.sum) print_sum(os, *p.sum);
    if (!p.bapa.is_truth()) {
      os << "(bapa ";
      print_bapa_to(os, p.bapa);
      os << ")\n";
    }
  });
}

std::string print_sum_form(const SumForm& s) {
  return to_text([&](std::ostream& os) {
    print_decls(os, "array", s.arrays);
    print_decls(os, "int", s.ints);
    print_interps(os, s.interps);
    print_sum(os, s.sum);
    print_psi(os, s.psi);
  });
}

std::string print_guarded_sum(const GuardedSum& g) {
  return to_text([&](std::ostream& os) {
    print_decls(os, "array", g.arrays);
    print_decls(os, "int", g.ints);
    print_sum(os, g.sum);
    print_psi(os, g.psi);
  });
}

std::string print_lia_card(const LiaCardProblem& p) {
  return to_text([&](std::ostream& os) {
    os << "(f0 ";
    print_qfpa_to(os, p.f0);
    os << ")\n";
    for (const auto& s : p.stars) {
      os << "(star ";
      print_names(os, "u", s.u);
      os << ' ';
      print_names(os, "vars", s.body_vars);
      os << " (exponent " << s.exponent.name() << ") ";
      print_qfpa_to(os, s.body);
      os << ")\n";
    }
  });
}

std::string print_model(const Model& m) {
  return to_text([&](std::ostream& os) {
    os << "(model";
    for (const auto& [a, v] : std::map<Symbol, IntVec, ByName>(m.arrays.begin(), m.arrays.end())) {
      os << "\n  (array " << a.name() << " (";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i].str();
      os << "))";
    }
    for (const auto& [x, v] : std::map<Symbol, Int, ByName>(m.ints.begin(), m.ints.end()))
      os << "\n  (int " << x.name() << ' ' << v.str() << ')';
    for (const auto& [s, v] : std::map<Symbol, SetValue, ByName>(m.sets.begin(), m.sets.end())) {
      os << "\n  (set " << s.name() << (v.cofinite ? " (cofinite" : " (finite");
      for (std::size_t i : v.elements) os << ' ' << i;
      os << "))";
    }
    os << ")\n";
  });
}

}  // namespace powsum
