#include "powsum/validate.hpp"

#include <map>

namespace powsum {

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::UndecidableSharing: return "UndecidableSharing";
    case ViolationKind::NegativeCardinality: return "NegativeCardinality";
    case ViolationKind::UndeclaredSymbol: return "UndeclaredSymbol";
    case ViolationKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ViolationKind::SortMismatch: return "SortMismatch";
    case ViolationKind::MissingInterpretation: return "MissingInterpretation";
    case ViolationKind::DuplicateInterpretation: return "DuplicateInterpretation";
    case ViolationKind::UniversalInterpretation: return "UniversalInterpretation";
    case ViolationKind::DuplicateTarget: return "DuplicateTarget";
    case ViolationKind::ReservedName: return "ReservedName";
  }
  return "?";
}

namespace {

enum class Sort { Array, Set, Int };

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Array: return "array";
    case Sort::Set: return "set";
    case Sort::Int: return "int";
  }
  return "?";
}

class Validator {
 public:
  explicit Validator(const FragmentProblem& p) : p_(p) {}

  std::vector<Violation> run() {
    declare(p_.arrays, Sort::Array);
    declare(p_.sets, Sort::Set);
    declare(p_.ints, Sort::Int);

    std::map<Symbol, int> interp_count;
    for (const auto& in : p_.interps) {
      if (in.universal()) {
        report(ViolationKind::UniversalInterpretation, "universal interpretations are not part of the input language");
      } else if (expect(*in.set_var, Sort::Set, "interpretation target")) {
        ++interp_count[*in.set_var];
      }
      check_guard(in.guard, "interpretation guard");
    }
    for (Symbol s : p_.sets) {
      auto n = interp_count[s];
      if (n == 0) report(ViolationKind::MissingInterpretation, "set '" + s.name() + "' has no interpretation");
      if (n > 1) report(ViolationKind::DuplicateInterpretation, "set '" + s.name() + "' is interpreted more than once");
    }

    if (p_.sum) {
      std::map<Symbol, int> arrays, vars;
      for (const auto& t : p_.sum->targets) {
        expect(t.sum_var, Sort::Int, "sum variable");
        expect(t.array, Sort::Array, "summed array");
        if (++arrays[t.array] == 2)
          report(ViolationKind::DuplicateTarget, "array '" + t.array.name() + "' is summed twice");
        if (++vars[t.sum_var] == 2)
          report(ViolationKind::DuplicateTarget, "sum variable '" + t.sum_var.name() + "' is bound twice");
      }
      check_guard(p_.sum->guard, "sum guard");
    }

    check_bapa(p_.bapa, true);
    return std::move(out_);
  }

 private:
  void report(ViolationKind k, std::string msg) { out_.push_back({k, std::move(msg)}); }

  void declare(const std::vector<Symbol>& syms, Sort s) {
    for (Symbol x : syms) {
      if (!x.name().empty() && x.name()[0] == '#')
        report(ViolationKind::ReservedName, "'" + x.name() + "' uses the reserved '#' prefix");
      auto [it, fresh] = sorts_.emplace(x, s);
      if (!fresh) report(ViolationKind::DuplicateDeclaration, "'" + x.name() + "' is declared more than once");
    }
  }

  bool expect(Symbol x, Sort want, const char* role) {
    auto it = sorts_.find(x);
    if (it == sorts_.end()) {
      report(ViolationKind::UndeclaredSymbol, std::string(role) + " '" + x.name() + "' is not declared");
      return false;
    }
    if (it->second != want) {
      report(ViolationKind::SortMismatch, std::string(role) + " '" + x.name() + "' is a " + sort_name(it->second) +
                                              ", expected " + sort_name(want));
      return false;
    }
    return true;
  }

  void check_guard(const QfpaFormula& g, const char* where) {
    for (Symbol x : g.variables()) {
      auto it = sorts_.find(x);
      if (it == sorts_.end()) {
        report(ViolationKind::UndeclaredSymbol, std::string(where) + " mentions undeclared '" + x.name() + "'");
      } else if (it->second == Sort::Int) {
        report(ViolationKind::UndecidableSharing,
               std::string(where) + " mentions integer variable '" + x.name() + "'; shared variables make the fragment undecidable");
      } else if (it->second == Sort::Set) {
        report(ViolationKind::SortMismatch, std::string(where) + " uses set '" + x.name() + "' as a number");
      }
    }
  }

  void check_int_formula(const QfpaFormula& f) {
    for (Symbol x : f.variables()) check_int_var(x);
  }

  void check_int_term(const LinTerm& t) {
    for (const auto& [x, c] : t.coefficients()) check_int_var(x);
  }

  void check_int_var(Symbol x) {
    auto it = sorts_.find(x);
    if (it == sorts_.end()) {
      report(ViolationKind::UndeclaredSymbol, "'" + x.name() + "' is not declared");
    } else if (it->second != Sort::Int) {
      report(ViolationKind::SortMismatch, std::string(sort_name(it->second)) + " '" + x.name() +
                                              "' used in integer arithmetic outside a guard");
    }
  }

  void check_set_term(const SetTerm& t) {
    std::set<Symbol> used;
    t.collect_sets(used);
    for (Symbol s : used) expect(s, Sort::Set, "set term");
  }

  void check_bapa(const BapaFormula& f, bool positive) {
    using K = BapaFormula::Kind;
    switch (f.kind()) {
      case K::Subset:
      case K::SetEq:
        if (!positive) report(ViolationKind::NegativeCardinality, "set comparison under negation");
        check_set_term(f.left());
        check_set_term(f.right());
        return;
      case K::Card:
        if (!positive) report(ViolationKind::NegativeCardinality, "cardinality atom under negation");
        if (f.card_op() != CardOp::Eq && f.card_op() != CardOp::Le)
          report(ViolationKind::NegativeCardinality, "cardinality atoms are restricted to card= and card<=");
        check_set_term(f.left());
        check_int_term(f.bound());
        return;
      case K::Qfpa:
        check_int_formula(f.qfpa_formula());
        return;
      case K::And:
      case K::Or:
        for (const auto& c : f.children()) check_bapa(c, positive);
        return;
      case K::Not:
        check_bapa(f.children()[0], !positive);
        return;
    }
  }

  const FragmentProblem& p_;
  std::map<Symbol, Sort> sorts_;
  std::vector<Violation> out_;
};

}  // namespace

ValidationResult validate_fragment(const FragmentProblem& p) {
  ValidationResult r;
  r.violations = Validator(p).run();
  if (r.violations.empty()) r.problem = ValidatedProblem(p);
  return r;
}

}  // namespace powsum
