#pragma once

#include "powsum/int.hpp"
#include "powsum/symbol.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace powsum {

/// Linear term `constant + sum(coef * var)` in canonical form: coefficients
/// sorted by symbol, never zero. Structural equality is semantic equality.
class LinTerm {
 public:
  using Coefficients = std::vector<std::pair<Symbol, Int>>;

  LinTerm() = default;
  explicit LinTerm(Int constant) : constant_(std::move(constant)) {}
  static LinTerm variable(Symbol v, Int coef = 1);

  const Int& constant() const { return constant_; }
  const Coefficients& coefficients() const { return coeffs_; }
  Int coefficient(Symbol v) const;
  bool is_constant() const { return coeffs_.empty(); }

  LinTerm& operator+=(const LinTerm& other);
  LinTerm& operator-=(const LinTerm& other);
  LinTerm& operator*=(const Int& factor);
  friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
  friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
  friend LinTerm operator*(const Int& k, LinTerm a) { return a *= k; }
  friend LinTerm operator+(LinTerm a, const Int& c) { return a += LinTerm(c); }
  friend LinTerm operator-(LinTerm a, const Int& c) { return a -= LinTerm(c); }

  /// `lookup(Symbol) -> const Int&`.
  template <class Lookup>
  Int evaluate(Lookup&& lookup) const {
    Int v = constant_;
    for (const auto& [s, c] : coeffs_) v += c * lookup(s);
    return v;
  }

  LinTerm substitute(Symbol v, const LinTerm& replacement) const;
  LinTerm rename(const std::map<Symbol, Symbol>& renaming) const;

  friend bool operator==(const LinTerm&, const LinTerm&) = default;

 private:
  Int constant_ = 0;
  Coefficients coeffs_;
};

enum class AtomKind { Eq, Neq, Le, Lt, Ge, Gt, Mod };

/// `lhs op rhs`; for Mod, `lhs ≡ rhs (mod modulus)` with modulus ≥ 2.
struct QfpaAtom {
  AtomKind kind = AtomKind::Eq;
  LinTerm lhs;
  LinTerm rhs;
  Int modulus = 0;

  static QfpaAtom make(AtomKind kind, LinTerm lhs, LinTerm rhs);
  static QfpaAtom mod(LinTerm lhs, LinTerm rhs, Int modulus);

  friend bool operator==(const QfpaAtom&, const QfpaAtom&) = default;
};

/// Immutable quantifier-free Presburger formula (atoms, not, and, or).
/// `and` with no children is true, `or` with no children is false.
class QfpaFormula {
 public:
  enum class Kind { Atom, Not, And, Or };

  QfpaFormula();  // true
  static QfpaFormula atom(QfpaAtom a);
  static QfpaFormula negation(QfpaFormula f);
  static QfpaFormula conjunction(std::vector<QfpaFormula> fs);
  static QfpaFormula disjunction(std::vector<QfpaFormula> fs);
  static QfpaFormula truth() { return conjunction({}); }
  static QfpaFormula falsity() { return disjunction({}); }

  Kind kind() const;
  const QfpaAtom& atom() const;
  const std::vector<QfpaFormula>& children() const;
  bool is_truth() const { return kind() == Kind::And && children().empty(); }

  void collect_variables(std::set<Symbol>& out) const;
  std::set<Symbol> variables() const;
  QfpaFormula rename(const std::map<Symbol, Symbol>& renaming) const;

  friend bool operator==(const QfpaFormula& a, const QfpaFormula& b);

 private:
  struct Node;
  explicit QfpaFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct QfpaFormula::Node {
  Kind kind;
  QfpaAtom atom;
  std::vector<QfpaFormula> children;
};

/// Boolean-algebra expression over index sets.
class SetTerm {
 public:
  enum class Kind { Var, Union, Inter, Compl, Empty, Full };

  static SetTerm var(Symbol s);
  static SetTerm set_union(SetTerm a, SetTerm b);
  static SetTerm intersection(SetTerm a, SetTerm b);
  static SetTerm complement(SetTerm a);
  static SetTerm empty();
  static SetTerm full();

  Kind kind() const;
  Symbol symbol() const;
  const std::vector<SetTerm>& children() const;

  void collect_sets(std::set<Symbol>& out) const;

  friend bool operator==(const SetTerm& a, const SetTerm& b);

 private:
  struct Node;
  explicit SetTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct SetTerm::Node {
  Kind kind;
  Symbol symbol;
  std::vector<SetTerm> children;
};

/// Comparison used by cardinality atoms. Only Eq and Le pass validation.
enum class CardOp { Eq, Le, Lt, Ge, Gt };

/// Formula of the Boolean algebra of sets with cardinalities and integer
/// arithmetic. `Not` is representable over any subtree so that validation can
/// report misuse; validated problems only negate Qfpa subtrees.
/// Connectives whose children are all Qfpa nodes collapse into one Qfpa node.
class BapaFormula {
 public:
  enum class Kind { Subset, SetEq, Card, Qfpa, And, Or, Not };

  BapaFormula();  // true
  static BapaFormula subset(SetTerm a, SetTerm b);
  static BapaFormula set_eq(SetTerm a, SetTerm b);
  static BapaFormula card(SetTerm s, CardOp op, LinTerm t);
  static BapaFormula qfpa(QfpaFormula f);
  static BapaFormula conjunction(std::vector<BapaFormula> fs);
  static BapaFormula disjunction(std::vector<BapaFormula> fs);
  static BapaFormula negation(BapaFormula f);

  Kind kind() const;
  const SetTerm& left() const;   // Subset, SetEq, Card
  const SetTerm& right() const;  // Subset, SetEq
  CardOp card_op() const;
  const LinTerm& bound() const;  // Card
  const QfpaFormula& qfpa_formula() const;
  const std::vector<BapaFormula>& children() const;
  bool is_truth() const { return kind() == Kind::And && children().empty(); }

  friend bool operator==(const BapaFormula& a, const BapaFormula& b);

 private:
  struct Node;
  explicit BapaFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct BapaFormula::Node {
  Kind kind;
  std::vector<SetTerm> sets;
  CardOp op = CardOp::Eq;
  LinTerm bound;
  QfpaFormula qfpa;
  std::vector<BapaFormula> children;
};

/// `S = {n | guard(c̄(n))}`. A missing set variable means the universal
/// constraint `I = {n | guard}`; such interpretations only occur in
/// intermediate pipeline stages.
struct SetInterpretation {
  std::optional<Symbol> set_var;
  QfpaFormula guard;

  bool universal() const { return !set_var.has_value(); }
  friend bool operator==(const SetInterpretation&, const SetInterpretation&) = default;
};

struct SumTarget {
  Symbol sum_var;
  Symbol array;
  friend bool operator==(const SumTarget&, const SumTarget&) = default;
};

/// `(σ_1..σ_k) = Σ {(c_1(n)..c_k(n)) : guard(c̄(n))}`.
struct SumSpec {
  std::vector<SumTarget> targets;
  QfpaFormula guard;
  friend bool operator==(const SumSpec&, const SumSpec&) = default;
};

struct FragmentProblem {
  std::vector<Symbol> arrays;
  std::vector<Symbol> sets;
  std::vector<Symbol> ints;
  BapaFormula bapa;
  std::vector<SetInterpretation> interps;
  std::optional<SumSpec> sum;

  friend bool operator==(const FragmentProblem&, const FragmentProblem&) = default;
};

/// Finite set of indices, or the complement of a finite set.
struct SetValue {
  bool cofinite = false;
  std::vector<std::size_t> elements;  // members, or exceptions when cofinite
  friend bool operator==(const SetValue&, const SetValue&) = default;
};

/// Finite-support valuation: arrays are zero beyond their stored prefix.
struct Model {
  std::map<Symbol, IntVec> arrays;
  std::map<Symbol, Int> ints;
  std::map<Symbol, SetValue> sets;  // derived; display only
};

using Assignment = std::map<Symbol, Int>;

}  // namespace powsum
