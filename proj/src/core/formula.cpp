#include "powsum/formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace powsum {

// ---------------------------------------------------------------- LinTerm

LinTerm LinTerm::variable(Symbol v, Int coef) {
  LinTerm t;
  if (coef != 0) t.coeffs_.emplace_back(v, std::move(coef));
  return t;
}

Int LinTerm::coefficient(Symbol v) const {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), v,
                             [](const auto& p, Symbol s) { return p.first < s; });
  if (it != coeffs_.end() && it->first == v) return it->second;
  return 0;
}

namespace {

LinTerm::Coefficients merge(const LinTerm::Coefficients& a, const LinTerm::Coefficients& b, int sign) {
  LinTerm::Coefficients out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign * b[j].second);
      ++j;
    } else {
      Int c = a[i].second + sign * b[j].second;
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LinTerm& LinTerm::operator+=(const LinTerm& other) {
  constant_ += other.constant_;
  coeffs_ = merge(coeffs_, other.coeffs_, 1);
  return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& other) {
  constant_ -= other.constant_;
  coeffs_ = merge(coeffs_, other.coeffs_, -1);
  return *this;
}

LinTerm& LinTerm::operator*=(const Int& factor) {
  if (factor == 0) {
    constant_ = 0;
    coeffs_.clear();
    return *this;
  }
  constant_ *= factor;
  for (auto& [s, c] : coeffs_) c *= factor;
  return *this;
}

LinTerm LinTerm::substitute(Symbol v, const LinTerm& replacement) const {
  Int c = coefficient(v);
  if (c == 0) return *this;
  LinTerm out = *this - LinTerm::variable(v, c);
  out += c * replacement;
  return out;
}

LinTerm LinTerm::rename(const std::map<Symbol, Symbol>& renaming) const {
  LinTerm out(constant_);
  for (const auto& [s, c] : coeffs_) {
    auto it = renaming.find(s);
    out += LinTerm::variable(it == renaming.end() ? s : it->second, c);
  }
  return out;
}

// ---------------------------------------------------------------- atoms

QfpaAtom QfpaAtom::make(AtomKind kind, LinTerm lhs, LinTerm rhs) {
  if (kind == AtomKind::Mod) throw std::invalid_argument("use QfpaAtom::mod for congruences");
  return QfpaAtom{kind, std::move(lhs), std::move(rhs), 0};
}

QfpaAtom QfpaAtom::mod(LinTerm lhs, LinTerm rhs, Int modulus) {
  if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
  return QfpaAtom{AtomKind::Mod, std::move(lhs), std::move(rhs), std::move(modulus)};
}

// ---------------------------------------------------------------- QfpaFormula

QfpaFormula::QfpaFormula() : node_(std::make_shared<const Node>(Node{Kind::And, {}, {}})) {}

QfpaFormula QfpaFormula::atom(QfpaAtom a) {
  return QfpaFormula(std::make_shared<const Node>(Node{Kind::Atom, std::move(a), {}}));
}

QfpaFormula QfpaFormula::negation(QfpaFormula f) {
  return QfpaFormula(std::make_shared<const Node>(Node{Kind::Not, {}, {std::move(f)}}));
}

QfpaFormula QfpaFormula::conjunction(std::vector<QfpaFormula> fs) {
  return QfpaFormula(std::make_shared<const Node>(Node{Kind::And, {}, std::move(fs)}));
}

QfpaFormula QfpaFormula::disjunction(std::vector<QfpaFormula> fs) {
  return QfpaFormula(std::make_shared<const Node>(Node{Kind::Or, {}, std::move(fs)}));
}

QfpaFormula::Kind QfpaFormula::kind() const { return node_->kind; }
const QfpaAtom& QfpaFormula::atom() const { return node_->atom; }
const std::vector<QfpaFormula>& QfpaFormula::children() const { return node_->children; }

void QfpaFormula::collect_variables(std::set<Symbol>& out) const {
  if (kind() == Kind::Atom) {
    for (const auto& [s, c] : atom().lhs.coefficients()) out.insert(s);
    for (const auto& [s, c] : atom().rhs.coefficients()) out.insert(s);
    return;
  }
  for (const auto& c : children()) c.collect_variables(out);
}

std::set<Symbol> QfpaFormula::variables() const {
  std::set<Symbol> out;
  collect_variables(out);
  return out;
}

QfpaFormula QfpaFormula::rename(const std::map<Symbol, Symbol>& renaming) const {
  switch (kind()) {
    case Kind::Atom: {
      QfpaAtom a = atom();
      a.lhs = a.lhs.rename(renaming);
      a.rhs = a.rhs.rename(renaming);
      return QfpaFormula::atom(std::move(a));
    }
    case Kind::Not:
      return negation(children()[0].rename(renaming));
    case Kind::And:
    case Kind::Or: {
      std::vector<QfpaFormula> cs;
      cs.reserve(children().size());
      for (const auto& c : children()) cs.push_back(c.rename(renaming));
      return kind() == Kind::And ? conjunction(std::move(cs)) : disjunction(std::move(cs));
    }
  }
  return *this;
}

bool operator==(const QfpaFormula& a, const QfpaFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == QfpaFormula::Kind::Atom) return a.atom() == b.atom();
  return a.children() == b.children();
}

// ---------------------------------------------------------------- SetTerm

SetTerm SetTerm::var(Symbol s) { return SetTerm(std::make_shared<const Node>(Node{Kind::Var, s, {}})); }
SetTerm SetTerm::set_union(SetTerm a, SetTerm b) {
  return SetTerm(std::make_shared<const Node>(Node{Kind::Union, {}, {std::move(a), std::move(b)}}));
}
SetTerm SetTerm::intersection(SetTerm a, SetTerm b) {
  return SetTerm(std::make_shared<const Node>(Node{Kind::Inter, {}, {std::move(a), std::move(b)}}));
}
SetTerm SetTerm::complement(SetTerm a) {
  return SetTerm(std::make_shared<const Node>(Node{Kind::Compl, {}, {std::move(a)}}));
}
SetTerm SetTerm::empty() { return SetTerm(std::make_shared<const Node>(Node{Kind::Empty, {}, {}})); }
SetTerm SetTerm::full() { return SetTerm(std::make_shared<const Node>(Node{Kind::Full, {}, {}})); }

SetTerm::Kind SetTerm::kind() const { return node_->kind; }
Symbol SetTerm::symbol() const { return node_->symbol; }
const std::vector<SetTerm>& SetTerm::children() const { return node_->children; }

void SetTerm::collect_sets(std::set<Symbol>& out) const {
  if (kind() == Kind::Var) out.insert(symbol());
  for (const auto& c : children()) c.collect_sets(out);
}

bool operator==(const SetTerm& a, const SetTerm& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.symbol() == b.symbol() && a.children() == b.children();
}

// ---------------------------------------------------------------- BapaFormula

BapaFormula::BapaFormula() : node_(std::make_shared<const Node>(Node{Kind::And, {}, CardOp::Eq, {}, {}, {}})) {}

BapaFormula BapaFormula::subset(SetTerm a, SetTerm b) {
  return BapaFormula(std::make_shared<const Node>(Node{Kind::Subset, {std::move(a), std::move(b)}, CardOp::Eq, {}, {}, {}}));
}
BapaFormula BapaFormula::set_eq(SetTerm a, SetTerm b) {
  return BapaFormula(std::make_shared<const Node>(Node{Kind::SetEq, {std::move(a), std::move(b)}, CardOp::Eq, {}, {}, {}}));
}
BapaFormula BapaFormula::card(SetTerm s, CardOp op, LinTerm t) {
  return BapaFormula(std::make_shared<const Node>(Node{Kind::Card, {std::move(s)}, op, std::move(t), {}, {}}));
}
BapaFormula BapaFormula::qfpa(QfpaFormula f) {
  return BapaFormula(std::make_shared<const Node>(Node{Kind::Qfpa, {}, CardOp::Eq, {}, std::move(f), {}}));
}
namespace {

// Connectives over pure arithmetic stay a single Qfpa node, so every tree
// has one canonical shape.
std::optional<std::vector<QfpaFormula>> arithmetic_children(const std::vector<BapaFormula>& fs) {
  if (fs.empty()) return std::nullopt;
  std::vector<QfpaFormula> out;
  for (const auto& f : fs) {
    if (f.kind() != BapaFormula::Kind::Qfpa) return std::nullopt;
    out.push_back(f.qfpa_formula());
  }
  return out;
}

}  // namespace

BapaFormula BapaFormula::conjunction(std::vector<BapaFormula> fs) {
  if (auto qs = arithmetic_children(fs)) return qfpa(QfpaFormula::conjunction(std::move(*qs)));
  return BapaFormula(std::make_shared<const Node>(Node{Kind::And, {}, CardOp::Eq, {}, {}, std::move(fs)}));
}
BapaFormula BapaFormula::disjunction(std::vector<BapaFormula> fs) {
  if (auto qs = arithmetic_children(fs)) return qfpa(QfpaFormula::disjunction(std::move(*qs)));
  return BapaFormula(std::make_shared<const Node>(Node{Kind::Or, {}, CardOp::Eq, {}, {}, std::move(fs)}));
}
BapaFormula BapaFormula::negation(BapaFormula f) {
  if (f.kind() == Kind::Qfpa) return qfpa(QfpaFormula::negation(f.qfpa_formula()));
  return BapaFormula(std::make_shared<const Node>(Node{Kind::Not, {}, CardOp::Eq, {}, {}, {std::move(f)}}));
}

BapaFormula::Kind BapaFormula::kind() const { return node_->kind; }
const SetTerm& BapaFormula::left() const { return node_->sets.at(0); }
const SetTerm& BapaFormula::right() const { return node_->sets.at(1); }
CardOp BapaFormula::card_op() const { return node_->op; }
const LinTerm& BapaFormula::bound() const { return node_->bound; }
const QfpaFormula& BapaFormula::qfpa_formula() const { return node_->qfpa; }
const std::vector<BapaFormula>& BapaFormula::children() const { return node_->children; }

bool operator==(const BapaFormula& a, const BapaFormula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.sets == y.sets && x.op == y.op && x.bound == y.bound && x.qfpa == y.qfpa &&
         x.children == y.children;
}

}  // namespace powsum
