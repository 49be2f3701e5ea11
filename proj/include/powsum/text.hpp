#pragma once

#include "powsum/formula.hpp"
#include "powsum/pipeline.hpp"
#include "powsum/sexpr.hpp"

#include <string>
#include <string_view>

namespace powsum {

/// Parses a problem document. Throws SyntaxError or DuplicateDeclarationError.
FragmentProblem parse_problem(std::string_view text);

/// Canonical text: declarations, interpretations, the sum, then the BAPA part.
std::string print_problem(const FragmentProblem& p);

/// A single QF formula; identifiers are taken as integer variables.
QfpaFormula parse_qfpa(std::string_view text);
QfpaFormula parse_qfpa(const SExpr& e);

std::string print_term(const LinTerm& t);
std::string print_atom(const QfpaAtom& a);
std::string print_qfpa(const QfpaFormula& f);
std::string print_set_term(const SetTerm& t);
std::string print_bapa(const BapaFormula& f);

std::string print_sum_form(const SumForm& s);
std::string print_guarded_sum(const GuardedSum& g);
std::string print_lia_card(const LiaCardProblem& p);

/// Arrays, ints and sets in name order.
std::string print_model(const Model& m);

}  // namespace powsum
