// Terms and formulas of many-sorted first-order logic: construction helpers,
// free variables, capture-avoiding substitution, well-sortedness diagnostics,
// and canonical printing.
#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "fragcalc/signature.hpp"

namespace fragcalc {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Const, Apply };

  Kind kind;
  std::string name;  // variable name, constant name, or function symbol
  std::string sort;  // variables only; empty until the parser infers it
  std::vector<TermPtr> args;  // Apply only
};

TermPtr var(std::string name, std::string sort);
TermPtr constant(std::string name);
TermPtr apply(std::string fn, std::vector<TermPtr> args);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Top, Bot, Eq, Rel, Not, And, Or, Forall, Exists };

  Kind kind;
  std::string name;           // Rel: relation symbol; Forall/Exists: bound variable
  std::string sort;           // Forall/Exists: sort of the bound variable
  std::vector<TermPtr> args;  // Eq: {lhs, rhs}; Rel: relation arguments
  FormulaPtr left;            // Not/Forall/Exists: operand or body; And/Or: left
  FormulaPtr right;           // And/Or: right
};

FormulaPtr top();
FormulaPtr bot();
FormulaPtr eq(TermPtr lhs, TermPtr rhs);
FormulaPtr rel(std::string name, std::vector<TermPtr> args);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr l, FormulaPtr r);
FormulaPtr disj(FormulaPtr l, FormulaPtr r);
FormulaPtr forall(std::string v, std::string sort, FormulaPtr body);
FormulaPtr exists(std::string v, std::string sort, FormulaPtr body);

/// Left-associated conjunction; the empty conjunction is `top()` and a
/// singleton is the formula itself.
FormulaPtr conjAll(const std::vector<FormulaPtr>& fs);
/// Left-associated disjunction; the empty disjunction is `bot()`.
FormulaPtr disjAll(const std::vector<FormulaPtr>& fs);

/// A typed variable occurrence.
struct TypedVar {
  std::string name;
  std::string sort;

  friend bool operator==(const TypedVar&, const TypedVar&) = default;
  friend auto operator<=>(const TypedVar&, const TypedVar&) = default;
};

/// Free variables in first-occurrence order (left-to-right, outside-in).
using VariableSet = std::vector<TypedVar>;

VariableSet freeVariables(const FormulaPtr& f);
std::set<std::string> freeVariableNames(const FormulaPtr& f);

/// Every variable name occurring in the formula, free or bound, binders
/// included. Used when picking fresh names.
std::set<std::string> allNames(const FormulaPtr& f);
void collectNames(const TermPtr& t, std::set<std::string>& out);

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Number of AST nodes: formula nodes plus term nodes.
std::size_t astSize(const FormulaPtr& f);
std::size_t astSize(const TermPtr& t);

bool isQuantifierFree(const FormulaPtr& f);

/// Smallest unused name in the reserved fresh-variable namespace `_1, _2, ...`.
std::string freshName(const std::set<std::string>& used);
/// `preferred` if unused, otherwise a reserved fresh name.
std::string nameAvoiding(const std::string& preferred, const std::set<std::string>& used);

/// Renames free occurrences of variables; keys are variable names, values the
/// replacement names. Replacements keep the sort of the occurrence they
/// replace; binders are renamed where needed to avoid capture.
FormulaPtr substituteVars(const FormulaPtr& f, const std::map<std::string, std::string>& renaming);

/// Single-variable renaming with a sort check: throws FragcalcError when `to`
/// already occurs free in `f` with a sort different from `from`'s.
FormulaPtr substituteVar(const FormulaPtr& f, const std::string& from, const std::string& to);

/// Capture-avoiding substitution of terms for free variables.
FormulaPtr substituteTerms(const FormulaPtr& f, const std::map<std::string, TermPtr>& subst);

/// Capture-avoiding replacement of constant symbols by terms.
FormulaPtr substituteConstants(const FormulaPtr& f, const std::map<std::string, TermPtr>& subst);

/// A well-sortedness problem, located by a path of child indices from the
/// root (e.g. "/0/1"); atom arguments extend the path into the term tree.
struct Diagnostic {
  std::string path;
  std::string message;
};

/// Checks symbols, arities, argument sorts, equality sorts, binder sorts and
/// variable-sort consistency against a language. Returns every problem found;
/// an empty result means the formula is well-sorted. Never throws.
std::vector<Diagnostic> wellSorted(const Language& lang, const FormulaPtr& f);
bool isWellSorted(const Language& lang, const FormulaPtr& f);

std::string to_text(const TermPtr& t);
std::string to_text(const FormulaPtr& f);
std::ostream& operator<<(std::ostream& os, const TermPtr& t);
std::ostream& operator<<(std::ostream& os, const FormulaPtr& f);

}  // namespace fragcalc
