// Parsing of the textual formula syntax.
//
// Formulas are s-expressions: `true`, `false`, `(= t u)`, `(R t ...)`,
// `(not f)`, `(and f g ...)`, `(or f g ...)`, `(implies f g)`, `(iff f g)`,
// `(forall (x SORT) f)`, `(exists (x SORT) f)`. Conjunction and disjunction
// accept two or more operands and associate to the left; `implies` and `iff`
// are desugared at parse time. Binders carry explicit sorts; sorts of free
// variables are inferred from how they are used (with the language's sort as
// default when it has only one), and a variable name must be used at a single
// sort throughout a formula. Tokens of the form `{...}` are rational-function
// literal constants.
#pragma once

#include <string>

#include "fragcalc/formula.hpp"
#include "fragcalc/signature.hpp"

namespace fragcalc {

/// Parses a formula; throws FragcalcError with a position on syntax errors,
/// unresolvable variable sorts, or conflicting sorts for one variable name.
FormulaPtr parseFormula(const Language& lang, const std::string& text);

/// Parses a term under the same conventions.
TermPtr parseTerm(const Language& lang, const std::string& text);

}  // namespace fragcalc
