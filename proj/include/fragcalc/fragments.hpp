// Quantifier-prefix fragment descriptors, fragment membership, prenexing
// relative to a fragment, and relativization of quantifiers.
//
// A descriptor is a list of quantifier blocks, outermost first, over a
// quantifier-free base. Writing F for the fragment described by the remaining
// blocks, a block confined to quantifier kind Q with bound n describes:
//
//   PrefixOnly(n)  prefixes of at most n Q-quantifiers over F ("Qn[F]");
//                  the result is not closed under the connectives,
//   Closed(n)      the closure of Qn[F] under conjunction, disjunction and
//                  variable substitution, with top/bottom adjoined ("Qn F"),
//   Nested(n)      n-fold iteration of the closed single-quantifier step:
//                  Q^1 F = Q1 F and Q^{k+1} F = Q1 (Q^k F) ("Q^n F"),
//   Unbounded      the union of Q^n F over all n ("Q F").
//
// Note that Closed(n) reads "Qn F" as the closure of length-<=n prefixes over
// F; for n = 1 this coincides with Nested(1). A block may restrict the sort
// of the quantified variables; the restriction text "k" also matches the
// valued-field residue sort.
//
// Descriptor text: `F0` is the quantifier-free base; a block is `A` or `E`,
// optionally followed by a bound (`A2`), a nesting depth (`A^2`), and a sort
// restriction (`A@k`). `A1[...]` is a PrefixOnly block over the bracketed
// descriptor; `A2 ...` (with a bound) is Closed; `A^2 ...` is Nested; a bare
// `A ...` is Unbounded. A trailing `F0` may be omitted: `E` is `E F0`.
#pragma once

#include <string>
#include <vector>

#include "fragcalc/formula.hpp"
#include "fragcalc/signature.hpp"

namespace fragcalc {

enum class QuantKind { Forall, Exists };

enum class BlockMode { PrefixOnly, Closed, Nested, Unbounded };

struct QuantifierBlock {
  QuantKind kind = QuantKind::Forall;
  BlockMode mode = BlockMode::Unbounded;
  int bound = 0;                // >= 1 for PrefixOnly/Closed/Nested
  std::string sortRestriction;  // empty: quantifiers over any sort

  friend bool operator==(const QuantifierBlock&, const QuantifierBlock&) = default;
};

struct FragmentDescriptor {
  std::vector<QuantifierBlock> blocks;  // outermost block first; empty = F0

  static FragmentDescriptor parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const FragmentDescriptor&, const FragmentDescriptor&) = default;
};

QuantifierBlock block(QuantKind kind, BlockMode mode, int bound = 0,
                      std::string sortRestriction = "");

/// Descriptor with one more (outermost) block in front.
FragmentDescriptor prepend(QuantifierBlock b, FragmentDescriptor inner);

/// Decides membership of a formula in the described fragment. Purely
/// structural; the language parameter is kept for interface symmetry with the
/// rest of the toolkit and future sort-dependent extensions.
bool memFragment(const FragmentDescriptor& desc, const Language& lang, const FormulaPtr& f);

/// Membership in the boolean closure of the described fragment (the smallest
/// extension of it closed under negation).
bool memBooleanClosure(const FragmentDescriptor& desc, const Language& lang, const FormulaPtr& f);

struct PrenexResult {
  FormulaPtr formula;
  /// Length of the produced quantifier prefix; the remainder under it lies in
  /// the boolean closure of the reference fragment.
  int prefixLength = 0;
};

/// Prenexes a formula relative to a fragment F: subformulas already in the
/// boolean closure F' of F are left untouched, and quantifiers above them are
/// pulled into a prefix. Negation flips the minimal prefix of its operand;
/// binary connectives concatenate the two minimal prefixes (left first),
/// renaming bound variables as needed to avoid capture. The result is
/// logically equivalent to the input over every structure.
PrenexResult prenex(const FragmentDescriptor& refFragment, const Language& lang,
                    const FormulaPtr& phi);

struct PrefixEntry {
  QuantKind kind;
  std::string name;
  std::string sort;
};

/// Splits the shortest leading quantifier prefix after which the remainder is
/// in the boolean closure of the fragment. Inverse of `joinPrefix`.
std::pair<std::vector<PrefixEntry>, FormulaPtr> splitMinimalPrefix(
    const FragmentDescriptor& refFragment, const Language& lang, const FormulaPtr& f);

FormulaPtr joinPrefix(const std::vector<PrefixEntry>& prefix, FormulaPtr matrix);

/// Relativizes quantifiers over the sort of eta's unique free variable to the
/// set eta defines: existential bodies gain the guard conjunctively, and
/// universal bodies gain the prenexed negation of eta disjunctively.
/// Throws unless eta has exactly one free variable.
FormulaPtr relativize(const Language& lang, const FormulaPtr& phi, const FormulaPtr& eta);

}  // namespace fragcalc
