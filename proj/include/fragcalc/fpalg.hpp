// Exact arithmetic in the rational function fields F_p(s): canonical
// fractions, p-th root decomposition, enumeration by height, and bounded
// witness search for existential sentences.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fragcalc/formula.hpp"
#include "fragcalc/signature.hpp"

namespace fragcalc {

/// A polynomial over F_p: little-endian coefficients in [0, p), no trailing
/// zeros; the zero polynomial is the empty vector.
using Poly = std::vector<unsigned>;

/// A rational function over F_p in canonical form: the denominator is monic,
/// numerator and denominator are coprime, and zero is {} / {1}.
struct RatFunc {
  unsigned p = 2;
  Poly num;
  Poly den;

  static RatFunc zero(unsigned p);
  static RatFunc one(unsigned p);
  /// The distinguished generator s of F_p(s).
  static RatFunc s(unsigned p);
  /// Canonicalizes an arbitrary fraction; throws on a zero denominator or a
  /// non-prime p. Coefficients are reduced modulo p.
  static RatFunc make(unsigned p, Poly num, Poly den);

  /// Parses the literal form `{[c0,c1,...]/[d0,...]@p}` (canonicalizing).
  static RatFunc parse(const std::string& literal);
  /// The canonical literal form; the zero polynomial prints as [0].
  std::string to_string() const;

  bool isZero() const { return num.empty(); }
  /// max(deg num, deg den), counting constants (and zero) as degree 0.
  unsigned height() const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  /// Throws FragcalcError on division by zero.
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc& a, const RatFunc& b) = default;
};

RatFunc pow(const RatFunc& base, unsigned exp);

/// The unique tuple (l_0, ..., l_{p-1}) with f = sum_j l_j^p s^j; in
/// characteristic p every rational function decomposes this way because
/// 1, s, ..., s^{p-1} is a basis of F_p(s) over its subfield of p-th powers.
std::vector<RatFunc> pthRootDecompose(const RatFunc& f);

/// True when f is a p-th power, i.e. all decomposition components above the
/// constant one vanish.
bool isPthPower(const RatFunc& f);

/// The length-r tuple determined by iterating the two-component step of the
/// decomposition coding on x: for r = 2 it is (l_0(x), l_{p-1}(x)); each
/// further step decomposes the previous last component in the same way.
/// r = 1 is (x) and r = 0 is empty.
std::vector<RatFunc> chiOracleTuple(const RatFunc& x, int r);

/// All canonical rational functions of height at most maxHeight, ordered by
/// height; within one height, by denominator index, then numerator index,
/// where a polynomial's index reads its coefficient vector as a base-p
/// numeral (constant coefficient least significant). Non-canonical pairs are
/// skipped, so each function appears exactly once, at its own height.
std::vector<RatFunc> enumerateRatFuncs(unsigned p, unsigned maxHeight);

/// The ring language over the field sort extended with the generator
/// constant `s` and rational-function literal constants.
Language fpalgLanguage(unsigned p);

struct BoundedSearchResult {
  /// True when a witness tuple was found; false only means that no witness
  /// exists within the height bound, never that the sentence is false.
  bool satisfiable = false;
  /// The witness in quantifier-prefix order, when found.
  std::vector<std::pair<std::string, RatFunc>> witness;
};

/// Bounded witness search over F_p(s) for purely existential sentences of
/// the fpalg language: the sentence is brought to prenex form, its prefix
/// must consist of existentials over a quantifier-free matrix, and the
/// variables run over all canonical functions of height at most maxHeight
/// in enumeration order, the innermost variable fastest.
BoundedSearchResult existsBounded(const FormulaPtr& sentence, unsigned p, unsigned maxHeight);

}  // namespace fragcalc
