// Many-sorted first-order signatures: sorts, symbols, languages, language
// inclusions, and the built-in languages used throughout the toolkit.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fragcalc {

/// Base class for all domain errors thrown by this library.
class FragcalcError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SymbolKind { Function, Relation, Constant };

std::string to_string(SymbolKind kind);

/// A sort (carrier type) of a many-sorted language.
struct Sort {
  std::string name;

  friend bool operator==(const Sort&, const Sort&) = default;
};

/// A function, relation or constant symbol together with its sort profile.
struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::Constant;
  std::vector<std::string> argSorts;  // empty for constants
  std::string resultSort;             // empty for relations

  std::size_t arity() const { return argSorts.size(); }

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// An immutable many-sorted language (signature).
///
/// Symbol names are unique across kinds. Every language carries a
/// presentation: an injection from symbols into the naturals that the Goedel
/// numbering uses. By default a symbol's code is its declaration index; a
/// custom injection may be supplied at construction time.
///
/// A language may additionally admit "literal constants": constant tokens of
/// the form `{[c0,c1,...]/[d0,...]@p}` denoting rational functions, all of a
/// designated sort. These are resolved on demand rather than declared, since
/// there are infinitely many of them.
class Language {
 public:
  Language() = default;
  Language(std::string name, std::vector<Sort> sorts, std::vector<Symbol> symbols,
           std::map<std::string, unsigned> presentation = {});

  const std::string& name() const { return name_; }
  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  bool hasSort(const std::string& sortName) const;
  /// Index of a sort in declaration order; throws FragcalcError if absent.
  std::size_t sortIndex(const std::string& sortName) const;

  /// Looks up a declared symbol by name; nullptr if absent.
  const Symbol* find(const std::string& symbolName) const;

  /// Resolves a constant by name, including literal constants when admitted.
  std::optional<Symbol> resolveConstant(const std::string& name) const;

  /// Sort assigned to literal constants, or empty when literals are not
  /// admitted by this language.
  const std::string& literalConstantSort() const { return literalSort_; }

  /// Returns a copy of this language that accepts rational-function literal
  /// constants of the given sort.
  Language withLiteralConstants(const std::string& sortName) const;

  /// The presentation code of a declared symbol; throws if absent.
  unsigned code(const std::string& symbolName) const;
  /// Inverse presentation lookup; nullptr when no symbol has this code.
  const Symbol* symbolByCode(unsigned code) const;

  /// Returns this language extended with fresh constants of an existing sort.
  /// Throws if a name collides with a declared symbol.
  Language extendWithConstants(const std::vector<std::string>& names,
                               const std::string& sortName,
                               const std::string& newName = "") const;

  std::string to_text() const;
  static Language fromText(const std::string& text);
  static Language fromFile(const std::string& path);

  friend bool operator==(const Language&, const Language&);

 private:
  std::string name_;
  std::vector<Sort> sorts_;
  std::vector<Symbol> symbols_;
  std::map<std::string, unsigned> codes_;  // symbol name -> presentation code
  std::string literalSort_;                // empty: no literal constants
};

/// A witness that every sort and symbol of `sub` occurs, with an identical
/// profile, in `sup`.
class LanguageInclusion {
 public:
  /// Checks the inclusion; nullopt when some sort or symbol is missing or
  /// has a different profile in `sup`.
  static std::optional<LanguageInclusion> of(Language sub, Language sup);

  const Language& sub() const { return sub_; }
  const Language& sup() const { return sup_; }

  /// Composes `this : A <= B` with `outer : B <= C` into `A <= C`.
  /// Throws if outer.sub() differs from this->sup().
  LanguageInclusion compose(const LanguageInclusion& outer) const;

 private:
  LanguageInclusion(Language sub, Language sup)
      : sub_(std::move(sub)), sup_(std::move(sup)) {}
  Language sub_, sup_;
};

/// Ring language: sort `field`; binary `+`, `-`, `*`; constants `0`, `1`.
const Language& ringLanguage();

/// Graph language: sort `vertex`; binary relation `E`.
const Language& graphLanguage();

/// Valued-field language with sorts `field`, `group`, `residue`:
///  - ring operations `+ - * 0 1` on the field sort,
///  - ring operations `+r -r *r 0r 1r` on the residue sort,
///  - ordered-group operations `+g -g 0g` with relations `<=g`, `<g` and the
///    top element `infg` on the group sort,
///  - the valuation `v : field -> group` (total, `v(0) = infg`) and the
///    residue map `res : field -> residue` (total, `0r` off the valuation
///    ring).
const Language& valLanguage();

/// Ring language extended with field-sort constants.
Language ringWithConstants(const std::vector<std::string>& constants);

/// Valued-field language extended with field-sort constants.
Language valWithConstants(const std::vector<std::string>& constants);

}  // namespace fragcalc
