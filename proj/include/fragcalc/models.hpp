// Finite many-sorted structures: construction, text files, Tarskian
// evaluation under a node budget, embeddings, and the built-in example
// structures (finite fields, modular rings, tournaments, trivially valued
// fields).
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fragcalc/formula.hpp"
#include "fragcalc/signature.hpp"

namespace fragcalc {

/// Thrown by evaluation when it exceeds its node budget.
class EvalBudgetExceeded : public FragcalcError {
 public:
  using FragcalcError::FragcalcError;
};

/// A finite structure for a language: one finite carrier per sort, dense
/// tables for the symbols. Elements are addressed by index into their
/// carrier; carriers also name their elements for i/o.
class FiniteStructure {
 public:
  /// Variable assignment: variable name -> element index in the carrier of
  /// the variable's sort.
  using Assignment = std::map<std::string, std::size_t>;

  static constexpr std::size_t kDefaultBudget = 100'000'000;

  explicit FiniteStructure(Language lang, std::string name = "");

  const Language& language() const { return lang_; }
  const std::string& name() const { return name_; }
  void setName(std::string name) { name_ = std::move(name); }

  /// Defines the carrier of a sort; element names must be distinct.
  void setCarrier(const std::string& sort, std::vector<std::string> elements);
  const std::vector<std::string>& carrier(const std::string& sort) const;
  std::size_t carrierSize(const std::string& sort) const;
  /// Index of a named element; throws when absent.
  std::size_t element(const std::string& sort, const std::string& name) const;

  void setConstant(const std::string& symbol, std::size_t value);
  /// Function table in row-major order: the first argument varies slowest.
  void setFunction(const std::string& symbol, std::vector<std::size_t> table);
  void setFunctionEntry(const std::string& symbol, const std::vector<std::size_t>& args,
                        std::size_t value);
  /// Relation table in the same order; missing entries default to false.
  void setRelation(const std::string& symbol, std::vector<char> table);
  void setRelationEntry(const std::string& symbol, const std::vector<std::size_t>& args,
                        bool value);

  std::size_t constantValue(const std::string& symbol) const;
  std::size_t functionValue(const std::string& symbol, const std::vector<std::size_t>& args) const;
  bool relationValue(const std::string& symbol, const std::vector<std::size_t>& args) const;

  /// Checks that every carrier is nonempty and every symbol's table is
  /// complete and in range; throws FragcalcError otherwise.
  void validate() const;

  /// Evaluates a sentence or a formula under an assignment of its free
  /// variables. The formula must be well-sorted for the structure's language
  /// and the budget bounds the number of term/formula node visits, counting
  /// repetitions under quantifiers; EvalBudgetExceeded reports exhaustion.
  bool eval(const FormulaPtr& f, const Assignment& assignment = {},
            std::size_t budget = kDefaultBudget) const;
  std::size_t evalTerm(const TermPtr& t, const Assignment& assignment = {},
                       std::size_t budget = kDefaultBudget) const;

  std::string to_text() const;
  static FiniteStructure fromText(const std::string& text);
  static FiniteStructure fromFile(const std::string& path);

 private:
  struct Interp {
    std::vector<std::size_t> dims;     // carrier sizes of the argument sorts
    std::vector<std::size_t> fnTable;  // functions/constants
    std::vector<char> relTable;        // relations
    bool defined = false;
  };

  std::size_t flatIndex(const Symbol& sym, const Interp& interp,
                        const std::vector<std::size_t>& args) const;
  const Interp& interp(const std::string& symbol, SymbolKind kind) const;

  Language lang_;
  std::string name_;
  std::map<std::string, std::vector<std::string>> carriers_;
  std::map<std::string, std::map<std::string, std::size_t>> elementIndex_;
  std::map<std::string, Interp> interps_;
};

/// A (multi-sorted) embedding of `a` into `b`: per-sort injections that map
/// constants to constants, commute with the functions, and both preserve and
/// reflect the relations. `maps[sort][i]` is the image of element i.
struct Embedding {
  std::map<std::string, std::vector<std::size_t>> maps;

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// All embeddings of `a` into `b` (the two structures must share their
/// language), in lexicographic order of the assembled maps.
std::vector<Embedding> embeddings(const FiniteStructure& a, const FiniteStructure& b);

/// The field with q elements, for prime powers q <= 64, over the ring
/// language. Elements are named "0".."q-1"; the element with index
/// sum c_i p^i has coordinates (c_0, c_1, ...) over the degree basis of a
/// fixed irreducible polynomial, so "0" and "1" are the ring constants and
/// index arithmetic is compatible across subfields of a common base.
FiniteStructure finiteField(unsigned q);

/// The ring of integers modulo m >= 1 over the ring language.
FiniteStructure modularRing(unsigned m);

/// The tournaments used by the example separation: gamma(2) is a single
/// directed edge, gamma(3) a directed 3-cycle, gamma(4) a 3-cycle plus a
/// vertex beating all of it. Vertices are named "1", "2", ...
FiniteStructure gammaTournament(int n);

/// Disjoint union of two structures over the same purely relational
/// language; elements are renamed "0", "1", ... in order.
FiniteStructure disjointUnion(const FiniteStructure& a, const FiniteStructure& b);

/// The pair (N_c, M_c): N_c is c copies of gamma(2) and c copies of
/// gamma(4); M_c adds one copy of gamma(3). The sentence from
/// `sigmaSentence` holds in every N_c and fails in every M_c.
std::pair<FiniteStructure, FiniteStructure> tournamentModels(int c);

/// The separating sentence: every vertex has no successor, or no
/// predecessor, or three distinct neighbours. It lies in the
/// nested-two-universals fragment over existentials but not in the
/// prefix-closed two-universal one.
FormulaPtr sigmaSentence();

/// The trivially valued field with q elements over the valued-field
/// language: value group {0, inf} with v(x) = inf exactly at x = 0, residue
/// field equal to the field itself with res the identity.
FiniteStructure valTrivialStructure(unsigned q);

}  // namespace fragcalc
