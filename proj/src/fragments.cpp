#include "fragcalc/fragments.hpp"

#include <cctype>
#include <sstream>

namespace fragcalc {

QuantifierBlock block(QuantKind kind, BlockMode mode, int bound, std::string sortRestriction) {
  return QuantifierBlock{kind, mode, bound, std::move(sortRestriction)};
}

FragmentDescriptor prepend(QuantifierBlock b, FragmentDescriptor inner) {
  FragmentDescriptor out;
  out.blocks.reserve(inner.blocks.size() + 1);
  out.blocks.push_back(std::move(b));
  out.blocks.insert(out.blocks.end(), inner.blocks.begin(), inner.blocks.end());
  return out;
}

namespace {

struct DescParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw FragcalcError("descriptor '" + text + "', offset " + std::to_string(pos) + ": " + msg);
  }

  void skipSpace() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool atEnd() {
    skipSpace();
    return pos >= text.size() || text[pos] == ']';
  }

  int parseDigits() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected a number");
    int n = std::stoi(text.substr(start, pos - start));
    if (n < 1) fail("bounds must be at least 1");
    return n;
  }

  FragmentDescriptor parseDescriptor() {
    skipSpace();
    if (text.compare(pos, 2, "F0") == 0) {
      pos += 2;
      return {};
    }
    if (pos >= text.size() || (text[pos] != 'A' && text[pos] != 'E'))
      fail("expected 'A', 'E' or 'F0'");
    QuantifierBlock b;
    b.kind = text[pos] == 'A' ? QuantKind::Forall : QuantKind::Exists;
    ++pos;
    bool haveBound = false, haveNest = false;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      b.bound = parseDigits();
      haveNest = true;
    } else if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      b.bound = parseDigits();
      haveBound = true;
    }
    if (pos < text.size() && text[pos] == '@') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      if (start == pos) fail("expected a sort name after '@'");
      b.sortRestriction = text.substr(start, pos - start);
    }
    if (pos < text.size() && text[pos] == '[') {
      if (!haveBound) fail("a prefix block needs a bound, as in 'A1[...]'");
      b.mode = BlockMode::PrefixOnly;
      ++pos;
      FragmentDescriptor inner = parseDescriptor();
      skipSpace();
      if (pos >= text.size() || text[pos] != ']') fail("expected ']'");
      ++pos;
      return prepend(std::move(b), std::move(inner));
    }
    b.mode = haveNest ? BlockMode::Nested : haveBound ? BlockMode::Closed : BlockMode::Unbounded;
    FragmentDescriptor inner = atEnd() ? FragmentDescriptor{} : parseDescriptor();
    return prepend(std::move(b), std::move(inner));
  }
};

}  // namespace

FragmentDescriptor FragmentDescriptor::parse(const std::string& text) {
  DescParser parser{text};
  FragmentDescriptor d = parser.parseDescriptor();
  parser.skipSpace();
  if (parser.pos != text.size()) parser.fail("trailing input after descriptor");
  return d;
}

std::string FragmentDescriptor::to_string() const {
  if (blocks.empty()) return "F0";
  std::ostringstream out;
  int openBrackets = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const QuantifierBlock& b = blocks[i];
    if (i > 0 && blocks[i - 1].mode != BlockMode::PrefixOnly) out << " ";
    out << (b.kind == QuantKind::Forall ? 'A' : 'E');
    if (b.mode == BlockMode::Nested)
      out << "^" << b.bound;
    else if (b.mode != BlockMode::Unbounded)
      out << b.bound;
    if (!b.sortRestriction.empty()) out << "@" << b.sortRestriction;
    if (b.mode == BlockMode::PrefixOnly) {
      out << "[";
      ++openBrackets;
    }
  }
  // The innermost base is F0; spell it out only where the syntax demands it.
  if (blocks.back().mode == BlockMode::PrefixOnly) out << "F0";
  for (int i = 0; i < openBrackets; ++i) out << "]";
  return out.str();
}

namespace {

bool sortMatches(const QuantifierBlock& b, const std::string& sort) {
  if (b.sortRestriction.empty() || b.sortRestriction == sort) return true;
  // "k" conventionally names the valued-field residue sort.
  return b.sortRestriction == "k" && sort == "residue";
}

bool blockMatches(const QuantifierBlock& b, const Formula& f) {
  if (f.kind == Formula::Kind::Forall && b.kind != QuantKind::Forall) return false;
  if (f.kind == Formula::Kind::Exists && b.kind != QuantKind::Exists) return false;
  if (f.kind != Formula::Kind::Forall && f.kind != Formula::Kind::Exists) return false;
  return sortMatches(b, f.sort);
}

struct Membership {
  const FragmentDescriptor& desc;

  bool level(std::size_t i, const FormulaPtr& f) const {
    if (i == desc.blocks.size()) return isQuantifierFree(f);
    const QuantifierBlock& b = desc.blocks[i];
    switch (b.mode) {
      case BlockMode::PrefixOnly:
        return prefix(b, i, f);
      case BlockMode::Closed:
        return closure(f, [&](const FormulaPtr& g) { return prefix(b, i, g); });
      case BlockMode::Nested:
        return nested(b, b.bound, i, f);
      case BlockMode::Unbounded:
        return unbounded(b, i, f);
    }
    return false;
  }

  // f in Q^j[inner] for some j <= bound: strip matching quantifiers one at a
  // time, testing the remainder against the inner levels at each length.
  bool prefix(const QuantifierBlock& b, std::size_t i, const FormulaPtr& f) const {
    FormulaPtr cur = f;
    for (int j = 0;; ++j) {
      if (level(i + 1, cur)) return true;
      if (j == b.bound || !blockMatches(b, *cur)) return false;
      cur = cur->left;
    }
  }

  // Closure of a generator set under conjunction and disjunction, with top
  // and bottom adjoined. Substitution closure needs no extra work: every
  // generator set produced by descriptor levels is closed under renaming of
  // free variables, and substitution distributes over the connectives.
  template <class InSet>
  bool closure(const FormulaPtr& f, InSet&& inSet) const {
    switch (f->kind) {
      case Formula::Kind::Top:
      case Formula::Kind::Bot:
        return true;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        return closure(f->left, inSet) && closure(f->right, inSet);
      default:
        return inSet(f);
    }
  }

  // f in Q^n(inner) where Q^{k+1} = closure of Q1[Q^k] and Q^0 is the inner
  // level set.
  bool nested(const QuantifierBlock& b, int n, std::size_t i, const FormulaPtr& f) const {
    if (n == 0) return level(i + 1, f);
    return closure(f, [&](const FormulaPtr& g) {
      if (blockMatches(b, *g) && nested(b, n - 1, i, g->left)) return true;
      return nested(b, n - 1, i, g);
    });
  }

  // f in the union of Q^n(inner) over all n.
  bool unbounded(const QuantifierBlock& b, std::size_t i, const FormulaPtr& f) const {
    switch (f->kind) {
      case Formula::Kind::Top:
      case Formula::Kind::Bot:
        return true;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        return unbounded(b, i, f->left) && unbounded(b, i, f->right);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
        if (blockMatches(b, *f)) return unbounded(b, i, f->left);
        return level(i + 1, f);
      default:
        return level(i + 1, f);
    }
  }
};

}  // namespace

bool memFragment(const FragmentDescriptor& desc, const Language& lang, const FormulaPtr& f) {
  (void)lang;
  return Membership{desc}.level(0, f);
}

bool memBooleanClosure(const FragmentDescriptor& desc, const Language& lang, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return true;
    case Formula::Kind::Not:
      return memBooleanClosure(desc, lang, f->left);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return memBooleanClosure(desc, lang, f->left) && memBooleanClosure(desc, lang, f->right);
    default:
      return memFragment(desc, lang, f);
  }
}

FormulaPtr joinPrefix(const std::vector<PrefixEntry>& prefix, FormulaPtr matrix) {
  FormulaPtr out = std::move(matrix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->kind == QuantKind::Forall ? forall(it->name, it->sort, std::move(out))
                                        : exists(it->name, it->sort, std::move(out));
  return out;
}

std::pair<std::vector<PrefixEntry>, FormulaPtr> splitMinimalPrefix(
    const FragmentDescriptor& refFragment, const Language& lang, const FormulaPtr& f) {
  std::vector<PrefixEntry> prefix;
  FormulaPtr cur = f;
  while (!memBooleanClosure(refFragment, lang, cur)) {
    if (cur->kind != Formula::Kind::Forall && cur->kind != Formula::Kind::Exists)
      throw FragcalcError(
          "formula is not a quantifier prefix over the fragment's boolean closure: " +
          to_text(cur));
    prefix.push_back(PrefixEntry{
        cur->kind == Formula::Kind::Forall ? QuantKind::Forall : QuantKind::Exists, cur->name,
        cur->sort});
    cur = cur->left;
  }
  return {std::move(prefix), cur};
}

namespace {

// Renames the first `count` leading binders whose names appear in `clash`,
// drawing replacements from the reserved fresh namespace.
FormulaPtr renameLeadingBinders(const FormulaPtr& f, std::size_t count,
                                const std::set<std::string>& clash,
                                std::set<std::string>& used) {
  if (count == 0) return f;
  std::string binder = f->name;
  FormulaPtr body = f->left;
  if (clash.count(binder)) {
    std::string fresh = freshName(used);
    used.insert(fresh);
    body = substituteVars(body, {{binder, fresh}});
    binder = fresh;
  }
  FormulaPtr newBody = renameLeadingBinders(body, count - 1, clash, used);
  return f->kind == Formula::Kind::Forall ? forall(binder, f->sort, newBody)
                                          : exists(binder, f->sort, newBody);
}

PrenexResult prenexRec(const FragmentDescriptor& F, const Language& lang, const FormulaPtr& f) {
  if (memBooleanClosure(F, lang, f)) return {f, 0};
  switch (f->kind) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      PrenexResult r = prenexRec(F, lang, f->left);
      FormulaPtr out = f->kind == Formula::Kind::Forall ? forall(f->name, f->sort, r.formula)
                                                        : exists(f->name, f->sort, r.formula);
      return {out, r.prefixLength + 1};
    }
    case Formula::Kind::Not: {
      PrenexResult r = prenexRec(F, lang, f->left);
      auto [prefix, matrix] = splitMinimalPrefix(F, lang, r.formula);
      for (PrefixEntry& e : prefix)
        e.kind = e.kind == QuantKind::Forall ? QuantKind::Exists : QuantKind::Forall;
      return {joinPrefix(prefix, neg(matrix)), static_cast<int>(prefix.size())};
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      PrenexResult r1 = prenexRec(F, lang, f->left);
      PrenexResult r2 = prenexRec(F, lang, f->right);
      auto [pre1, eta1] = splitMinimalPrefix(F, lang, r1.formula);
      auto [pre2Orig, eta2Orig] = splitMinimalPrefix(F, lang, r2.formula);

      std::set<std::string> used = allNames(r1.formula);
      {
        std::set<std::string> names2 = allNames(r2.formula);
        used.insert(names2.begin(), names2.end());
      }
      // Right-hand binders clashing with left-hand binders or with variables
      // free in the left matrix move to fresh names.
      std::set<std::string> clash2 = freeVariableNames(eta1);
      for (const PrefixEntry& e : pre1) clash2.insert(e.name);
      FormulaPtr renamed2 = renameLeadingBinders(r2.formula, pre2Orig.size(), clash2, used);
      auto [pre2, eta2] = splitMinimalPrefix(F, lang, renamed2);

      // Symmetrically, a left-hand binder must not capture a variable free in
      // the right matrix once the prefixes are concatenated.
      std::set<std::string> clash1 = freeVariableNames(eta2);
      FormulaPtr renamed1 = renameLeadingBinders(r1.formula, pre1.size(), clash1, used);
      auto [pre1R, eta1R] = splitMinimalPrefix(F, lang, renamed1);

      std::vector<PrefixEntry> prefix = std::move(pre1R);
      prefix.insert(prefix.end(), pre2.begin(), pre2.end());
      FormulaPtr matrix =
          f->kind == Formula::Kind::And ? conj(eta1R, eta2) : disj(eta1R, eta2);
      return {joinPrefix(prefix, matrix), static_cast<int>(prefix.size())};
    }
    default:
      // Atoms and constants lie in every fragment's boolean closure, so the
      // fixed-point case above has already returned.
      throw FragcalcError("prenex: unexpected node " + to_text(f));
  }
}

}  // namespace

PrenexResult prenex(const FragmentDescriptor& refFragment, const Language& lang,
                    const FormulaPtr& phi) {
  return prenexRec(refFragment, lang, phi);
}

FormulaPtr relativize(const Language& lang, const FormulaPtr& phi, const FormulaPtr& eta) {
  VariableSet etaFree = freeVariables(eta);
  if (etaFree.size() != 1)
    throw FragcalcError("relativize: the guard must have exactly one free variable, got " +
                        std::to_string(etaFree.size()));
  const TypedVar guardVar = etaFree[0];
  FormulaPtr guardNeg = prenex(FragmentDescriptor{}, lang, neg(eta)).formula;

  struct Rec {
    const Language& lang;
    const FormulaPtr& eta;
    const FormulaPtr& guardNeg;
    const TypedVar& guardVar;

    FormulaPtr run(const FormulaPtr& f) const {
      switch (f->kind) {
        case Formula::Kind::Top:
        case Formula::Kind::Bot:
        case Formula::Kind::Eq:
        case Formula::Kind::Rel:
          return f;
        case Formula::Kind::Not:
          return neg(run(f->left));
        case Formula::Kind::And:
          return conj(run(f->left), run(f->right));
        case Formula::Kind::Or:
          return disj(run(f->left), run(f->right));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
          FormulaPtr body = run(f->left);
          if (f->sort != guardVar.sort) {
            // Quantifiers over other sorts are untouched by relativization.
            return f->kind == Formula::Kind::Forall ? forall(f->name, f->sort, body)
                                                    : exists(f->name, f->sort, body);
          }
          std::map<std::string, TermPtr> toBinder{{guardVar.name, var(f->name, f->sort)}};
          if (f->kind == Formula::Kind::Exists)
            return exists(f->name, f->sort, conj(substituteTerms(eta, toBinder), body));
          return forall(f->name, f->sort, disj(substituteTerms(guardNeg, toBinder), body));
        }
      }
      return f;
    }
  } rec{lang, eta, guardNeg, guardVar};
  return rec.run(phi);
}

}  // namespace fragcalc
