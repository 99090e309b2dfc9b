#include "fragcalc/models.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace fragcalc {

FiniteStructure::FiniteStructure(Language lang, std::string name)
    : lang_(std::move(lang)), name_(std::move(name)) {}

void FiniteStructure::setCarrier(const std::string& sort, std::vector<std::string> elements) {
  if (!lang_.hasSort(sort))
    throw FragcalcError("language '" + lang_.name() + "' has no sort '" + sort + "'");
  if (!interps_.empty())
    throw FragcalcError("carriers must be set before any symbol tables");
  if (elements.empty()) throw FragcalcError("carrier of sort '" + sort + "' must be nonempty");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (!index.emplace(elements[i], i).second)
      throw FragcalcError("duplicate element name '" + elements[i] + "' in sort '" + sort + "'");
  carriers_[sort] = std::move(elements);
  elementIndex_[sort] = std::move(index);
}

const std::vector<std::string>& FiniteStructure::carrier(const std::string& sort) const {
  auto it = carriers_.find(sort);
  if (it == carriers_.end()) throw FragcalcError("no carrier set for sort '" + sort + "'");
  return it->second;
}

std::size_t FiniteStructure::carrierSize(const std::string& sort) const {
  return carrier(sort).size();
}

std::size_t FiniteStructure::element(const std::string& sort, const std::string& name) const {
  auto ci = elementIndex_.find(sort);
  if (ci == elementIndex_.end()) throw FragcalcError("no carrier set for sort '" + sort + "'");
  auto it = ci->second.find(name);
  if (it == ci->second.end())
    throw FragcalcError("sort '" + sort + "' has no element named '" + name + "'");
  return it->second;
}

namespace {

const Symbol& namedSymbol(const Language& lang, const std::string& name, SymbolKind kind) {
  const Symbol* sym = lang.find(name);
  if (!sym) throw FragcalcError("language '" + lang.name() + "' has no symbol '" + name + "'");
  if (sym->kind != kind)
    throw FragcalcError("symbol '" + name + "' is a " + to_string(sym->kind) + ", expected a " +
                        to_string(kind));
  return *sym;
}

constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

}  // namespace

std::size_t FiniteStructure::flatIndex(const Symbol& sym, const Interp& interp,
                                       const std::vector<std::size_t>& args) const {
  if (args.size() != sym.arity())
    throw FragcalcError("symbol '" + sym.name + "' takes " + std::to_string(sym.arity()) +
                        " arguments, got " + std::to_string(args.size()));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] >= interp.dims[i])
      throw FragcalcError("argument " + std::to_string(i) + " of '" + sym.name +
                          "' is out of range");
    idx = idx * interp.dims[i] + args[i];
  }
  return idx;
}

namespace {

std::size_t tableSize(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (std::size_t d : dims) n *= d;
  return n;
}

}  // namespace

void FiniteStructure::setConstant(const std::string& symbol, std::size_t value) {
  const Symbol& sym = namedSymbol(lang_, symbol, SymbolKind::Constant);
  if (value >= carrierSize(sym.resultSort))
    throw FragcalcError("value for constant '" + symbol + "' is out of range");
  Interp& in = interps_[symbol];
  in.fnTable = {value};
  in.defined = true;
}

void FiniteStructure::setFunction(const std::string& symbol, std::vector<std::size_t> table) {
  const Symbol& sym = namedSymbol(lang_, symbol, SymbolKind::Function);
  Interp& in = interps_[symbol];
  in.dims.clear();
  for (const std::string& s : sym.argSorts) in.dims.push_back(carrierSize(s));
  if (table.size() != tableSize(in.dims))
    throw FragcalcError("table for '" + symbol + "' has " + std::to_string(table.size()) +
                        " entries, expected " + std::to_string(tableSize(in.dims)));
  std::size_t range = carrierSize(sym.resultSort);
  for (std::size_t v : table)
    if (v >= range) throw FragcalcError("table for '" + symbol + "' has an out-of-range value");
  in.fnTable = std::move(table);
  in.defined = true;
}

void FiniteStructure::setFunctionEntry(const std::string& symbol,
                                       const std::vector<std::size_t>& args, std::size_t value) {
  const Symbol& sym = namedSymbol(lang_, symbol, SymbolKind::Function);
  Interp& in = interps_[symbol];
  if (in.dims.empty()) {
    for (const std::string& s : sym.argSorts) in.dims.push_back(carrierSize(s));
    in.fnTable.assign(tableSize(in.dims), kUnset);
  }
  if (value >= carrierSize(sym.resultSort))
    throw FragcalcError("value for '" + symbol + "' is out of range");
  in.fnTable[flatIndex(sym, in, args)] = value;
  in.defined = true;
}

void FiniteStructure::setRelation(const std::string& symbol, std::vector<char> table) {
  const Symbol& sym = namedSymbol(lang_, symbol, SymbolKind::Relation);
  Interp& in = interps_[symbol];
  in.dims.clear();
  for (const std::string& s : sym.argSorts) in.dims.push_back(carrierSize(s));
  if (table.size() != tableSize(in.dims))
    throw FragcalcError("table for '" + symbol + "' has " + std::to_string(table.size()) +
                        " entries, expected " + std::to_string(tableSize(in.dims)));
  in.relTable = std::move(table);
  in.defined = true;
}

void FiniteStructure::setRelationEntry(const std::string& symbol,
                                       const std::vector<std::size_t>& args, bool value) {
  const Symbol& sym = namedSymbol(lang_, symbol, SymbolKind::Relation);
  Interp& in = interps_[symbol];
  if (in.dims.empty()) {
    for (const std::string& s : sym.argSorts) in.dims.push_back(carrierSize(s));
    in.relTable.assign(tableSize(in.dims), 0);
  }
  in.relTable[flatIndex(sym, in, args)] = value ? 1 : 0;
  in.defined = true;
}

std::size_t FiniteStructure::constantValue(const std::string& symbol) const {
  namedSymbol(lang_, symbol, SymbolKind::Constant);
  auto it = interps_.find(symbol);
  if (it == interps_.end() || !it->second.defined)
    throw FragcalcError("constant '" + symbol + "' has no interpretation");
  return it->second.fnTable[0];
}

std::size_t FiniteStructure::functionValue(const std::string& symbol,
                                           const std::vector<std::size_t>& args) const {
  const Symbol& sym = namedSymbol(lang_, symbol, SymbolKind::Function);
  auto it = interps_.find(symbol);
  if (it == interps_.end() || !it->second.defined)
    throw FragcalcError("function '" + symbol + "' has no interpretation");
  std::size_t v = it->second.fnTable[flatIndex(sym, it->second, args)];
  if (v == kUnset)
    throw FragcalcError("function '" + symbol + "' is undefined at one of its entries");
  return v;
}

bool FiniteStructure::relationValue(const std::string& symbol,
                                    const std::vector<std::size_t>& args) const {
  const Symbol& sym = namedSymbol(lang_, symbol, SymbolKind::Relation);
  auto it = interps_.find(symbol);
  if (it == interps_.end() || !it->second.defined) {
    // Relations default to empty; still validate the arguments.
    Interp probe;
    for (const std::string& s : sym.argSorts) probe.dims.push_back(carrierSize(s));
    flatIndex(sym, probe, args);
    return false;
  }
  return it->second.relTable[flatIndex(sym, it->second, args)] != 0;
}

void FiniteStructure::validate() const {
  for (const Sort& s : lang_.sorts()) carrier(s.name);  // throws when missing
  for (const Symbol& sym : lang_.symbols()) {
    if (sym.kind == SymbolKind::Relation) continue;  // empty relations are fine
    auto it = interps_.find(sym.name);
    if (it == interps_.end() || !it->second.defined)
      throw FragcalcError("symbol '" + sym.name + "' has no interpretation");
    for (std::size_t v : it->second.fnTable)
      if (v == kUnset)
        throw FragcalcError("function '" + sym.name + "' is missing table entries");
  }
}

namespace {

struct Evaluator {
  const FiniteStructure& M;
  std::size_t budget;
  FiniteStructure::Assignment env;

  void tick() {
    if (budget == 0) throw EvalBudgetExceeded("evaluation budget exhausted");
    --budget;
  }

  std::size_t term(const TermPtr& t) {
    tick();
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = env.find(t->name);
        if (it == env.end())
          throw FragcalcError("no value assigned to variable '" + t->name + "'");
        return it->second;
      }
      case Term::Kind::Const:
        return M.constantValue(t->name);
      case Term::Kind::Apply: {
        std::vector<std::size_t> args;
        args.reserve(t->args.size());
        for (const TermPtr& a : t->args) args.push_back(term(a));
        return M.functionValue(t->name, args);
      }
    }
    throw FragcalcError("malformed term");
  }

  bool formula(const FormulaPtr& f) {
    tick();
    switch (f->kind) {
      case Formula::Kind::Top:
        return true;
      case Formula::Kind::Bot:
        return false;
      case Formula::Kind::Eq:
        return term(f->args[0]) == term(f->args[1]);
      case Formula::Kind::Rel: {
        std::vector<std::size_t> args;
        args.reserve(f->args.size());
        for (const TermPtr& a : f->args) args.push_back(term(a));
        return M.relationValue(f->name, args);
      }
      case Formula::Kind::Not:
        return !formula(f->left);
      case Formula::Kind::And:
        return formula(f->left) && formula(f->right);
      case Formula::Kind::Or:
        return formula(f->left) || formula(f->right);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        bool isForall = f->kind == Formula::Kind::Forall;
        std::optional<std::size_t> saved;
        if (auto it = env.find(f->name); it != env.end()) saved = it->second;
        std::size_t n = M.carrierSize(f->sort);
        bool result = isForall;
        for (std::size_t i = 0; i < n; ++i) {
          env[f->name] = i;
          bool v = formula(f->left);
          if (v != isForall) {
            result = v;
            break;
          }
        }
        if (saved)
          env[f->name] = *saved;
        else
          env.erase(f->name);
        return result;
      }
    }
    throw FragcalcError("malformed formula");
  }
};

void checkAssignment(const FiniteStructure& M, const FormulaPtr& f,
                     const FiniteStructure::Assignment& assignment) {
  for (const TypedVar& v : freeVariables(f)) {
    auto it = assignment.find(v.name);
    if (it == assignment.end())
      throw FragcalcError("no assignment for free variable '" + v.name + "'");
    if (it->second >= M.carrierSize(v.sort))
      throw FragcalcError("assignment for '" + v.name + "' is out of range for sort '" + v.sort +
                          "'");
  }
}

}  // namespace

bool FiniteStructure::eval(const FormulaPtr& f, const Assignment& assignment,
                           std::size_t budget) const {
  std::vector<Diagnostic> diags = wellSorted(lang_, f);
  if (!diags.empty())
    throw FragcalcError("formula is not well-sorted at " + diags[0].path + ": " +
                        diags[0].message);
  checkAssignment(*this, f, assignment);
  Evaluator ev{*this, budget, assignment};
  return ev.formula(f);
}

std::size_t FiniteStructure::evalTerm(const TermPtr& t, const Assignment& assignment,
                                      std::size_t budget) const {
  Evaluator ev{*this, budget, assignment};
  return ev.term(t);
}

// ---------------------------------------------------------------------------
// Text format

namespace {

const Language* builtinByName(const std::string& name) {
  if (name == "ring") return &ringLanguage();
  if (name == "graph") return &graphLanguage();
  if (name == "val") return &valLanguage();
  return nullptr;
}

/// Resolves "builtin:NAME" or "builtin:NAME(c1,c2,...)" references.
std::optional<Language> resolveLanguageRef(const std::string& ref) {
  if (ref.rfind("builtin:", 0) != 0) return std::nullopt;
  std::string rest = ref.substr(8);
  std::string base = rest;
  std::vector<std::string> consts;
  if (auto paren = rest.find('('); paren != std::string::npos) {
    if (rest.back() != ')') throw FragcalcError("malformed language reference '" + ref + "'");
    base = rest.substr(0, paren);
    std::string inner = rest.substr(paren + 1, rest.size() - paren - 2);
    std::string cur;
    for (char c : inner + ",") {
      if (c == ',') {
        if (cur.empty()) throw FragcalcError("malformed language reference '" + ref + "'");
        consts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  const Language* lang = builtinByName(base);
  if (!lang) throw FragcalcError("unknown builtin language '" + base + "'");
  if (consts.empty()) return *lang;
  return lang->extendWithConstants(consts, lang->sorts().front().name);
}

/// The builtin reference that reproduces `lang`, when one does.
std::optional<std::string> builtinRefFor(const Language& lang) {
  for (const char* name : {"ring", "graph", "val"})
    if (lang == *builtinByName(name)) return "builtin:" + std::string(name);
  // A constant extension of a builtin round-trips through its derived name.
  std::string ref = "builtin:" + lang.name();
  try {
    if (auto back = resolveLanguageRef(ref); back && *back == lang) return ref;
  } catch (const FragcalcError&) {
  }
  return std::nullopt;
}

}  // namespace

std::string FiniteStructure::to_text() const {
  std::ostringstream out;
  out << "structure " << (name_.empty() ? "unnamed" : name_) << "\n";
  if (auto ref = builtinRefFor(lang_)) {
    out << "language " << *ref << "\n";
  } else {
    out << "language {\n" << lang_.to_text() << "}\n";
  }
  for (const Sort& s : lang_.sorts()) {
    out << "carrier " << s.name << " :";
    for (const std::string& e : carrier(s.name)) out << " " << e;
    out << "\n";
  }
  for (const Symbol& sym : lang_.symbols()) {
    auto it = interps_.find(sym.name);
    if (it == interps_.end() || !it->second.defined) continue;
    const Interp& in = it->second;
    if (sym.kind == SymbolKind::Constant) {
      out << "const " << sym.name << " : " << carrier(sym.resultSort)[in.fnTable[0]] << "\n";
      continue;
    }
    // Walk the table in row-major order, reconstructing argument tuples.
    std::vector<std::size_t> args(sym.arity(), 0);
    std::size_t total = in.fnTable.size() + in.relTable.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
      if (sym.kind == SymbolKind::Function && in.fnTable[flat] != kUnset) {
        out << "func " << sym.name << " :";
        for (std::size_t i = 0; i < args.size(); ++i)
          out << " " << carrier(sym.argSorts[i])[args[i]];
        out << " -> " << carrier(sym.resultSort)[in.fnTable[flat]] << "\n";
      } else if (sym.kind == SymbolKind::Relation && in.relTable[flat]) {
        out << "rel " << sym.name << " :";
        for (std::size_t i = 0; i < args.size(); ++i)
          out << " " << carrier(sym.argSorts[i])[args[i]];
        out << "\n";
      }
      for (std::size_t i = args.size(); i-- > 0;) {
        if (++args[i] < in.dims[i]) break;
        args[i] = 0;
      }
    }
  }
  return out.str();
}

FiniteStructure FiniteStructure::fromText(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  std::string name;
  std::optional<Language> lang;
  std::optional<FiniteStructure> st;
  auto fail = [&](const std::string& msg) {
    throw FragcalcError("structure text, line " + std::to_string(lineNo) + ": " + msg);
  };
  auto structure = [&]() -> FiniteStructure& {
    if (!st) fail("a 'language' line must come first");
    return *st;
  };
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == '#') continue;
    if (head == "structure") {
      if (!(ls >> name)) fail("expected a name after 'structure'");
    } else if (head == "language") {
      std::string ref;
      if (!(ls >> ref)) fail("expected a language reference or '{'");
      if (ref == "{") {
        std::string inner;
        bool closed = false;
        while (std::getline(in, line)) {
          ++lineNo;
          if (line == "}") {
            closed = true;
            break;
          }
          inner += line + "\n";
        }
        if (!closed) fail("unterminated language block");
        lang = Language::fromText(inner);
      } else {
        lang = resolveLanguageRef(ref);
        if (!lang) fail("expected 'builtin:NAME' or an inline '{' block");
      }
      st.emplace(*lang, name);
    } else if (head == "carrier") {
      std::string sort, colon;
      if (!(ls >> sort >> colon) || colon != ":") fail("expected 'carrier SORT : elements...'");
      std::vector<std::string> elems;
      std::string e;
      while (ls >> e) elems.push_back(e);
      structure().setCarrier(sort, std::move(elems));
    } else if (head == "const") {
      std::string sym, colon, elem;
      if (!(ls >> sym >> colon >> elem) || colon != ":") fail("expected 'const SYM : element'");
      const Symbol& s = namedSymbol(structure().language(), sym, SymbolKind::Constant);
      structure().setConstant(sym, structure().element(s.resultSort, elem));
    } else if (head == "func") {
      std::string sym, colon;
      if (!(ls >> sym >> colon) || colon != ":") fail("expected 'func SYM : args... -> value'");
      const Symbol& s = namedSymbol(structure().language(), sym, SymbolKind::Function);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (toks.size() != s.arity() + 2 || toks[s.arity()] != "->")
        fail("expected " + std::to_string(s.arity()) + " arguments, '->' and a value");
      std::vector<std::size_t> args;
      for (std::size_t i = 0; i < s.arity(); ++i)
        args.push_back(structure().element(s.argSorts[i], toks[i]));
      structure().setFunctionEntry(sym, args, structure().element(s.resultSort, toks.back()));
    } else if (head == "rel") {
      std::string sym, colon;
      if (!(ls >> sym >> colon) || colon != ":") fail("expected 'rel SYM : args...'");
      const Symbol& s = namedSymbol(structure().language(), sym, SymbolKind::Relation);
      std::vector<std::size_t> args;
      std::string t;
      std::size_t i = 0;
      while (ls >> t) {
        if (i >= s.arity()) fail("too many arguments for relation '" + sym + "'");
        args.push_back(structure().element(s.argSorts[i], t));
        ++i;
      }
      if (i != s.arity()) fail("too few arguments for relation '" + sym + "'");
      structure().setRelationEntry(sym, args, true);
    } else {
      fail("unknown directive '" + head + "'");
    }
  }
  FiniteStructure result = structure();
  result.validate();
  return result;
}

FiniteStructure FiniteStructure::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FragcalcError("cannot open structure file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fromText(buf.str());
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

struct EmbeddingSearch {
  const FiniteStructure& a;
  const FiniteStructure& b;
  const Language& lang;
  std::vector<std::pair<std::string, std::size_t>> slots;  // (sort, source element)
  Embedding cur;
  std::map<std::string, std::vector<char>> usedTarget;
  std::vector<Embedding> found;

  bool mapped(const std::string& sort, std::size_t i) const {
    return cur.maps.at(sort)[i] != kUnset;
  }

  // Checks every constraint whose participants are all mapped so far.
  bool consistent() const {
    for (const Symbol& sym : lang.symbols()) {
      if (sym.kind == SymbolKind::Constant) {
        std::size_t src = a.constantValue(sym.name);
        if (mapped(sym.resultSort, src) &&
            cur.maps.at(sym.resultSort)[src] != b.constantValue(sym.name))
          return false;
        continue;
      }
      std::vector<std::size_t> args(sym.arity(), 0);
      for (;;) {
        bool all = true;
        for (std::size_t i = 0; i < args.size() && all; ++i)
          all = mapped(sym.argSorts[i], args[i]);
        if (all) {
          std::vector<std::size_t> image(args.size());
          for (std::size_t i = 0; i < args.size(); ++i)
            image[i] = cur.maps.at(sym.argSorts[i])[args[i]];
          if (sym.kind == SymbolKind::Relation) {
            if (a.relationValue(sym.name, args) != b.relationValue(sym.name, image)) return false;
          } else {
            std::size_t r = a.functionValue(sym.name, args);
            if (mapped(sym.resultSort, r) &&
                cur.maps.at(sym.resultSort)[r] != b.functionValue(sym.name, image))
              return false;
          }
        }
        std::size_t i = args.size();
        for (; i-- > 0;) {
          if (++args[i] < a.carrierSize(sym.argSorts[i])) break;
          args[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
    }
    return true;
  }

  void search(std::size_t k) {
    if (k == slots.size()) {
      found.push_back(cur);
      return;
    }
    const auto& [sort, src] = slots[k];
    std::size_t n = b.carrierSize(sort);
    for (std::size_t tgt = 0; tgt < n; ++tgt) {
      if (usedTarget[sort][tgt]) continue;
      cur.maps[sort][src] = tgt;
      usedTarget[sort][tgt] = 1;
      if (consistent()) search(k + 1);
      usedTarget[sort][tgt] = 0;
      cur.maps[sort][src] = kUnset;
    }
  }
};

}  // namespace

std::vector<Embedding> embeddings(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.language() == b.language()))
    throw FragcalcError("embeddings are defined between structures of one language");
  EmbeddingSearch s{a, b, a.language(), {}, {}, {}, {}};
  for (const Sort& sort : a.language().sorts()) {
    s.cur.maps[sort.name].assign(a.carrierSize(sort.name), kUnset);
    s.usedTarget[sort.name].assign(b.carrierSize(sort.name), 0);
    for (std::size_t i = 0; i < a.carrierSize(sort.name); ++i)
      s.slots.emplace_back(sort.name, i);
  }
  s.search(0);
  return std::move(s.found);
}

// ---------------------------------------------------------------------------
// Builders

namespace {

struct PrimePower {
  unsigned p = 0, k = 0;
};

std::optional<PrimePower> factorPrimePower(unsigned q) {
  if (q < 2) return std::nullopt;
  unsigned p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;  // q itself is prime
  unsigned k = 0, rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1) return std::nullopt;
  return PrimePower{p, k};
}

/// Monic irreducible polynomials over F_p used to present F_{p^k} for the
/// supported prime powers; coefficients little-endian including the leading 1.
const std::vector<unsigned>& reducingPoly(unsigned q) {
  static const std::map<unsigned, std::vector<unsigned>> polys = {
      {4, {1, 1, 1}},           // x^2 + x + 1
      {8, {1, 1, 0, 1}},        // x^3 + x + 1
      {9, {2, 2, 1}},           // x^2 + 2x + 2
      {16, {1, 1, 0, 0, 1}},    // x^4 + x + 1
      {25, {2, 4, 1}},          // x^2 + 4x + 2
      {27, {1, 2, 0, 1}},       // x^3 + 2x + 1
      {32, {1, 0, 1, 0, 0, 1}},  // x^5 + x^2 + 1
      {49, {3, 6, 1}},          // x^2 + 6x + 3
      {64, {1, 1, 0, 1, 1, 0, 1}},  // x^6 + x^4 + x^3 + x + 1
  };
  auto it = polys.find(q);
  if (it == polys.end())
    throw FragcalcError("no presentation for a field of order " + std::to_string(q));
  return it->second;
}

std::vector<unsigned> digitsOf(unsigned x, unsigned p, unsigned k) {
  std::vector<unsigned> d(k);
  for (unsigned i = 0; i < k; ++i) {
    d[i] = x % p;
    x /= p;
  }
  return d;
}

unsigned digitsTo(const std::vector<unsigned>& d, unsigned p, unsigned k) {
  unsigned x = 0;
  for (unsigned i = k; i-- > 0;) x = x * p + d[i];
  return x;
}

}  // namespace

FiniteStructure finiteField(unsigned q) {
  auto pp = factorPrimePower(q);
  if (!pp || q > 64)
    throw FragcalcError("finite fields are provided for prime powers 2 <= q <= 64, not " +
                        std::to_string(q));
  const unsigned p = pp->p, k = pp->k;
  const std::vector<unsigned>* poly = k > 1 ? &reducingPoly(q) : nullptr;

  auto add = [&](unsigned a, unsigned b, bool subtract) {
    std::vector<unsigned> da = digitsOf(a, p, k), db = digitsOf(b, p, k);
    for (unsigned i = 0; i < k; ++i)
      da[i] = subtract ? (da[i] + p - db[i]) % p : (da[i] + db[i]) % p;
    return digitsTo(da, p, k);
  };
  auto mul = [&](unsigned a, unsigned b) {
    std::vector<unsigned> da = digitsOf(a, p, k), db = digitsOf(b, p, k);
    std::vector<unsigned> prod(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    for (unsigned d = 2 * k - 2; d >= k; --d) {
      unsigned lead = prod[d];
      if (lead == 0) continue;
      for (unsigned i = 0; i <= k; ++i)
        prod[d - k + i] = (prod[d - k + i] + (p - lead) * (*poly)[i]) % p;
    }
    prod.resize(k);
    return digitsTo(prod, p, k);
  };

  FiniteStructure F(ringLanguage(), "F" + std::to_string(q));
  std::vector<std::string> names;
  for (unsigned i = 0; i < q; ++i) names.push_back(std::to_string(i));
  F.setCarrier("field", std::move(names));
  std::vector<std::size_t> plus(q * q), minus(q * q), times(q * q);
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b) {
      plus[a * q + b] = add(a, b, false);
      minus[a * q + b] = add(a, b, true);
      times[a * q + b] = k == 1 ? (a * b) % p : mul(a, b);
    }
  F.setFunction("+", std::move(plus));
  F.setFunction("-", std::move(minus));
  F.setFunction("*", std::move(times));
  F.setConstant("0", 0);
  F.setConstant("1", 1);
  F.validate();
  return F;
}

FiniteStructure modularRing(unsigned m) {
  if (m == 0) throw FragcalcError("the modulus must be at least 1");
  FiniteStructure R(ringLanguage(), "Z" + std::to_string(m));
  std::vector<std::string> names;
  for (unsigned i = 0; i < m; ++i) names.push_back(std::to_string(i));
  R.setCarrier("field", std::move(names));
  std::vector<std::size_t> plus(m * m), minus(m * m), times(m * m);
  for (unsigned a = 0; a < m; ++a)
    for (unsigned b = 0; b < m; ++b) {
      plus[a * m + b] = (a + b) % m;
      minus[a * m + b] = (a + m - b) % m;
      times[a * m + b] = (a * b) % m;
    }
  R.setFunction("+", std::move(plus));
  R.setFunction("-", std::move(minus));
  R.setFunction("*", std::move(times));
  R.setConstant("0", 0);
  R.setConstant("1", 1 % m);
  R.validate();
  return R;
}

FiniteStructure gammaTournament(int n) {
  if (n < 2 || n > 4) throw FragcalcError("tournaments are provided for 2 <= n <= 4");
  FiniteStructure T(graphLanguage(), "gamma" + std::to_string(n));
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  T.setCarrier("vertex", std::move(names));
  auto edge = [&](int from, int to) {
    T.setRelationEntry("E", {static_cast<std::size_t>(from - 1), static_cast<std::size_t>(to - 1)},
                       true);
  };
  if (n == 2) {
    edge(1, 2);
  } else {
    edge(1, 2);
    edge(2, 3);
    edge(3, 1);
    if (n == 4) {
      edge(4, 1);
      edge(4, 2);
      edge(4, 3);
    }
  }
  T.validate();
  return T;
}

FiniteStructure disjointUnion(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.language() == b.language()))
    throw FragcalcError("disjoint unions need a shared language");
  const Language& lang = a.language();
  for (const Symbol& sym : lang.symbols())
    if (sym.kind != SymbolKind::Relation)
      throw FragcalcError("disjoint unions are defined for purely relational languages");
  FiniteStructure u(lang, a.name() + "+" + b.name());
  std::map<std::string, std::size_t> offset;
  for (const Sort& s : lang.sorts()) {
    std::size_t na = a.carrierSize(s.name), nb = b.carrierSize(s.name);
    offset[s.name] = na;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < na + nb; ++i) names.push_back(std::to_string(i));
    u.setCarrier(s.name, std::move(names));
  }
  for (const Symbol& sym : lang.symbols()) {
    for (int side = 0; side < 2; ++side) {
      const FiniteStructure& part = side == 0 ? a : b;
      std::vector<std::size_t> args(sym.arity(), 0);
      for (;;) {
        if (part.relationValue(sym.name, args)) {
          std::vector<std::size_t> shifted = args;
          if (side == 1)
            for (std::size_t i = 0; i < shifted.size(); ++i)
              shifted[i] += offset[sym.argSorts[i]];
          u.setRelationEntry(sym.name, shifted, true);
        }
        std::size_t i = args.size();
        for (; i-- > 0;) {
          if (++args[i] < part.carrierSize(sym.argSorts[i])) break;
          args[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
    }
  }
  u.validate();
  return u;
}

std::pair<FiniteStructure, FiniteStructure> tournamentModels(int c) {
  if (c < 1) throw FragcalcError("the copy count must be at least 1");
  FiniteStructure n = gammaTournament(2);
  for (int i = 1; i < c; ++i) n = disjointUnion(n, gammaTournament(2));
  for (int i = 0; i < c; ++i) n = disjointUnion(n, gammaTournament(4));
  FiniteStructure m = disjointUnion(n, gammaTournament(3));
  n.setName("N" + std::to_string(c));
  m.setName("M" + std::to_string(c));
  return {std::move(n), std::move(m)};
}

FormulaPtr sigmaSentence() {
  auto v = [](const std::string& n) { return var(n, "vertex"); };
  auto E = [&](const std::string& x, const std::string& y) { return rel("E", {v(x), v(y)}); };
  const std::string zs[3] = {"z1", "z2", "z3"};
  std::vector<FormulaPtr> parts;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) parts.push_back(neg(eq(v(zs[i]), v(zs[j]))));
  for (int i = 0; i < 3; ++i) parts.push_back(disj(E("x", zs[i]), E(zs[i], "x")));
  FormulaPtr three =
      exists("z1", "vertex", exists("z2", "vertex", exists("z3", "vertex", conjAll(parts))));
  FormulaPtr noSucc = forall("y", "vertex", neg(E("x", "y")));
  FormulaPtr noPred = forall("y", "vertex", neg(E("y", "x")));
  return forall("x", "vertex", disj(disj(noSucc, noPred), three));
}

FiniteStructure valTrivialStructure(unsigned q) {
  FiniteStructure F = finiteField(q);
  FiniteStructure S(valLanguage(), "valtriv" + std::to_string(q));
  S.setCarrier("field", F.carrier("field"));
  S.setCarrier("group", {"0", "inf"});
  S.setCarrier("residue", F.carrier("field"));

  auto copyRing = [&](const char* from, const char* to) {
    std::vector<std::size_t> table(q * q);
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) table[a * q + b] = F.functionValue(from, {a, b});
    S.setFunction(to, std::move(table));
  };
  copyRing("+", "+");
  copyRing("-", "-");
  copyRing("*", "*");
  copyRing("+", "+r");
  copyRing("-", "-r");
  copyRing("*", "*r");
  S.setConstant("0", 0);
  S.setConstant("1", 1);
  S.setConstant("0r", 0);
  S.setConstant("1r", 1);

  // Value group {0 < inf}; the operations treat inf as absorbing.
  S.setFunction("+g", {0, 1, 1, 1});
  S.setFunction("-g", {0, 1, 1, 1});
  S.setConstant("0g", 0);
  S.setConstant("infg", 1);
  S.setRelation("<=g", {1, 1, 0, 1});
  S.setRelation("<g", {0, 1, 0, 0});

  std::vector<std::size_t> valuation(q, 0), residueMap(q);
  valuation[0] = 1;  // v(0) = inf
  for (std::size_t i = 0; i < q; ++i) residueMap[i] = i;
  S.setFunction("v", std::move(valuation));
  S.setFunction("res", std::move(residueMap));
  S.validate();
  return S;
}

}  // namespace fragcalc
