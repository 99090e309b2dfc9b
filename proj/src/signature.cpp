#include "fragcalc/signature.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fragcalc {

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Function: return "func";
    case SymbolKind::Relation: return "rel";
    case SymbolKind::Constant: return "const";
  }
  return "?";
}

Language::Language(std::string name, std::vector<Sort> sorts, std::vector<Symbol> symbols,
                   std::map<std::string, unsigned> presentation)
    : name_(std::move(name)), sorts_(std::move(sorts)), symbols_(std::move(symbols)) {
  std::set<std::string> seenSorts;
  for (const Sort& s : sorts_) {
    if (s.name.empty()) throw FragcalcError("language '" + name_ + "': empty sort name");
    if (!seenSorts.insert(s.name).second)
      throw FragcalcError("language '" + name_ + "': duplicate sort '" + s.name + "'");
  }
  std::set<std::string> seenSymbols;
  for (const Symbol& sym : symbols_) {
    if (sym.name.empty()) throw FragcalcError("language '" + name_ + "': empty symbol name");
    if (!seenSymbols.insert(sym.name).second)
      throw FragcalcError("language '" + name_ + "': duplicate symbol '" + sym.name + "'");
    for (const std::string& a : sym.argSorts)
      if (!hasSort(a))
        throw FragcalcError("language '" + name_ + "': symbol '" + sym.name +
                            "' uses unknown sort '" + a + "'");
    switch (sym.kind) {
      case SymbolKind::Function:
        if (sym.argSorts.empty())
          throw FragcalcError("function '" + sym.name + "' needs at least one argument");
        if (!hasSort(sym.resultSort))
          throw FragcalcError("function '" + sym.name + "' has unknown result sort");
        break;
      case SymbolKind::Relation:
        if (sym.argSorts.empty())
          throw FragcalcError("relation '" + sym.name + "' needs at least one argument");
        if (!sym.resultSort.empty())
          throw FragcalcError("relation '" + sym.name + "' must not have a result sort");
        break;
      case SymbolKind::Constant:
        if (!sym.argSorts.empty())
          throw FragcalcError("constant '" + sym.name + "' must not take arguments");
        if (!hasSort(sym.resultSort))
          throw FragcalcError("constant '" + sym.name + "' has unknown result sort");
        break;
    }
  }
  if (presentation.empty()) {
    for (unsigned i = 0; i < symbols_.size(); ++i) codes_[symbols_[i].name] = i;
  } else {
    std::set<unsigned> used;
    for (const Symbol& sym : symbols_) {
      auto it = presentation.find(sym.name);
      if (it == presentation.end())
        throw FragcalcError("presentation misses symbol '" + sym.name + "'");
      if (!used.insert(it->second).second)
        throw FragcalcError("presentation is not injective at code " + std::to_string(it->second));
    }
    codes_ = std::move(presentation);
  }
}

bool Language::hasSort(const std::string& sortName) const {
  return std::any_of(sorts_.begin(), sorts_.end(),
                     [&](const Sort& s) { return s.name == sortName; });
}

std::size_t Language::sortIndex(const std::string& sortName) const {
  for (std::size_t i = 0; i < sorts_.size(); ++i)
    if (sorts_[i].name == sortName) return i;
  throw FragcalcError("language '" + name_ + "' has no sort '" + sortName + "'");
}

const Symbol* Language::find(const std::string& symbolName) const {
  for (const Symbol& sym : symbols_)
    if (sym.name == symbolName) return &sym;
  return nullptr;
}

std::optional<Symbol> Language::resolveConstant(const std::string& name) const {
  if (const Symbol* sym = find(name))
    return sym->kind == SymbolKind::Constant ? std::optional<Symbol>(*sym) : std::nullopt;
  if (!literalSort_.empty() && !name.empty() && name.front() == '{')
    return Symbol{name, SymbolKind::Constant, {}, literalSort_};
  return std::nullopt;
}

Language Language::withLiteralConstants(const std::string& sortName) const {
  if (!hasSort(sortName))
    throw FragcalcError("language '" + name_ + "' has no sort '" + sortName + "'");
  Language copy = *this;
  copy.literalSort_ = sortName;
  return copy;
}

unsigned Language::code(const std::string& symbolName) const {
  auto it = codes_.find(symbolName);
  if (it == codes_.end())
    throw FragcalcError("no presentation code for symbol '" + symbolName + "'");
  return it->second;
}

const Symbol* Language::symbolByCode(unsigned code) const {
  for (const auto& [name, c] : codes_)
    if (c == code) return find(name);
  return nullptr;
}

Language Language::extendWithConstants(const std::vector<std::string>& names,
                                       const std::string& sortName,
                                       const std::string& newName) const {
  if (!hasSort(sortName))
    throw FragcalcError("language '" + name_ + "' has no sort '" + sortName + "'");
  std::vector<Symbol> symbols = symbols_;
  for (const std::string& n : names) {
    if (find(n))
      throw FragcalcError("cannot add constant '" + n + "': symbol already declared");
    symbols.push_back(Symbol{n, SymbolKind::Constant, {}, sortName});
  }
  std::string name = newName;
  if (name.empty()) {
    name = name_ + "(";
    for (std::size_t i = 0; i < names.size(); ++i) name += (i ? "," : "") + names[i];
    name += ")";
  }
  Language ext(std::move(name), sorts_, std::move(symbols));
  ext.literalSort_ = literalSort_;
  return ext;
}

std::string Language::to_text() const {
  std::ostringstream out;
  out << "language " << name_ << "\n";
  for (const Sort& s : sorts_) out << "sort " << s.name << "\n";
  for (const Symbol& sym : symbols_) {
    out << to_string(sym.kind) << " " << sym.name << " :";
    for (const std::string& a : sym.argSorts) out << " " << a;
    if (sym.kind == SymbolKind::Function) out << " ->";
    if (!sym.resultSort.empty()) out << " " << sym.resultSort;
    out << "\n";
  }
  return out.str();
}

Language Language::fromText(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string name;
  std::vector<Sort> sorts;
  std::vector<Symbol> symbols;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == '#') continue;
    auto fail = [&](const std::string& msg) {
      throw FragcalcError("language text, line " + std::to_string(lineNo) + ": " + msg);
    };
    if (head == "language") {
      if (!(ls >> name)) fail("expected a name after 'language'");
    } else if (head == "sort") {
      std::string s;
      if (!(ls >> s)) fail("expected a sort name");
      sorts.push_back(Sort{s});
    } else if (head == "func" || head == "rel" || head == "const" || head == "map") {
      Symbol sym;
      sym.kind = head == "rel" ? SymbolKind::Relation
               : head == "const" ? SymbolKind::Constant
                                 : SymbolKind::Function;
      std::string tok;
      if (!(ls >> sym.name >> tok) || tok != ":") fail("expected 'NAME :'");
      std::vector<std::string> rest;
      while (ls >> tok) rest.push_back(tok);
      if (sym.kind == SymbolKind::Constant) {
        if (rest.size() != 1) fail("constant declaration takes a single sort");
        sym.resultSort = rest[0];
      } else if (sym.kind == SymbolKind::Relation) {
        if (rest.empty()) fail("relation declaration needs argument sorts");
        sym.argSorts = rest;
      } else {
        auto arrow = std::find(rest.begin(), rest.end(), "->");
        if (arrow == rest.end() || arrow + 1 != rest.end() - 1)
          fail("function declaration needs 'ARGS... -> RESULT'");
        sym.argSorts.assign(rest.begin(), arrow);
        if (sym.argSorts.empty()) fail("function declaration needs argument sorts");
        sym.resultSort = rest.back();
      }
      symbols.push_back(std::move(sym));
    } else {
      fail("unknown directive '" + head + "'");
    }
  }
  if (name.empty()) throw FragcalcError("language text: missing 'language NAME' line");
  return Language(name, std::move(sorts), std::move(symbols));
}

Language Language::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FragcalcError("cannot open language file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fromText(buf.str());
}

bool operator==(const Language& a, const Language& b) {
  return a.name_ == b.name_ && a.sorts_ == b.sorts_ && a.symbols_ == b.symbols_ &&
         a.codes_ == b.codes_ && a.literalSort_ == b.literalSort_;
}

std::optional<LanguageInclusion> LanguageInclusion::of(Language sub, Language sup) {
  for (const Sort& s : sub.sorts())
    if (!sup.hasSort(s.name)) return std::nullopt;
  for (const Symbol& sym : sub.symbols()) {
    const Symbol* other = sup.find(sym.name);
    if (!other || other->kind != sym.kind || other->argSorts != sym.argSorts ||
        other->resultSort != sym.resultSort)
      return std::nullopt;
  }
  return LanguageInclusion(std::move(sub), std::move(sup));
}

LanguageInclusion LanguageInclusion::compose(const LanguageInclusion& outer) const {
  if (!(sup_ == outer.sub_))
    throw FragcalcError("language inclusions do not compose: middle languages differ");
  return LanguageInclusion(sub_, outer.sup_);
}

const Language& ringLanguage() {
  static const Language lang(
      "ring", {Sort{"field"}},
      {
          Symbol{"+", SymbolKind::Function, {"field", "field"}, "field"},
          Symbol{"-", SymbolKind::Function, {"field", "field"}, "field"},
          Symbol{"*", SymbolKind::Function, {"field", "field"}, "field"},
          Symbol{"0", SymbolKind::Constant, {}, "field"},
          Symbol{"1", SymbolKind::Constant, {}, "field"},
      });
  return lang;
}

const Language& graphLanguage() {
  static const Language lang("graph", {Sort{"vertex"}},
                             {Symbol{"E", SymbolKind::Relation, {"vertex", "vertex"}, ""}});
  return lang;
}

const Language& valLanguage() {
  static const Language lang(
      "val", {Sort{"field"}, Sort{"group"}, Sort{"residue"}},
      {
          Symbol{"+", SymbolKind::Function, {"field", "field"}, "field"},
          Symbol{"-", SymbolKind::Function, {"field", "field"}, "field"},
          Symbol{"*", SymbolKind::Function, {"field", "field"}, "field"},
          Symbol{"0", SymbolKind::Constant, {}, "field"},
          Symbol{"1", SymbolKind::Constant, {}, "field"},
          Symbol{"+g", SymbolKind::Function, {"group", "group"}, "group"},
          Symbol{"-g", SymbolKind::Function, {"group", "group"}, "group"},
          Symbol{"0g", SymbolKind::Constant, {}, "group"},
          Symbol{"infg", SymbolKind::Constant, {}, "group"},
          Symbol{"<=g", SymbolKind::Relation, {"group", "group"}, ""},
          Symbol{"<g", SymbolKind::Relation, {"group", "group"}, ""},
          Symbol{"+r", SymbolKind::Function, {"residue", "residue"}, "residue"},
          Symbol{"-r", SymbolKind::Function, {"residue", "residue"}, "residue"},
          Symbol{"*r", SymbolKind::Function, {"residue", "residue"}, "residue"},
          Symbol{"0r", SymbolKind::Constant, {}, "residue"},
          Symbol{"1r", SymbolKind::Constant, {}, "residue"},
          Symbol{"v", SymbolKind::Function, {"field"}, "group"},
          Symbol{"res", SymbolKind::Function, {"field"}, "residue"},
      });
  return lang;
}

Language ringWithConstants(const std::vector<std::string>& constants) {
  return ringLanguage().extendWithConstants(constants, "field");
}

Language valWithConstants(const std::vector<std::string>& constants) {
  return valLanguage().extendWithConstants(constants, "field");
}

}  // namespace fragcalc
