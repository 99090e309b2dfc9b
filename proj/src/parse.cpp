#include "fragcalc/parse.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace fragcalc {

namespace {

struct Token {
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
    } else if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), i});
      ++i;
    } else if (c == '{') {
      std::size_t end = text.find('}', i);
      if (end == std::string::npos)
        throw FragcalcError("parse error at offset " + std::to_string(i) +
                            ": unterminated literal constant");
      out.push_back({text.substr(i, end - i + 1), i});
      i = end + 1;
    } else {
      std::size_t start = i;
      while (i < text.size() && text[i] != '(' && text[i] != ')' && text[i] != '{' &&
             text[i] != ' ' && text[i] != '\t' && text[i] != '\n' && text[i] != '\r')
        ++i;
      out.push_back({text.substr(start, i - start), start});
    }
  }
  return out;
}

/// Union-find over free-variable names used for sort inference.
struct SortSolver {
  std::map<std::string, std::string> parent;  // name -> representative
  std::map<std::string, std::string> sort;    // representative -> sort ("" unknown)

  std::string findRep(const std::string& name) {
    auto it = parent.find(name);
    if (it == parent.end()) {
      parent[name] = name;
      sort[name] = "";
      return name;
    }
    if (it->second == name) return name;
    std::string rep = findRep(it->second);
    parent[name] = rep;
    return rep;
  }

  void assign(const std::string& name, const std::string& s) {
    std::string rep = findRep(name);
    if (sort[rep].empty()) {
      sort[rep] = s;
    } else if (sort[rep] != s) {
      throw FragcalcError("variable '" + name + "' used at sorts '" + sort[rep] + "' and '" + s +
                          "'");
    }
  }

  void unite(const std::string& a, const std::string& b) {
    std::string ra = findRep(a), rb = findRep(b);
    if (ra == rb) return;
    if (sort[ra].empty()) {
      parent[ra] = rb;
    } else if (sort[rb].empty()) {
      parent[rb] = ra;
    } else if (sort[ra] == sort[rb]) {
      parent[ra] = rb;
    } else {
      throw FragcalcError("variable '" + a + "' used at sorts '" + sort[ra] + "' and '" +
                          sort[rb] + "'");
    }
  }

  std::string resolved(const std::string& name) { return sort[findRep(name)]; }
};

struct Parser {
  const Language& lang;
  std::vector<Token> tokens;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    std::size_t off = pos < tokens.size() ? tokens[pos].offset : 0;
    throw FragcalcError("parse error at offset " + std::to_string(off) + ": " + msg);
  }

  const Token& peek() {
    if (pos >= tokens.size()) fail("unexpected end of input");
    return tokens[pos];
  }

  Token next() {
    Token t = peek();
    ++pos;
    return t;
  }

  void expect(const std::string& text) {
    if (next().text != text) {
      --pos;
      fail("expected '" + text + "'");
    }
  }

  bool isBound(const std::vector<std::pair<std::string, std::string>>& scope,
               const std::string& name, std::string* sortOut) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == name) {
        *sortOut = it->second;
        return true;
      }
    }
    return false;
  }

  TermPtr parseTermNode(std::vector<std::pair<std::string, std::string>>& scope) {
    Token t = next();
    if (t.text == ")") {
      --pos;
      fail("expected a term");
    }
    if (t.text == "(") {
      Token fn = next();
      if (fn.text == "(" || fn.text == ")") {
        --pos;
        fail("expected a function symbol");
      }
      std::vector<TermPtr> args;
      while (peek().text != ")") args.push_back(parseTermNode(scope));
      expect(")");
      return apply(fn.text, std::move(args));
    }
    std::string boundSort;
    if (isBound(scope, t.text, &boundSort)) return var(t.text, boundSort);
    if (lang.resolveConstant(t.text)) return constant(t.text);
    return var(t.text, "");  // free; sort inferred afterwards
  }

  FormulaPtr parseFormulaNode(std::vector<std::pair<std::string, std::string>>& scope) {
    Token t = next();
    if (t.text == "true") return top();
    if (t.text == "false") return bot();
    if (t.text != "(") {
      --pos;
      fail("expected a formula");
    }
    Token head = next();
    if (head.text == "=") {
      TermPtr l = parseTermNode(scope);
      TermPtr r = parseTermNode(scope);
      expect(")");
      return eq(std::move(l), std::move(r));
    }
    if (head.text == "not") {
      FormulaPtr f = parseFormulaNode(scope);
      expect(")");
      return neg(std::move(f));
    }
    if (head.text == "and" || head.text == "or") {
      std::vector<FormulaPtr> fs;
      while (peek().text != ")") fs.push_back(parseFormulaNode(scope));
      expect(")");
      if (fs.size() < 2) fail("'" + head.text + "' needs at least two operands");
      return head.text == "and" ? conjAll(fs) : disjAll(fs);
    }
    if (head.text == "implies") {
      FormulaPtr a = parseFormulaNode(scope);
      FormulaPtr b = parseFormulaNode(scope);
      expect(")");
      return disj(neg(std::move(a)), std::move(b));
    }
    if (head.text == "iff") {
      FormulaPtr a = parseFormulaNode(scope);
      FormulaPtr b = parseFormulaNode(scope);
      expect(")");
      return conj(disj(neg(a), b), disj(neg(b), a));
    }
    if (head.text == "forall" || head.text == "exists") {
      expect("(");
      Token name = next();
      if (name.text == "(" || name.text == ")") {
        --pos;
        fail("expected a variable name");
      }
      Token sortTok = next();
      if (sortTok.text == "(" || sortTok.text == ")") {
        --pos;
        fail("expected a sort name");
      }
      if (!lang.hasSort(sortTok.text)) fail("unknown sort '" + sortTok.text + "'");
      expect(")");
      scope.emplace_back(name.text, sortTok.text);
      FormulaPtr body = parseFormulaNode(scope);
      scope.pop_back();
      expect(")");
      return head.text == "forall" ? forall(name.text, sortTok.text, std::move(body))
                                   : exists(name.text, sortTok.text, std::move(body));
    }
    // Anything else heads an atomic relation.
    const Symbol* sym = lang.find(head.text);
    if (!sym || sym->kind != SymbolKind::Relation)
      fail("unknown connective or relation '" + head.text + "'");
    std::vector<TermPtr> args;
    while (peek().text != ")") args.push_back(parseTermNode(scope));
    expect(")");
    return rel(head.text, std::move(args));
  }
};

// The sort a term determines on its own, or "" for a bare unresolved variable
// and for terms headed by unknown symbols (left for wellSorted to report).
std::string determinedSort(const Language& lang, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->sort;
    case Term::Kind::Const: {
      auto sym = lang.resolveConstant(t->name);
      return sym ? sym->resultSort : "";
    }
    case Term::Kind::Apply: {
      const Symbol* sym = lang.find(t->name);
      return sym && sym->kind == SymbolKind::Function ? sym->resultSort : "";
    }
  }
  return "";
}

void collectTermConstraints(const Language& lang, const TermPtr& t, SortSolver& solver) {
  if (t->kind != Term::Kind::Apply) return;
  const Symbol* sym = lang.find(t->name);
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    const TermPtr& a = t->args[i];
    if (a->kind == Term::Kind::Var && a->sort.empty() && sym &&
        sym->kind == SymbolKind::Function && i < sym->argSorts.size())
      solver.assign(a->name, sym->argSorts[i]);
    collectTermConstraints(lang, a, solver);
  }
}

void collectConstraints(const Language& lang, const FormulaPtr& f, SortSolver& solver) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Eq: {
      const TermPtr& l = f->args[0];
      const TermPtr& r = f->args[1];
      std::string dl = determinedSort(lang, l);
      std::string dr = determinedSort(lang, r);
      bool lFree = l->kind == Term::Kind::Var && l->sort.empty();
      bool rFree = r->kind == Term::Kind::Var && r->sort.empty();
      if (lFree && !dr.empty()) solver.assign(l->name, dr);
      if (rFree && !dl.empty()) solver.assign(r->name, dl);
      if (lFree && rFree) solver.unite(l->name, r->name);
      collectTermConstraints(lang, l, solver);
      collectTermConstraints(lang, r, solver);
      return;
    }
    case Formula::Kind::Rel: {
      const Symbol* sym = lang.find(f->name);
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        const TermPtr& a = f->args[i];
        if (a->kind == Term::Kind::Var && a->sort.empty() && sym && i < sym->argSorts.size())
          solver.assign(a->name, sym->argSorts[i]);
        collectTermConstraints(lang, a, solver);
      }
      return;
    }
    case Formula::Kind::Not:
      collectConstraints(lang, f->left, solver);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collectConstraints(lang, f->left, solver);
      collectConstraints(lang, f->right, solver);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      collectConstraints(lang, f->left, solver);
      return;
  }
}

TermPtr fillTermSorts(const TermPtr& t, SortSolver& solver, const Language& lang) {
  switch (t->kind) {
    case Term::Kind::Var: {
      if (!t->sort.empty()) return t;
      std::string s = solver.resolved(t->name);
      if (s.empty()) {
        if (lang.sorts().size() == 1)
          s = lang.sorts()[0].name;
        else
          throw FragcalcError("cannot infer the sort of variable '" + t->name + "'");
      }
      return var(t->name, s);
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const TermPtr& a : t->args) args.push_back(fillTermSorts(a, solver, lang));
      return apply(t->name, std::move(args));
    }
  }
  return t;
}

FormulaPtr fillSorts(const FormulaPtr& f, SortSolver& solver, const Language& lang) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Eq:
      return eq(fillTermSorts(f->args[0], solver, lang), fillTermSorts(f->args[1], solver, lang));
    case Formula::Kind::Rel: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const TermPtr& a : f->args) args.push_back(fillTermSorts(a, solver, lang));
      return rel(f->name, std::move(args));
    }
    case Formula::Kind::Not:
      return neg(fillSorts(f->left, solver, lang));
    case Formula::Kind::And:
      return conj(fillSorts(f->left, solver, lang), fillSorts(f->right, solver, lang));
    case Formula::Kind::Or:
      return disj(fillSorts(f->left, solver, lang), fillSorts(f->right, solver, lang));
    case Formula::Kind::Forall:
      return forall(f->name, f->sort, fillSorts(f->left, solver, lang));
    case Formula::Kind::Exists:
      return exists(f->name, f->sort, fillSorts(f->left, solver, lang));
  }
  return f;
}

// One name, one sort, across binders and free occurrences alike.
void enforceNameSortUniqueness(const FormulaPtr& f, std::map<std::string, std::string>& seen) {
  struct Walker {
    std::map<std::string, std::string>& seen;
    void check(const std::string& name, const std::string& sort) {
      auto [it, inserted] = seen.emplace(name, sort);
      if (!inserted && it->second != sort)
        throw FragcalcError("variable name '" + name + "' is used at sorts '" + it->second +
                            "' and '" + sort + "'");
    }
    void term(const TermPtr& t) {
      if (t->kind == Term::Kind::Var)
        check(t->name, t->sort);
      else
        for (const TermPtr& a : t->args) term(a);
    }
    void formula(const FormulaPtr& f) {
      for (const TermPtr& a : f->args) term(a);
      if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists)
        check(f->name, f->sort);
      if (f->left) formula(f->left);
      if (f->right) formula(f->right);
    }
  } walker{seen};
  walker.formula(f);
}

}  // namespace

FormulaPtr parseFormula(const Language& lang, const std::string& text) {
  Parser parser{lang, tokenize(text)};
  if (parser.tokens.empty()) throw FragcalcError("parse error: empty input");
  std::vector<std::pair<std::string, std::string>> scope;
  FormulaPtr raw = parser.parseFormulaNode(scope);
  if (parser.pos != parser.tokens.size()) parser.fail("trailing input after formula");
  SortSolver solver;
  collectConstraints(lang, raw, solver);
  FormulaPtr filled = fillSorts(raw, solver, lang);
  std::map<std::string, std::string> seen;
  enforceNameSortUniqueness(filled, seen);
  return filled;
}

TermPtr parseTerm(const Language& lang, const std::string& text) {
  Parser parser{lang, tokenize(text)};
  if (parser.tokens.empty()) throw FragcalcError("parse error: empty input");
  std::vector<std::pair<std::string, std::string>> scope;
  TermPtr raw = parser.parseTermNode(scope);
  if (parser.pos != parser.tokens.size()) parser.fail("trailing input after term");
  SortSolver solver;
  collectTermConstraints(lang, raw, solver);
  // A bare variable at top level gets the language's only sort if unique.
  return fillTermSorts(raw, solver, lang);
}

}  // namespace fragcalc
