#include "fragcalc/formula.hpp"

#include <algorithm>
#include <sstream>

namespace fragcalc {

TermPtr var(std::string name, std::string sort) {
  return std::make_shared<Term>(Term{Term::Kind::Var, std::move(name), std::move(sort), {}});
}

TermPtr constant(std::string name) {
  return std::make_shared<Term>(Term{Term::Kind::Const, std::move(name), "", {}});
}

TermPtr apply(std::string fn, std::vector<TermPtr> args) {
  return std::make_shared<Term>(Term{Term::Kind::Apply, std::move(fn), "", std::move(args)});
}

namespace {

FormulaPtr make(Formula f) { return std::make_shared<Formula>(std::move(f)); }

}  // namespace

FormulaPtr top() { return make({Formula::Kind::Top, "", "", {}, nullptr, nullptr}); }
FormulaPtr bot() { return make({Formula::Kind::Bot, "", "", {}, nullptr, nullptr}); }

FormulaPtr eq(TermPtr lhs, TermPtr rhs) {
  return make({Formula::Kind::Eq, "", "", {std::move(lhs), std::move(rhs)}, nullptr, nullptr});
}

FormulaPtr rel(std::string name, std::vector<TermPtr> args) {
  return make({Formula::Kind::Rel, std::move(name), "", std::move(args), nullptr, nullptr});
}

FormulaPtr neg(FormulaPtr f) {
  return make({Formula::Kind::Not, "", "", {}, std::move(f), nullptr});
}

FormulaPtr conj(FormulaPtr l, FormulaPtr r) {
  return make({Formula::Kind::And, "", "", {}, std::move(l), std::move(r)});
}

FormulaPtr disj(FormulaPtr l, FormulaPtr r) {
  return make({Formula::Kind::Or, "", "", {}, std::move(l), std::move(r)});
}

FormulaPtr forall(std::string v, std::string sort, FormulaPtr body) {
  return make({Formula::Kind::Forall, std::move(v), std::move(sort), {}, std::move(body), nullptr});
}

FormulaPtr exists(std::string v, std::string sort, FormulaPtr body) {
  return make({Formula::Kind::Exists, std::move(v), std::move(sort), {}, std::move(body), nullptr});
}

FormulaPtr conjAll(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return top();
  FormulaPtr acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

FormulaPtr disjAll(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return bot();
  FormulaPtr acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

namespace {

void freeVarsTerm(const TermPtr& t, const std::vector<std::string>& bound, VariableSet& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (std::find(bound.begin(), bound.end(), t->name) == bound.end()) {
        TypedVar tv{t->name, t->sort};
        if (std::find_if(out.begin(), out.end(), [&](const TypedVar& v) {
              return v.name == tv.name;
            }) == out.end())
          out.push_back(tv);
      }
      break;
    case Term::Kind::Const:
      break;
    case Term::Kind::Apply:
      for (const TermPtr& a : t->args) freeVarsTerm(a, bound, out);
      break;
  }
}

void freeVarsFormula(const FormulaPtr& f, std::vector<std::string>& bound, VariableSet& out) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      break;
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      for (const TermPtr& a : f->args) freeVarsTerm(a, bound, out);
      break;
    case Formula::Kind::Not:
      freeVarsFormula(f->left, bound, out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      freeVarsFormula(f->left, bound, out);
      freeVarsFormula(f->right, bound, out);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      bound.push_back(f->name);
      freeVarsFormula(f->left, bound, out);
      bound.pop_back();
      break;
  }
}

}  // namespace

VariableSet freeVariables(const FormulaPtr& f) {
  VariableSet out;
  std::vector<std::string> bound;
  freeVarsFormula(f, bound, out);
  return out;
}

std::set<std::string> freeVariableNames(const FormulaPtr& f) {
  std::set<std::string> out;
  for (const TypedVar& v : freeVariables(f)) out.insert(v.name);
  return out;
}

void collectNames(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      out.insert(t->name);
      break;
    case Term::Kind::Const:
      break;
    case Term::Kind::Apply:
      for (const TermPtr& a : t->args) collectNames(a, out);
      break;
  }
}

namespace {

void collectNamesFormula(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      break;
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      for (const TermPtr& a : f->args) collectNames(a, out);
      break;
    case Formula::Kind::Not:
      collectNamesFormula(f->left, out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collectNamesFormula(f->left, out);
      collectNamesFormula(f->right, out);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out.insert(f->name);
      collectNamesFormula(f->left, out);
      break;
  }
}

}  // namespace

std::set<std::string> allNames(const FormulaPtr& f) {
  std::set<std::string> out;
  collectNamesFormula(f, out);
  return out;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->kind == Term::Kind::Var && a->sort != b->sort) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->name != b->name || a->sort != b->sort) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  if ((a->left == nullptr) != (b->left == nullptr)) return false;
  if (a->left && !equal(a->left, b->left)) return false;
  if ((a->right == nullptr) != (b->right == nullptr)) return false;
  if (a->right && !equal(a->right, b->right)) return false;
  return true;
}

std::size_t astSize(const TermPtr& t) {
  std::size_t n = 1;
  for (const TermPtr& a : t->args) n += astSize(a);
  return n;
}

std::size_t astSize(const FormulaPtr& f) {
  std::size_t n = 1;
  for (const TermPtr& a : f->args) n += astSize(a);
  if (f->left) n += astSize(f->left);
  if (f->right) n += astSize(f->right);
  return n;
}

bool isQuantifierFree(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return false;
    case Formula::Kind::Not:
      return isQuantifierFree(f->left);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return isQuantifierFree(f->left) && isQuantifierFree(f->right);
    default:
      return true;
  }
}

std::string freshName(const std::set<std::string>& used) {
  for (unsigned i = 1;; ++i) {
    std::string candidate = "_" + std::to_string(i);
    if (!used.count(candidate)) return candidate;
  }
}

std::string nameAvoiding(const std::string& preferred, const std::set<std::string>& used) {
  return used.count(preferred) ? freshName(used) : preferred;
}

namespace {

TermPtr renameTerm(const TermPtr& t, const std::map<std::string, std::string>& ren) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = ren.find(t->name);
      return it == ren.end() ? t : var(it->second, t->sort);
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const TermPtr& a : t->args) args.push_back(renameTerm(a, ren));
      return apply(t->name, std::move(args));
    }
  }
  return t;
}

FormulaPtr renameFormula(const FormulaPtr& f, std::map<std::string, std::string> ren) {
  if (ren.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Eq:
      return eq(renameTerm(f->args[0], ren), renameTerm(f->args[1], ren));
    case Formula::Kind::Rel: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const TermPtr& a : f->args) args.push_back(renameTerm(a, ren));
      return rel(f->name, std::move(args));
    }
    case Formula::Kind::Not:
      return neg(renameFormula(f->left, ren));
    case Formula::Kind::And:
      return conj(renameFormula(f->left, ren), renameFormula(f->right, ren));
    case Formula::Kind::Or:
      return disj(renameFormula(f->left, ren), renameFormula(f->right, ren));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::map<std::string, std::string> inner = ren;
      inner.erase(f->name);
      std::string binder = f->name;
      FormulaPtr body = f->left;
      if (!inner.empty()) {
        // Capture: some active renaming maps a variable free in the body to
        // this binder's name. Rename the binder out of the way first.
        bool captured = false;
        std::set<std::string> bodyFree;
        for (const auto& [from, to] : inner) {
          if (to != binder) continue;
          if (bodyFree.empty()) bodyFree = freeVariableNames(body);
          if (bodyFree.count(from)) {
            captured = true;
            break;
          }
        }
        if (captured) {
          std::set<std::string> used = allNames(body);
          for (const auto& [from, to] : inner) {
            used.insert(from);
            used.insert(to);
          }
          used.insert(binder);
          std::string fresh = freshName(used);
          inner[binder] = fresh;
          binder = fresh;
        }
      }
      FormulaPtr newBody = inner.empty() ? body : renameFormula(body, std::move(inner));
      return f->kind == Formula::Kind::Forall ? forall(binder, f->sort, newBody)
                                              : exists(binder, f->sort, newBody);
    }
  }
  return f;
}

}  // namespace

FormulaPtr substituteVars(const FormulaPtr& f, const std::map<std::string, std::string>& renaming) {
  return renameFormula(f, renaming);
}

FormulaPtr substituteVar(const FormulaPtr& f, const std::string& from, const std::string& to) {
  std::string fromSort, toSort;
  for (const TypedVar& v : freeVariables(f)) {
    if (v.name == from) fromSort = v.sort;
    if (v.name == to) toSort = v.sort;
  }
  if (!fromSort.empty() && !toSort.empty() && fromSort != toSort)
    throw FragcalcError("cannot substitute '" + to + "' (sort " + toSort + ") for '" + from +
                        "' (sort " + fromSort + "): sorts differ");
  return substituteVars(f, {{from, to}});
}

namespace {

TermPtr substTerm(const TermPtr& t, const std::map<std::string, TermPtr>& env) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      return it == env.end() ? t : it->second;
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const TermPtr& a : t->args) args.push_back(substTerm(a, env));
      return apply(t->name, std::move(args));
    }
  }
  return t;
}

FormulaPtr substFormula(const FormulaPtr& f, std::map<std::string, TermPtr> env) {
  if (env.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Eq:
      return eq(substTerm(f->args[0], env), substTerm(f->args[1], env));
    case Formula::Kind::Rel: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const TermPtr& a : f->args) args.push_back(substTerm(a, env));
      return rel(f->name, std::move(args));
    }
    case Formula::Kind::Not:
      return neg(substFormula(f->left, env));
    case Formula::Kind::And:
      return conj(substFormula(f->left, env), substFormula(f->right, env));
    case Formula::Kind::Or:
      return disj(substFormula(f->left, env), substFormula(f->right, env));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::map<std::string, TermPtr> inner = env;
      inner.erase(f->name);
      std::string binder = f->name;
      FormulaPtr body = f->left;
      if (!inner.empty()) {
        std::set<std::string> bodyFree = freeVariableNames(body);
        bool captured = false;
        for (const auto& [from, term] : inner) {
          if (!bodyFree.count(from)) continue;
          std::set<std::string> termVars;
          collectNames(term, termVars);
          if (termVars.count(binder)) {
            captured = true;
            break;
          }
        }
        if (captured) {
          std::set<std::string> used = allNames(body);
          for (const auto& [from, term] : inner) {
            used.insert(from);
            collectNames(term, used);
          }
          used.insert(binder);
          std::string fresh = freshName(used);
          body = substituteVars(body, {{binder, fresh}});
          binder = fresh;
        }
      }
      FormulaPtr newBody = substFormula(body, std::move(inner));
      return f->kind == Formula::Kind::Forall ? forall(binder, f->sort, newBody)
                                              : exists(binder, f->sort, newBody);
    }
  }
  return f;
}

TermPtr substConstTerm(const TermPtr& t, const std::map<std::string, TermPtr>& env) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::Const: {
      auto it = env.find(t->name);
      return it == env.end() ? t : it->second;
    }
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const TermPtr& a : t->args) args.push_back(substConstTerm(a, env));
      return apply(t->name, std::move(args));
    }
  }
  return t;
}

bool mentionsConstant(const TermPtr& t, const std::map<std::string, TermPtr>& env) {
  switch (t->kind) {
    case Term::Kind::Var:
      return false;
    case Term::Kind::Const:
      return env.count(t->name) != 0;
    case Term::Kind::Apply:
      for (const TermPtr& a : t->args)
        if (mentionsConstant(a, env)) return true;
      return false;
  }
  return false;
}

bool mentionsConstant(const FormulaPtr& f, const std::map<std::string, TermPtr>& env) {
  for (const TermPtr& a : f->args)
    if (mentionsConstant(a, env)) return true;
  if (f->left && mentionsConstant(f->left, env)) return true;
  if (f->right && mentionsConstant(f->right, env)) return true;
  return false;
}

FormulaPtr substConstFormula(const FormulaPtr& f, const std::map<std::string, TermPtr>& env,
                             const std::set<std::string>& termVars) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Eq:
      return eq(substConstTerm(f->args[0], env), substConstTerm(f->args[1], env));
    case Formula::Kind::Rel: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const TermPtr& a : f->args) args.push_back(substConstTerm(a, env));
      return rel(f->name, std::move(args));
    }
    case Formula::Kind::Not:
      return neg(substConstFormula(f->left, env, termVars));
    case Formula::Kind::And:
      return conj(substConstFormula(f->left, env, termVars),
                  substConstFormula(f->right, env, termVars));
    case Formula::Kind::Or:
      return disj(substConstFormula(f->left, env, termVars),
                  substConstFormula(f->right, env, termVars));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string binder = f->name;
      FormulaPtr body = f->left;
      if (termVars.count(binder) && mentionsConstant(body, env)) {
        // A replacement term's variable would be captured by this binder.
        std::set<std::string> used = allNames(body);
        used.insert(termVars.begin(), termVars.end());
        used.insert(binder);
        std::string fresh = freshName(used);
        body = substituteVars(body, {{binder, fresh}});
        binder = fresh;
      }
      FormulaPtr newBody = substConstFormula(body, env, termVars);
      return f->kind == Formula::Kind::Forall ? forall(binder, f->sort, newBody)
                                              : exists(binder, f->sort, newBody);
    }
  }
  return f;
}

}  // namespace

FormulaPtr substituteTerms(const FormulaPtr& f, const std::map<std::string, TermPtr>& subst) {
  return substFormula(f, subst);
}

FormulaPtr substituteConstants(const FormulaPtr& f, const std::map<std::string, TermPtr>& subst) {
  if (subst.empty()) return f;
  std::set<std::string> termVars;
  for (const auto& [name, term] : subst) collectNames(term, termVars);
  return substConstFormula(f, subst, termVars);
}

namespace {

struct SortChecker {
  const Language& lang;
  std::vector<Diagnostic> diags;
  std::vector<std::pair<std::string, std::string>> scope;  // binder name -> sort
  std::map<std::string, std::string> freeSorts;

  void report(const std::string& path, const std::string& message) {
    diags.push_back(Diagnostic{path, message});
  }

  // Returns the term's sort, or "" when it could not be determined.
  std::string checkTerm(const TermPtr& t, const std::string& path) {
    switch (t->kind) {
      case Term::Kind::Var: {
        if (t->sort.empty()) {
          report(path, "variable '" + t->name + "' has no sort");
          return "";
        }
        if (!lang.hasSort(t->sort)) {
          report(path, "variable '" + t->name + "' has unknown sort '" + t->sort + "'");
          return "";
        }
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
          if (it->first == t->name) {
            if (it->second != t->sort)
              report(path, "bound variable '" + t->name + "' used with sort '" + t->sort +
                               "' but bound at sort '" + it->second + "'");
            return it->second;
          }
        }
        auto [it, inserted] = freeSorts.emplace(t->name, t->sort);
        if (!inserted && it->second != t->sort)
          report(path, "free variable '" + t->name + "' used with sorts '" + it->second +
                           "' and '" + t->sort + "'");
        return t->sort;
      }
      case Term::Kind::Const: {
        std::optional<Symbol> sym = lang.resolveConstant(t->name);
        if (!sym) {
          report(path, "unknown constant '" + t->name + "'");
          return "";
        }
        return sym->resultSort;
      }
      case Term::Kind::Apply: {
        const Symbol* sym = lang.find(t->name);
        if (!sym) {
          report(path, "unknown function '" + t->name + "'");
        } else if (sym->kind != SymbolKind::Function) {
          report(path, "symbol '" + t->name + "' is not a function");
          sym = nullptr;
        } else if (sym->arity() != t->args.size()) {
          report(path, "function '" + t->name + "' expects " + std::to_string(sym->arity()) +
                           " arguments, got " + std::to_string(t->args.size()));
          sym = nullptr;
        }
        for (std::size_t i = 0; i < t->args.size(); ++i) {
          std::string got = checkTerm(t->args[i], path + "/" + std::to_string(i));
          if (sym && !got.empty() && got != sym->argSorts[i])
            report(path + "/" + std::to_string(i),
                   "argument " + std::to_string(i) + " of '" + t->name + "' has sort '" + got +
                       "', expected '" + sym->argSorts[i] + "'");
        }
        return sym ? sym->resultSort : "";
      }
    }
    return "";
  }

  void checkFormula(const FormulaPtr& f, const std::string& path) {
    switch (f->kind) {
      case Formula::Kind::Top:
      case Formula::Kind::Bot:
        return;
      case Formula::Kind::Eq: {
        std::string l = checkTerm(f->args[0], path + "/0");
        std::string r = checkTerm(f->args[1], path + "/1");
        if (!l.empty() && !r.empty() && l != r)
          report(path, "equality between sorts '" + l + "' and '" + r + "'");
        return;
      }
      case Formula::Kind::Rel: {
        const Symbol* sym = lang.find(f->name);
        if (!sym) {
          report(path, "unknown relation '" + f->name + "'");
        } else if (sym->kind != SymbolKind::Relation) {
          report(path, "symbol '" + f->name + "' is not a relation");
          sym = nullptr;
        } else if (sym->arity() != f->args.size()) {
          report(path, "relation '" + f->name + "' expects " + std::to_string(sym->arity()) +
                           " arguments, got " + std::to_string(f->args.size()));
          sym = nullptr;
        }
        for (std::size_t i = 0; i < f->args.size(); ++i) {
          std::string got = checkTerm(f->args[i], path + "/" + std::to_string(i));
          if (sym && !got.empty() && got != sym->argSorts[i])
            report(path + "/" + std::to_string(i),
                   "argument " + std::to_string(i) + " of '" + f->name + "' has sort '" + got +
                       "', expected '" + sym->argSorts[i] + "'");
        }
        return;
      }
      case Formula::Kind::Not:
        checkFormula(f->left, path + "/0");
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        checkFormula(f->left, path + "/0");
        checkFormula(f->right, path + "/1");
        return;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
        if (!lang.hasSort(f->sort))
          report(path, "binder '" + f->name + "' has unknown sort '" + f->sort + "'");
        scope.emplace_back(f->name, f->sort);
        checkFormula(f->left, path + "/0");
        scope.pop_back();
        return;
    }
  }
};

}  // namespace

std::vector<Diagnostic> wellSorted(const Language& lang, const FormulaPtr& f) {
  SortChecker checker{lang, {}, {}, {}};
  checker.checkFormula(f, "");
  return std::move(checker.diags);
}

bool isWellSorted(const Language& lang, const FormulaPtr& f) {
  return wellSorted(lang, f).empty();
}

namespace {

void printTerm(std::ostream& os, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      os << t->name;
      return;
    case Term::Kind::Apply:
      os << "(" << t->name;
      for (const TermPtr& a : t->args) {
        os << " ";
        printTerm(os, a);
      }
      os << ")";
      return;
  }
}

void printFormula(std::ostream& os, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Top:
      os << "true";
      return;
    case Formula::Kind::Bot:
      os << "false";
      return;
    case Formula::Kind::Eq:
      os << "(= ";
      printTerm(os, f->args[0]);
      os << " ";
      printTerm(os, f->args[1]);
      os << ")";
      return;
    case Formula::Kind::Rel:
      os << "(" << f->name;
      for (const TermPtr& a : f->args) {
        os << " ";
        printTerm(os, a);
      }
      os << ")";
      return;
    case Formula::Kind::Not:
      os << "(not ";
      printFormula(os, f->left);
      os << ")";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      os << (f->kind == Formula::Kind::And ? "(and " : "(or ");
      printFormula(os, f->left);
      os << " ";
      printFormula(os, f->right);
      os << ")";
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      os << (f->kind == Formula::Kind::Forall ? "(forall (" : "(exists (") << f->name << " "
         << f->sort << ") ";
      printFormula(os, f->left);
      os << ")";
      return;
  }
}

}  // namespace

std::string to_text(const TermPtr& t) {
  std::ostringstream os;
  printTerm(os, t);
  return os.str();
}

std::string to_text(const FormulaPtr& f) {
  std::ostringstream os;
  printFormula(os, f);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const TermPtr& t) {
  printTerm(os, t);
  return os;
}

std::ostream& operator<<(std::ostream& os, const FormulaPtr& f) {
  printFormula(os, f);
  return os;
}

}  // namespace fragcalc
