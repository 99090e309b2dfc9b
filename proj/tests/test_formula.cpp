// Terms and formulas: construction, free variables, substitution (including
// capture avoidance), well-sortedness diagnostics, printing, and parsing.
#include "fragcalc/formula.hpp"

#include <gtest/gtest.h>

#include "fragcalc/parse.hpp"
#include "fragcalc/signature.hpp"

using namespace fragcalc;

namespace {

FormulaPtr ringF(const std::string& text) { return parseFormula(ringLanguage(), text); }
FormulaPtr graphF(const std::string& text) { return parseFormula(graphLanguage(), text); }

}  // namespace

TEST(Formula, PrintingMatchesGrammar) {
  FormulaPtr f = forall("x", "vertex",
                        exists("y", "vertex", rel("E", {var("x", "vertex"), var("y", "vertex")})));
  EXPECT_EQ(to_text(f), "(forall (x vertex) (exists (y vertex) (E x y)))");
  EXPECT_EQ(to_text(conj(top(), neg(bot()))), "(and true (not false))");
  TermPtr t = apply("+", {apply("*", {var("x", "field"), var("x", "field")}), constant("1")});
  EXPECT_EQ(to_text(t), "(+ (* x x) 1)");
  EXPECT_EQ(to_text(eq(t, constant("0"))), "(= (+ (* x x) 1) 0)");
}

TEST(Formula, ParseRoundTrip) {
  for (const char* text : {
           "(forall (x vertex) (exists (y vertex) (E x y)))",
           "(and (E x y) (or (not (E y x)) false))",
           "true",
       }) {
    FormulaPtr f = graphF(text);
    EXPECT_TRUE(equal(f, parseFormula(graphLanguage(), to_text(f)))) << text;
  }
  FormulaPtr f = ringF("(exists (x field) (= (* x x) (+ 1 1)))");
  EXPECT_TRUE(equal(f, parseFormula(ringLanguage(), to_text(f))));
}

TEST(Formula, ParserDesugarsAndAssociates) {
  EXPECT_EQ(to_text(graphF("(and (E x x) (E x y) (E y y))")),
            "(and (and (E x x) (E x y)) (E y y))");
  EXPECT_EQ(to_text(graphF("(implies (E x y) (E y x))")), "(or (not (E x y)) (E y x))");
  EXPECT_EQ(to_text(graphF("(iff (E x y) (E y x))")),
            "(and (or (not (E x y)) (E y x)) (or (not (E y x)) (E x y)))");
}

TEST(Formula, ParserInfersSorts) {
  // Single-sorted language: free variables default to the one sort.
  FormulaPtr f = graphF("(E x y)");
  VariableSet fv = freeVariables(f);
  ASSERT_EQ(fv.size(), 2u);
  EXPECT_EQ(fv[0], (TypedVar{"x", "vertex"}));
  EXPECT_EQ(fv[1], (TypedVar{"y", "vertex"}));

  // Multi-sorted: inferred from symbol profiles through equations.
  FormulaPtr g = parseFormula(valLanguage(), "(= (v x) g)");
  VariableSet gv = freeVariables(g);
  ASSERT_EQ(gv.size(), 2u);
  EXPECT_EQ(gv[0], (TypedVar{"x", "field"}));
  EXPECT_EQ(gv[1], (TypedVar{"g", "group"}));

  // Unconstrained variable in a multi-sorted language is an error.
  EXPECT_THROW(parseFormula(valLanguage(), "(= x y)"), FragcalcError);
  // One name at two sorts is an error.
  EXPECT_THROW(parseFormula(valLanguage(), "(and (= x 1) (= x 0g))"), FragcalcError);
}

TEST(Formula, ParserReportsPositions) {
  try {
    graphF("(and (E x y)");
    FAIL() << "expected a parse error";
  } catch (const FragcalcError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
  EXPECT_THROW(graphF("(frobnicate x)"), FragcalcError);
  EXPECT_THROW(graphF("(forall x (E x x))"), FragcalcError);      // binder needs (name sort)
  EXPECT_THROW(graphF("(forall (x edge) (E x x))"), FragcalcError);  // unknown sort
}

TEST(Formula, FreeVariablesFirstOccurrenceOrder) {
  FormulaPtr f = graphF("(and (E y x) (exists (z vertex) (E z y)))");
  VariableSet fv = freeVariables(f);
  ASSERT_EQ(fv.size(), 2u);
  EXPECT_EQ(fv[0].name, "y");
  EXPECT_EQ(fv[1].name, "x");
  EXPECT_EQ(freeVariableNames(f), (std::set<std::string>{"x", "y"}));
  EXPECT_EQ(allNames(f), (std::set<std::string>{"x", "y", "z"}));
}

TEST(Formula, AstSize) {
  EXPECT_EQ(astSize(top()), 1u);
  EXPECT_EQ(astSize(graphF("(E x y)")), 3u);
  EXPECT_EQ(astSize(graphF("(not (E x y))")), 4u);
  EXPECT_EQ(astSize(graphF("(forall (x vertex) (E x x))")), 4u);
  EXPECT_EQ(astSize(ringF("(= (+ x 1) 0)")), 5u);
}

TEST(Formula, ConjAllDisjAll) {
  EXPECT_TRUE(equal(conjAll({}), top()));
  EXPECT_TRUE(equal(disjAll({}), bot()));
  FormulaPtr a = graphF("(E x x)");
  EXPECT_TRUE(equal(conjAll({a}), a));
  EXPECT_EQ(to_text(conjAll({a, a, a})), "(and (and (E x x) (E x x)) (E x x))");
}

TEST(Formula, SubstituteVarsAvoidsCapture) {
  // Renaming y -> x under a binder for x must rename the binder first.
  FormulaPtr f = graphF("(exists (x vertex) (E x y))");
  FormulaPtr g = substituteVars(f, {{"y", "x"}});
  ASSERT_EQ(g->kind, Formula::Kind::Exists);
  EXPECT_NE(g->name, "x");
  EXPECT_EQ(to_text(g->left), "(E " + g->name + " x)");
  // Plain renaming without a clash keeps the binder.
  FormulaPtr h = substituteVars(f, {{"y", "w"}});
  EXPECT_EQ(to_text(h), "(exists (x vertex) (E x w))");
  // Bound occurrences are untouched.
  FormulaPtr k = substituteVars(graphF("(exists (x vertex) (E x x))"), {{"x", "y"}});
  EXPECT_EQ(to_text(k), "(exists (x vertex) (E x x))");
}

TEST(Formula, SubstituteVarSortCheck) {
  FormulaPtr f = parseFormula(valLanguage(), "(and (= (v x) 0g) (= y 1))");
  // x: field, y: field; renaming x -> y is fine.
  EXPECT_NO_THROW(substituteVar(f, "x", "y"));
  FormulaPtr g = parseFormula(valLanguage(), "(and (= (v x) h) (= x 1))");
  // h: group; renaming x (field) -> h clashes.
  EXPECT_THROW(substituteVar(g, "x", "h"), FragcalcError);
}

TEST(Formula, SubstituteTermsAvoidsCapture) {
  // x := y+1 under a binder for y.
  FormulaPtr f = ringF("(forall (y field) (= (* x y) 0))");
  FormulaPtr g = substituteTerms(
      f, {{"x", apply("+", {var("y", "field"), constant("1")})}});
  ASSERT_EQ(g->kind, Formula::Kind::Forall);
  EXPECT_NE(g->name, "y");
  EXPECT_EQ(to_text(g), "(forall (" + g->name + " field) (= (* (+ y 1) " + g->name + ") 0))");
}

TEST(Formula, SubstituteConstants) {
  Language lang = ringWithConstants({"t"});
  FormulaPtr f = parseFormula(lang, "(exists (x field) (= (* x t) 1))");
  FormulaPtr g = substituteConstants(f, {{"t", var("w", "field")}});
  EXPECT_EQ(to_text(g), "(exists (x field) (= (* x w) 1))");
  // The binder is renamed when the replacement mentions its name.
  FormulaPtr h = substituteConstants(f, {{"t", var("x", "field")}});
  ASSERT_EQ(h->kind, Formula::Kind::Exists);
  EXPECT_NE(h->name, "x");
  EXPECT_EQ(to_text(h->left), "(= (* " + h->name + " x) 1)");
}

TEST(Formula, WellSortedAcceptsAndLocates) {
  const Language& val = valLanguage();
  EXPECT_TRUE(isWellSorted(val, parseFormula(val, "(forall (x field) (<=g (v x) infg))")));

  // Sort clash inside a term, located by path.
  FormulaPtr bad = eq(apply("+g", {var("x", "field"), constant("0g")}), constant("0g"));
  std::vector<Diagnostic> diags = wellSorted(val, bad);
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags[0].path, "/0/0");
  EXPECT_NE(diags[0].message.find("'+g'"), std::string::npos);

  // Unknown symbols and arity problems are reported, not thrown.
  EXPECT_FALSE(isWellSorted(val, rel("no-such-rel", {})));
  EXPECT_FALSE(isWellSorted(val, eq(apply("v", {}), constant("0g"))));
  // Equality across sorts.
  EXPECT_FALSE(isWellSorted(val, eq(var("x", "field"), var("g", "group"))));
  // A variable used at two sorts.
  EXPECT_FALSE(isWellSorted(
      val, conj(eq(var("x", "field"), constant("0")), eq(var("x", "group"), constant("0g")))));
}

TEST(Formula, FreshNames) {
  std::set<std::string> used{"x", "_1", "_3"};
  EXPECT_EQ(freshName(used), "_2");
  EXPECT_EQ(nameAvoiding("y", used), "y");
  EXPECT_EQ(nameAvoiding("x", used), "_2");
}

TEST(Formula, LiteralConstantsParse) {
  Language lang = ringLanguage().withLiteralConstants("field");
  FormulaPtr f = parseFormula(lang, "(= {[0,1]/[1]@2} (+ x 1))");
  ASSERT_EQ(f->kind, Formula::Kind::Eq);
  EXPECT_EQ(f->args[0]->kind, Term::Kind::Const);
  EXPECT_EQ(f->args[0]->name, "{[0,1]/[1]@2}");
  EXPECT_TRUE(isWellSorted(lang, f));
}
