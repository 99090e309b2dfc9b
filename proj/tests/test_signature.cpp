// Languages: builtins, presentations, literal constants, text round-trips,
// and inclusions.
#include "fragcalc/signature.hpp"

#include <gtest/gtest.h>

using namespace fragcalc;

TEST(Signature, RingBuiltin) {
  const Language& ring = ringLanguage();
  ASSERT_TRUE(ring.hasSort("field"));
  EXPECT_EQ(ring.sortIndex("field"), 0u);
  const Symbol* times = ring.find("*");
  ASSERT_NE(times, nullptr);
  EXPECT_EQ(times->kind, SymbolKind::Function);
  EXPECT_EQ(times->arity(), 2u);
  EXPECT_EQ(times->resultSort, "field");
  const Symbol* one = ring.find("1");
  ASSERT_NE(one, nullptr);
  EXPECT_EQ(one->kind, SymbolKind::Constant);
  EXPECT_EQ(ring.find("no-such-symbol"), nullptr);
}

TEST(Signature, ValBuiltinProfiles) {
  const Language& val = valLanguage();
  EXPECT_TRUE(val.hasSort("field"));
  EXPECT_TRUE(val.hasSort("group"));
  EXPECT_TRUE(val.hasSort("residue"));
  const Symbol* v = val.find("v");
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->argSorts, std::vector<std::string>{"field"});
  EXPECT_EQ(v->resultSort, "group");
  const Symbol* leq = val.find("<=g");
  ASSERT_NE(leq, nullptr);
  EXPECT_EQ(leq->kind, SymbolKind::Relation);
  EXPECT_EQ(leq->resultSort, "");
}

TEST(Signature, DefaultPresentationIsDeclarationIndex) {
  const Language& ring = ringLanguage();
  EXPECT_EQ(ring.code("+"), 0u);
  EXPECT_EQ(ring.code("1"), 4u);
  ASSERT_NE(ring.symbolByCode(2), nullptr);
  EXPECT_EQ(ring.symbolByCode(2)->name, "*");
  EXPECT_EQ(ring.symbolByCode(99), nullptr);
  EXPECT_THROW(ring.code("absent"), FragcalcError);
}

TEST(Signature, CustomPresentationMustBeInjectiveAndTotal) {
  std::vector<Sort> sorts{Sort{"s"}};
  std::vector<Symbol> syms{Symbol{"c", SymbolKind::Constant, {}, "s"},
                           Symbol{"d", SymbolKind::Constant, {}, "s"}};
  Language ok("L", sorts, syms, {{"c", 7}, {"d", 12}});
  EXPECT_EQ(ok.code("d"), 12u);
  EXPECT_EQ(ok.symbolByCode(7)->name, "c");
  EXPECT_THROW(Language("L", sorts, syms, {{"c", 7}}), FragcalcError);
  EXPECT_THROW(Language("L", sorts, syms, {{"c", 7}, {"d", 7}}), FragcalcError);
}

TEST(Signature, RejectsMalformedLanguages) {
  EXPECT_THROW(Language("L", {Sort{"s"}, Sort{"s"}}, {}), FragcalcError);
  EXPECT_THROW(Language("L", {Sort{"s"}},
                        {Symbol{"c", SymbolKind::Constant, {}, "s"},
                         Symbol{"c", SymbolKind::Constant, {}, "s"}}),
               FragcalcError);
  // A constant with arguments and a function into a missing sort.
  EXPECT_THROW(Language("L", {Sort{"s"}}, {Symbol{"c", SymbolKind::Constant, {"s"}, "s"}}),
               FragcalcError);
  EXPECT_THROW(Language("L", {Sort{"s"}}, {Symbol{"f", SymbolKind::Function, {"s"}, "t"}}),
               FragcalcError);
}

TEST(Signature, ExtendWithConstants) {
  Language ext = ringWithConstants({"t"});
  const Symbol* t = ext.find("t");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->kind, SymbolKind::Constant);
  EXPECT_EQ(t->resultSort, "field");
  EXPECT_EQ(ext.name(), "ring(t)");
  // Codes of the original symbols survive; the new one is fresh.
  EXPECT_EQ(ext.code("+"), ringLanguage().code("+"));
  EXPECT_NE(ext.code("t"), ext.code("1"));
  EXPECT_THROW(ringWithConstants({"1"}), FragcalcError);
  EXPECT_THROW(ringLanguage().extendWithConstants({"c"}, "no-such-sort"), FragcalcError);
}

TEST(Signature, LiteralConstants) {
  const Language& plain = ringLanguage();
  EXPECT_FALSE(plain.resolveConstant("{[0,1]/[1]@2}").has_value());
  Language lit = plain.withLiteralConstants("field");
  auto sym = lit.resolveConstant("{[0,1]/[1]@2}");
  ASSERT_TRUE(sym.has_value());
  EXPECT_EQ(sym->kind, SymbolKind::Constant);
  EXPECT_EQ(sym->resultSort, "field");
  EXPECT_EQ(lit.literalConstantSort(), "field");
  // Declared constants still resolve.
  EXPECT_TRUE(lit.resolveConstant("0").has_value());
}

TEST(Signature, TextRoundTrip) {
  for (const Language* lang : {&ringLanguage(), &graphLanguage(), &valLanguage()}) {
    Language back = Language::fromText(lang->to_text());
    EXPECT_TRUE(back == *lang) << lang->name();
  }
  Language ext = valWithConstants({"t"});
  EXPECT_TRUE(Language::fromText(ext.to_text()) == ext);
}

TEST(Signature, FromTextRejectsGarbage) {
  EXPECT_THROW(Language::fromText("sort s\nfunc f : s -> "), FragcalcError);
  EXPECT_THROW(Language::fromText("language L\nconst c : missing"), FragcalcError);
}

TEST(Signature, Inclusions) {
  auto incl = LanguageInclusion::of(ringLanguage(), valLanguage());
  ASSERT_TRUE(incl.has_value());
  EXPECT_EQ(incl->sub().name(), "ring");
  EXPECT_EQ(incl->sup().name(), "val");

  // graph has a sort val lacks.
  EXPECT_FALSE(LanguageInclusion::of(graphLanguage(), valLanguage()).has_value());

  // Same name, different profile.
  Language other("other", {Sort{"field"}},
                 {Symbol{"+", SymbolKind::Function, {"field"}, "field"}});
  EXPECT_FALSE(LanguageInclusion::of(other, ringLanguage()).has_value());

  auto up = LanguageInclusion::of(valLanguage(), valWithConstants({"t"}));
  ASSERT_TRUE(up.has_value());
  LanguageInclusion whole = incl->compose(*up);
  EXPECT_EQ(whole.sub().name(), "ring");
  EXPECT_EQ(whole.sup().name(), "val(t)");
  EXPECT_THROW(up->compose(*incl), FragcalcError);
}
