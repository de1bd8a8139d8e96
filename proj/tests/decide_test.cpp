#include <goedel/decide.hpp>
#include <gtest/gtest.h>

#include "support/random_formula.hpp"

using namespace goedel;

namespace {
Formula P(const char* s) { return parse_formula(s); }
Rational Q(long long a, long long b = 1) { return rational(a, b); }

FiniteInterpretation as_interpretation(const PropValuation& v) {
  FiniteInterpretation I;
  for (const auto& [a, q] : v.values) I.set_predicate(a.name(), {}, q);
  return I;
}
}  // namespace

TEST(DecideGm, Linearity) {
  for (int m = 2; m <= 6; ++m) EXPECT_TRUE(decide_Gm(P("(A -> B) | (B -> A)"), m).valid);
}

TEST(DecideGm, FinSeparation) {
  auto fin3 = P("(top -> A1) | (A1 -> A2) | (A2 -> bot)");
  EXPECT_TRUE(decide_Gm(fin3, 3).valid);
  auto r = decide_Gm(fin3, 4);
  ASSERT_FALSE(r.valid);
  EXPECT_EQ(*r.countermodel->lookup(P("A1")), Q(2, 3));
  EXPECT_EQ(*r.countermodel->lookup(P("A2")), Q(1, 2));
  EXPECT_EQ(r.countermodel_value, Q(2, 3));
}

TEST(DecideGm, Peirce) {
  auto peirce = P("((A -> B) -> A) -> A");
  EXPECT_TRUE(decide_Gm(peirce, 2).valid);
  EXPECT_FALSE(decide_Gm(peirce, 3).valid);
}

TEST(DecideLC, Examples) {
  EXPECT_TRUE(decide_LC(P("~A | ~~A")).valid);
  auto r = decide_LC(P("A | ~A"));
  ASSERT_FALSE(r.valid);
  EXPECT_EQ(*r.countermodel->lookup(P("A")), Q(1, 2));
  EXPECT_TRUE(decide_LC(P("(A -> B) | (B -> A)")).valid);
  EXPECT_TRUE(decide_LC(P("top")).valid);
  EXPECT_FALSE(decide_LC(P("bot")).valid);
}

TEST(DecideGm, GroundAtomsAreLetters) {
  EXPECT_TRUE(decide_LC(P("P(f(c())) -> P(f(c()))")).valid);
  EXPECT_FALSE(decide_LC(P("P(c()) -> P(d())")).valid);
  EXPECT_THROW(decide_LC(P("forall x. P(x)")), Error);
}

TEST(DecideGm, Budget) {
  std::string big = "A0";
  for (int i = 1; i < 12; ++i) big += " | A" + std::to_string(i);
  EXPECT_THROW(decide_LC(P(big.c_str()), 1000), BudgetExceeded);
}

TEST(Property, ValidityIsAntitoneInM) {
  testkit::GenOptions opt;
  opt.quantifiers = false;
  opt.max_depth = 5;
  opt.predicates = {{"A", 0}, {"B", 0}, {"C", 0}};
  testkit::FormulaGen gen(41, opt);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.formula();
    for (int m = 2; m <= 4; ++m)
      if (decide_Gm(f, m + 1).valid) ASSERT_TRUE(decide_Gm(f, m).valid) << print(f);
    if (decide_LC(f).valid)
      for (int m = 2; m <= 6; ++m) ASSERT_TRUE(decide_Gm(f, m).valid) << print(f);
  }
}

TEST(Property, CountermodelsReEvaluateBelowOne) {
  testkit::GenOptions opt;
  opt.quantifiers = false;
  opt.max_depth = 5;
  opt.predicates = {{"A", 0}, {"B", 0}, {"C", 0}};
  testkit::FormulaGen gen(43, opt);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.formula();
    auto r = decide_LC(f);
    if (r.valid) continue;
    auto I = as_interpretation(*r.countermodel);
    ASSERT_LT(eval(f, I), 1) << print(f);
    ASSERT_EQ(eval(f, I), r.countermodel_value);
    ASSERT_EQ(eval_prop(f, *r.countermodel), r.countermodel_value);
  }
}
