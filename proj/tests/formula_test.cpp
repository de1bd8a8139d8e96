#include <goedel/formula.hpp>
#include <goedel/syntax.hpp>
#include <gtest/gtest.h>

#include "support/random_formula.hpp"

using namespace goedel;

namespace {
Formula P(const char* s) { return parse_formula(s); }
}  // namespace

TEST(Parse, IdentityConditional) {
  auto f = P("P(c()) -> P(c())");
  auto pc = atom("P", {Term::app("c")});
  EXPECT_EQ(f, imp(pc, pc));
}

TEST(Parse, CUp) {
  auto f = P("exists x. (A(x) -> forall y. A(y))");
  auto expected = exists("x", imp(atom("A", {Term::var("x")}), forall("y", atom("A", {Term::var("y")}))));
  EXPECT_EQ(f, expected);
}

TEST(Parse, NegationIsImplicationToBot) {
  EXPECT_EQ(P("~A(c())"), imp(atom("A", {Term::app("c")}), bot()));
}

TEST(Parse, PrecedenceAndAssociativity) {
  auto a = atom("A"), b = atom("B"), c = atom("C");
  EXPECT_EQ(P("A -> B -> C"), imp(a, imp(b, c)));
  EXPECT_EQ(P("A | B & C"), disj(a, conj(b, c)));
  EXPECT_EQ(P("A | B | C"), disj(disj(a, b), c));
  EXPECT_EQ(P("~A & B"), conj(neg(a), b));
  EXPECT_EQ(P("A & B -> C"), imp(conj(a, b), c));
  EXPECT_EQ(P("top"), top());
}

TEST(Parse, QuantifierScopeExtendsRight) {
  EXPECT_EQ(P("forall x. P(x) -> Q(x)"), forall("x", imp(atom("P", {Term::var("x")}), atom("Q", {Term::var("x")}))));
  EXPECT_EQ(P("A & forall x. P(x) | B"), conj(atom("A"), forall("x", disj(atom("P", {Term::var("x")}), atom("B")))));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    P("A ->\n  & B");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 3u);
  }
  EXPECT_THROW(P("P(x) & P(x, y)"), ParseError);
  EXPECT_THROW(P("P(f(x)) & Q(f(x, x))"), ParseError);
  EXPECT_THROW(P("p(x)"), ParseError);
  EXPECT_THROW(P("forall X. P(X)"), ParseError);
  EXPECT_THROW(P("(A"), ParseError);
}

TEST(Print, TopSugar) { EXPECT_EQ(print(imp(bot(), bot())), "top"); }

TEST(Print, Linearity) {
  auto a = atom("A"), b = atom("B");
  EXPECT_EQ(print(disj(imp(a, b), imp(b, a))), "(A -> B) | (B -> A)");
}

TEST(Print, RightAssociativeImplication) {
  auto a = atom("A"), b = atom("B"), c = atom("C");
  EXPECT_EQ(print(imp(a, imp(b, c))), "A -> B -> C");
  EXPECT_EQ(print(imp(imp(a, b), c)), "(A -> B) -> C");
}

TEST(Print, QuantifiersParenthesizedUnlessLast) {
  EXPECT_EQ(print(P("exists x. (A(x) -> forall y. A(y))")), "exists x. A(x) -> forall y. A(y)");
  EXPECT_EQ(print(P("(forall x. P(x)) -> B")), "(forall x. P(x)) -> B");
  EXPECT_EQ(print(P("~forall x. P(x)")), "~forall x. P(x)");
  EXPECT_EQ(print(P("(~forall x. P(x)) & B")), "~(forall x. P(x)) & B");
  EXPECT_EQ(print(P("P(c())")), "P(c())");
}

TEST(Substitute, Basic) {
  auto c = Term::app("c");
  EXPECT_EQ(substitute(P("A(x)"), "x", c), P("A(c())"));
  EXPECT_EQ(substitute(P("forall x. A(x)"), "x", c), P("forall x. A(x)"));
}

TEST(Substitute, AvoidsCapture) {
  auto t = Term::app("f", {Term::var("y")});
  auto out = substitute(P("exists y. R(x, y)"), "x", t);
  EXPECT_EQ(print(out), "exists y'. R(f(y), y')");
  EXPECT_EQ(free_vars(out), (std::set<std::string>{"y"}));
}

TEST(FreeVars, Examples) {
  EXPECT_TRUE(free_vars(P("forall x. A(x)")).empty());
  EXPECT_EQ(free_vars(P("A(x) -> forall x. A(x)")), (std::set<std::string>{"x"}));
}

TEST(Crisp, Examples) {
  EXPECT_TRUE(is_crisp(P("~~L(x, y)")));
  EXPECT_FALSE(is_crisp(P("P(x)")));
  EXPECT_TRUE(is_crisp(P("~P(c()) & ~~Q(c())")));
  EXPECT_TRUE(is_crisp(P("forall x. ~~P(x) -> exists y. ~Q(y)")));
  EXPECT_FALSE(is_crisp(P("~~P(c()) | Q(c())")));
}

TEST(Prenex, Examples) {
  EXPECT_TRUE(is_prenex(P("exists x. forall y. A(y) -> A(x)")));
  EXPECT_FALSE(is_prenex(P("exists x. (A(x) -> forall y. A(y))")));
  EXPECT_TRUE(is_prenex(P("A & B -> C")));
}

TEST(Alpha, EqualityAndNormalization) {
  EXPECT_TRUE(alpha_equal(P("forall x. P(x)"), P("forall y. P(y)")));
  EXPECT_FALSE(alpha_equal(P("forall x. P(z)"), P("forall y. P(y)")));
  EXPECT_TRUE(alpha_equal(P("forall x. exists y. R(x, y)"), P("forall y. exists x. R(y, x)")));
  EXPECT_EQ(normalize(P("forall x. exists y. R(x, y)")), normalize(P("forall y. exists x. R(y, x)")));
  // normalization removes shadowing
  auto n = normalize(P("forall x. forall x. P(x)"));
  EXPECT_NE(n.var(), n.body().var());
}

TEST(Signature, ArityConflictAcrossFormulas) {
  Signature s;
  s.add(P("P(c())"));
  EXPECT_THROW(s.add(P("P(c(), c())")), ArityError);
}

TEST(Property, RoundTripOnRandomFormulas) {
  testkit::GenOptions opt;
  opt.max_depth = 6;
  opt.closed = false;
  opt.functions = true;
  opt.predicates = {{"P", 1}, {"R", 2}, {"A", 0}};
  testkit::FormulaGen gen(12345, opt);
  for (int i = 0; i < 10000; ++i) {
    Formula f = gen.formula();
    std::string text = print(f);
    Formula g = parse_formula(text);
    ASSERT_EQ(g, f) << text;
    ASSERT_EQ(normalize(g), normalize(f)) << text;
    ASSERT_EQ(print(g), text);
  }
}

TEST(Property, SubstitutionOfNonFreeVariableIsIdentity) {
  testkit::GenOptions opt;
  opt.closed = false;
  opt.variables = {"x", "y"};
  testkit::FormulaGen gen(7, opt);
  for (int i = 0; i < 2000; ++i) {
    Formula f = gen.formula();
    if (is_free_in("z", f)) continue;
    ASSERT_EQ(substitute(f, "z", Term::app("f", {Term::var("x")})), f);
  }
}
