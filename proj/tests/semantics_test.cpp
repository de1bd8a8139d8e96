#include <goedel/semantics.hpp>
#include <gtest/gtest.h>

#include "support/random_formula.hpp"

using namespace goedel;

namespace {
Formula P(const char* s) { return parse_formula(s); }
Rational Q(long long a, long long b = 1) { return rational(a, b); }
GoedelSet S(const char* s) { return parse_goedel_set(s); }

FiniteInterpretation props(std::initializer_list<std::pair<const char*, Rational>> vals, GoedelSet V = unit_interval()) {
  FiniteInterpretation I;
  I.truth_set = V;
  for (const auto& [n, q] : vals) I.set_predicate(n, {}, q);
  return I;
}

// The admissible quantifier shifts, as implications or biconditionals.
std::vector<Formula> admissible_shifts() {
  auto iff = [](const char* a, const char* b) {
    Formula x = P(a), y = P(b);
    return conj(imp(x, y), imp(y, x));
  };
  return {
      iff("forall x. A(x) & B", "(forall x. A(x)) & B"),
      iff("exists x. A(x) & B", "(exists x. A(x)) & B"),
      P("(forall x. A(x)) | B -> forall x. A(x) | B"),
      iff("exists x. A(x) | B", "(exists x. A(x)) | B"),
      iff("B -> forall x. A(x)", "forall x. B -> A(x)"),
      P("(exists x. B -> A(x)) -> B -> exists x. A(x)"),
      P("(exists x. A(x) -> B) -> (forall x. A(x)) -> B"),
      iff("(exists x. A(x)) -> B", "forall x. A(x) -> B"),
  };
}
}  // namespace

TEST(Eval, ImplicationCases) {
  auto I = props({{"A", Q(3, 10)}, {"B", Q(7, 10)}});
  EXPECT_EQ(eval(P("A -> B"), I), 1);
  EXPECT_EQ(eval(P("B -> A"), I), Q(3, 10));
  EXPECT_EQ(eval(P("~A"), I), 0);
  EXPECT_EQ(eval(P("~~A"), I), 1);
  EXPECT_EQ(eval(P("top"), I), 1);
}

TEST(Eval, QuantifiersAreMinAndMax) {
  FiniteInterpretation I;
  I.universe = {"u0", "u1", "u2"};
  I.predicates[{"P", 1}] = {Q(1, 4), Q(1, 2), Q(3, 4)};
  EXPECT_EQ(eval(P("forall x. P(x)"), I), Q(1, 4));
  EXPECT_EQ(eval(P("exists x. P(x)"), I), Q(3, 4));
  I.functions[{"c", 0}] = {1};
  EXPECT_EQ(eval(P("P(c())"), I), Q(1, 2));
}

TEST(Eval, UnassignedSymbol) {
  FiniteInterpretation I;
  EXPECT_THROW(eval(P("P(c())"), I), EvalError);
  I.predicates[{"P", 1}] = {Q(1, 2)};
  EXPECT_THROW(eval(P("P(x)"), I), EvalError);
  I.assignment["x"] = 0;
  EXPECT_EQ(eval(P("P(x)"), I), Q(1, 2));
}

TEST(Eval, LinearityOverV4) {
  auto r = entails_bruteforce({}, P("(A -> B) | (B -> A)"), finite_chain(4), 1);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.interpretations_checked, 16u);
}

TEST(Property, ResiduationOverV5) {
  auto V = points_of(finite_chain(5));
  for (const auto& a : V)
    for (const auto& b : V) {
      Rational best = 0;
      for (const auto& x : V)
        if (g_and(x, a) <= b) best = g_or(best, x);
      EXPECT_EQ(eval(P("A -> B"), props({{"A", a}, {"B", b}})), best);
    }
}

TEST(Entails, ModusPonens) {
  EXPECT_TRUE(entails_bruteforce({P("A -> B"), P("A")}, P("B"), finite_chain(3), 1).holds);
}

TEST(Entails, FinSeparatesV3FromV4) {
  auto fin3 = P("(top -> A1) | (A1 -> A2) | (A2 -> bot)");
  EXPECT_TRUE(entails_bruteforce({}, fin3, finite_chain(3), 1).holds);
  auto r = entails_bruteforce({}, fin3, finite_chain(4), 1);
  ASSERT_FALSE(r.holds);
  const auto& I = *r.countermodel;
  EXPECT_EQ(eval(P("A1"), I), Q(2, 3));
  EXPECT_EQ(eval(P("A2"), I), Q(1, 2));
  EXPECT_EQ(eval(fin3, I), Q(2, 3));
}

TEST(Entails, RejectsOpenFormulas) {
  EXPECT_THROW(entails_bruteforce({P("A(x)")}, P("B"), finite_chain(3), 1), Error);
}

TEST(Entails, BudgetIsEnforced) {
  EXPECT_THROW(entails_bruteforce({}, P("forall x. forall y. R(x, y) | S(x, y)"), finite_chain(5), 3, 1000), BudgetExceeded);
}

TEST(Entails, FirstOrderCountermodel) {
  // forall x. P(x) | ~P(x) fails as soon as some P value is strictly inside.
  auto r = entails_bruteforce({}, P("forall x. P(x) | ~P(x)"), finite_chain(3), 2);
  ASSERT_FALSE(r.holds);
  EXPECT_LT(eval(P("forall x. P(x) | ~P(x)"), *r.countermodel), 1);
}

TEST(OneEntails, Examples) {
  EXPECT_TRUE(one_entails_bruteforce({P("A")}, P("A"), finite_chain(3), 1).holds);
  EXPECT_FALSE(one_entails_bruteforce({}, P("A | ~A"), finite_chain(3), 1).holds);
}

TEST(Property, OneEntailmentAgreesWithEntailment) {
  testkit::GenOptions opt;
  opt.max_depth = 4;
  testkit::FormulaGen gen(99, opt);
  auto V = finite_chain(3);
  for (int i = 0; i < 300; ++i) {
    std::vector<Formula> gamma{gen.formula()};
    if (gen.pick(2)) gamma.push_back(gen.formula());
    Formula a = gen.formula();
    ASSERT_EQ(entails_bruteforce(gamma, a, V, 2).holds, one_entails_bruteforce(gamma, a, V, 2).holds) << print(a);
  }
}

TEST(Property, SemanticDeductionTheorem) {
  testkit::GenOptions opt;
  opt.max_depth = 3;
  testkit::FormulaGen gen(5, opt);
  auto V = finite_chain(3);
  for (int i = 0; i < 300; ++i) {
    Formula g = gen.formula(), a = gen.formula(), b = gen.formula();
    ASSERT_EQ(entails_bruteforce({g, a}, b, V, 2).holds, entails_bruteforce({g}, imp(a, b), V, 2).holds);
  }
}

TEST(LiftW, Examples) {
  auto I = props({{"A", Q(1, 4)}, {"B", Q(1, 2)}});
  auto J = lift_w(I, Q(3, 4));
  EXPECT_EQ(J.predicates, I.predicates);
  auto K = lift_w(I, Q(1, 8));
  EXPECT_EQ(eval(P("A & B"), K), 1);
  EXPECT_THROW(lift_w(I, 0), Error);
}

TEST(Property, LiftWPreservesValuesBelowW) {
  testkit::GenOptions opt;
  opt.max_depth = 4;
  testkit::FormulaGen gen(17, opt);
  auto V = finite_chain(5);
  auto vals = points_of(V);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Formula a = gen.formula();
    auto I = testkit::random_interpretation(gen.rng(), signature_of(a), V, vals, 1 + static_cast<std::size_t>(gen.pick(2)));
    auto used = value_set({a}, I);
    // a threshold strictly between two consecutive values of V
    Rational w = (vals[1 + static_cast<std::size_t>(gen.pick(3))] + vals[static_cast<std::size_t>(gen.pick(1))]) / 2;
    if (used.count(w)) continue;
    Rational before = eval(a, I);
    Rational after = eval(a, lift_w(I, w));
    ASSERT_EQ(after, before < w ? before : Rational(1)) << print(a);
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(MapH, IdentityAndRejection) {
  auto I = props({{"A", Q(1, 2)}});
  auto J = map_h(I, {{Q(1, 2), Q(1, 2)}});
  EXPECT_EQ(J.predicates, I.predicates);
  EXPECT_THROW(map_h(props({{"A", Q(1, 2)}, {"B", Q(1, 4)}}), {{Q(1, 4), Q(1, 2)}, {Q(1, 2), Q(1, 2)}}), Error);
  EXPECT_THROW(map_h(props({{"A", Q(1, 3)}}), {{Q(1, 2), Q(3, 4)}}), DomainGap);
}

TEST(Property, MapHCommutesWithEvaluation) {
  testkit::GenOptions opt;
  opt.max_depth = 5;
  testkit::FormulaGen gen(23, opt);
  auto V = finite_chain(5);
  auto vals = points_of(V);
  std::map<Rational, Rational> h;
  for (const auto& q : vals) h[q] = q == 0 ? Rational(0) : (1 + q) / 2;  // into {0} u [1/2,1]
  for (int i = 0; i < 1000; ++i) {
    Formula a = gen.formula();
    auto I = testkit::random_interpretation(gen.rng(), signature_of(a), V, vals, 2);
    auto J = map_h(I, h);
    ASSERT_EQ(eval(a, J), h.at(eval(a, I))) << print(a);
  }
}

TEST(Property, QuantifierFreeValidityDependsOnOrderOnly) {
  testkit::GenOptions opt;
  opt.quantifiers = false;
  opt.predicates = {{"A", 0}, {"B", 0}, {"C", 0}};
  testkit::FormulaGen gen(31, opt);
  auto V5 = points_of(finite_chain(5));
  std::vector<Rational> other{0, Q(1, 10), Q(1, 3), Q(9, 10), 1};  // same order type as V5
  for (int i = 0; i < 500; ++i) {
    Formula a = gen.formula();
    FiniteInterpretation I, J;
    for (const char* n : {"A", "B", "C"}) {
      auto k = static_cast<std::size_t>(gen.pick(5));
      I.set_predicate(n, {}, V5[k]);
      J.set_predicate(n, {}, other[k]);
    }
    ASSERT_EQ(eval(a, I) == 1, eval(a, J) == 1);
  }
}

TEST(Property, AdmissibleShiftsHoldOnSmallModels) {
  for (const auto& f : admissible_shifts()) {
    EXPECT_TRUE(entails_bruteforce({}, f, finite_chain(4), 3).holds) << print(f);
    EXPECT_TRUE(entails_bruteforce({}, f, sample_finite(parse_goedel_set("{0} + [1/2,1]"), 4), 2).holds) << print(f);
  }
}

TEST(ValueSet, ContainsSubformulaValues) {
  auto I = props({{"A", Q(1, 3)}, {"B", Q(1, 2)}});
  auto vs = value_set({P("B -> A")}, I);
  EXPECT_EQ(vs, (std::set<Rational>{0, Q(1, 3), Q(1, 2), 1}));
}

TEST(Transfer, KeepsValuesBelowTheKernel) {
  FiniteInterpretation I = props({{"A", Q(1, 4)}, {"B", Q(3, 4)}, {"C", Q(1)}}, S("{0} + {1/4} + [1/2,1]"));
  auto J = transfer_to_kernel(I, S("{0} + {1/4} + cantor(1/2,1)"));
  EXPECT_EQ(J.predicates.at({"A", 0})[0], Q(1, 4));
  EXPECT_EQ(J.predicates.at({"B", 0})[0], Q(1, 2));
  EXPECT_EQ(J.predicates.at({"C", 0})[0], Q(1));
  EXPECT_THROW(transfer_to_kernel(I, v_down()), Error);
}

// Countermodels over samples of the saturated set move into V with the same
// order pattern, so formula values commute with the value map.
TEST(Property, TransferPreservesCountermodels) {
  for (const char* target : {"{0} + [1/2,1]", "{0} + cantor(1/2,1)", "{0} + cantor(1/2,3/4) + {1}"}) {
    GoedelSet V = S(target), W = saturate_above_kernel_inf(V);
    GoedelSet sample = sample_finite(W, 6);
    auto values = points_of(sample);
    testkit::FormulaGen gen(21);
    int found = 0;
    for (int i = 0; i < 4000 && found < 100; ++i) {
      Formula f = gen.formula();
      auto I = testkit::random_interpretation(gen.rng(), signature_of(f), sample, values, 2);
      Rational v = eval(f, I);
      if (v == 1) continue;
      ++found;
      auto J = transfer_to_kernel(I, V);
      ASSERT_NO_THROW(J.validate()) << target;
      ASSERT_LT(eval(f, J), Q(1)) << print(f);
      std::vector<Rational> a, b;
      for (const auto& [sym, tab] : I.predicates) a.insert(a.end(), tab.begin(), tab.end());
      for (const auto& [sym, tab] : J.predicates) b.insert(b.end(), tab.begin(), tab.end());
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < a.size(); ++y) ASSERT_EQ(a[x] < a[y], b[x] < b[y]);
    }
    EXPECT_EQ(found, 100) << target;
  }
}
