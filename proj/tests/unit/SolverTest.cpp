//===-- SolverTest.cpp ----------------------------------------------------===//

#include "RandomFormula.h"
#include "symdeffix/Solver.h"

#include <gtest/gtest.h>

using namespace symdeffix;
using symdeffix::testing::randomFormula;
using symdeffix::testing::toVector;

namespace {

Term v(const char *n) { return Term::symbol(n); }
Term k(int64_t c) { return Term::constant(c); }

TEST(ConstraintTest, AtomsAreGcdTightened) {
  // 2x <= 3  ==>  x <= 1
  auto c = Constraint::le(v("x").scaled(2), k(3));
  EXPECT_EQ(c.str(), "(<= (+ x -1) 0)");
  // 2x = 3 has no integer solution
  EXPECT_TRUE(Constraint::eq(v("x").scaled(2), k(3)).isFalse());
  EXPECT_TRUE(Constraint::ne(v("x").scaled(2), k(3)).isTrue());
}

TEST(ConstraintTest, NegationNormalFormIsIdempotent) {
  auto c = parseConstraint("(not (and (< x 3) (or (= y 1) (distinct x y))))");
  auto again = parseConstraint(c.str());
  EXPECT_EQ(c.str(), again.str());
  auto twice = Constraint::negate(Constraint::negate(c));
  EXPECT_EQ(c.str(), twice.str());
}

TEST(ConstraintTest, ParseRejectsGarbage) {
  EXPECT_THROW(parseConstraint("(< x"), std::invalid_argument);
  EXPECT_THROW(parseConstraint("(foo x y)"), std::invalid_argument);
  EXPECT_THROW(parseConstraint("x"), std::invalid_argument);
}

TEST(SolverTest, XLessThanXIsUnsat) {
  Solver s;
  EXPECT_EQ(s.checkSat(Constraint::lt(v("x"), v("x"))).verdict,
            Verdict::Unsat);
}

TEST(SolverTest, UniqueIntegerModel) {
  Solver s;
  auto r = s.checkSat(Constraint::gt(v("x"), k(3)) &&
                      Constraint::lt(v("x"), k(5)));
  ASSERT_EQ(r.verdict, Verdict::Sat);
  EXPECT_EQ(r.model.at("x"), 4);
}

TEST(SolverTest, IntegerGapBetweenRationalBounds) {
  Solver s;
  // 1 <= 3x - 3y <= 2 has rational but no integer solutions.
  auto c = parseConstraint("(and (<= 1 (- (* 3 x) (* 3 y))) "
                           "(<= (- (* 3 x) (* 3 y)) 2))");
  EXPECT_EQ(s.checkSat(c).verdict, Verdict::Unsat);
}

TEST(SolverTest, ValidityExamples) {
  Solver s;
  auto i = v("i");
  auto strengthened = Constraint::implies(
      Constraint::lt(i, k(10)) && Constraint::lt(i, k(5)),
      Constraint::lt(i, k(5)));
  EXPECT_EQ(s.checkValid(strengthened).verdict, Validity::Valid);

  // The unpatched copy-loop guard does not imply the five-byte bound.
  auto r = s.checkValid(
      Constraint::implies(Constraint::lt(i, k(10)), Constraint::lt(i, k(5))));
  ASSERT_EQ(r.verdict, Validity::Invalid);
  int64_t cm = r.counterModel.at("i");
  EXPECT_GE(cm, 5);
  EXPECT_LE(cm, 9);

  EXPECT_EQ(s.checkValid(Constraint::eq(v("x"), v("x"))).verdict,
            Validity::Valid);
}

TEST(SolverTest, NonLinearOnlyYieldsUnknownWhenItMatters) {
  Solver s;
  Term xy = Term::mul(v("x"), v("y"));
  // Linear part alone is unsat: answer must still be exact.
  auto c = Constraint::lt(v("x"), k(0)) && Constraint::gt(v("x"), k(0)) &&
           Constraint::eq(xy, k(7));
  EXPECT_EQ(s.checkSat(c).verdict, Verdict::Unsat);
  // x*y = 6 with x = 2 has a consistent model (y = 3) or gives Unknown.
  auto d = Constraint::eq(xy, k(6)) && Constraint::eq(v("x"), k(2));
  auto r = s.checkSat(d);
  ASSERT_NE(r.verdict, Verdict::Unsat);
  if (r.verdict == Verdict::Sat)
    EXPECT_TRUE(d.evaluate(r.model));
}

TEST(SolverTest, SubstituteExamples) {
  auto c = Constraint::lt(v("x"), k(5));
  auto s = substitute(c, "x", v("y") + k(1));
  EXPECT_EQ(s.str(), Constraint::lt(v("y"), k(4)).str());
  EXPECT_EQ(substitute(c, "z", k(9)).str(), c.str());
}

TEST(SolverTest, SubstitutionCommutesWithEvaluation) {
  std::mt19937 rng(1234);
  for (int n = 0; n < 500; ++n) {
    auto rf = randomFormula(rng);
    Constraint c = parseConstraint(rf.sexpr());
    Term t = Term::constant(symdeffix::testing::uniform(rng, -5, 5));
    for (const char *s : {"x", "y", "z"})
      t = t + Term::symbol(s).scaled(symdeffix::testing::uniform(rng, -3, 3));
    const char *var = symdeffix::testing::kSymbols[rng() % 3];
    Constraint sub = substitute(c, var, t);
    Model sigma;
    for (const char *s : {"x", "y", "z"})
      sigma[s] = symdeffix::testing::uniform(rng, -20, 20);
    Model updated = sigma;
    updated[var] = t.evaluate(sigma);
    ASSERT_EQ(sub.evaluate(sigma), c.evaluate(updated)) << rf.sexpr();
  }
}

TEST(SolverTest, EqualitiesWithoutIntegerSolution) {
  Solver s;
  // Rationally y = 1/2 with x and z unbounded.
  auto c = parseConstraint("(and (= (+ (* -3 x) (* -4 y) (* 2 z) -1) 0) "
                           "(= (+ (* -3 x) (* 2 z) -3) 0))");
  EXPECT_EQ(s.checkSat(c).verdict, Verdict::Unsat);
  auto d = parseConstraint("(and (= (+ (* 3 x) (* 5 y) -1) 0) (< x 0) (> y -100))");
  auto r = s.checkSat(d);
  ASSERT_EQ(r.verdict, Verdict::Sat);
  EXPECT_EQ(3 * r.model["x"] + 5 * r.model["y"], 1);
}

TEST(SolverTest, RandomConjunctionsMatchEnumeration) {
  std::mt19937 rng(42);
  Solver s;
  for (int n = 0; n < 300; ++n) {
    auto rf = randomFormula(rng);
    Constraint c = parseConstraint(rf.sexpr());
    auto oracle = rf.enumerate(24);
    auto r = s.checkSat(c);
    ASSERT_NE(r.verdict, Verdict::Unknown) << rf.sexpr() << " " << r.reason;
    if (r.verdict == Verdict::Sat)
      EXPECT_TRUE(rf.eval(toVector(r.model))) << rf.sexpr();
    if (oracle)
      EXPECT_EQ(r.verdict, Verdict::Sat) << rf.sexpr();
  }
}

} // namespace
