#include <gtest/gtest.h>

#include <random>

#include "conicon/expr.hpp"

using namespace conicon;

namespace {

const Precision P256{256};

BigReal newton_sqrt(long a, Precision p) {
  BigReal x(1, p), t(a, p);
  for (int i = 0; i < 40; ++i) x = (x + t / x) / 2;
  return x;
}

void expect_close(const BigComplex& a, const BigComplex& b, const BigReal& tol) {
  EXPECT_LE(distance(a, b), tol) << a << " vs " << b;
}

ExprPtr L(long n, long d = 1) { return Expr::lit(GaussianRational::real(mpq_class(n, d))); }

}  // namespace

TEST(Parse, CubeRootOfTwo) {
  auto e = parse("cbrt(2)");
  EXPECT_TRUE(structurally_equal(*e, *cbrt(L(2))));
}

TEST(Parse, QuotientBySquareRoot) {
  auto e = parse("(1+i)/sqrt(2)");
  EXPECT_TRUE(structurally_equal(*e, *((L(1) + Expr::i()) / sqrt(L(2)))));
}

TEST(Parse, NegativeLiteralFoldsAndConj) {
  auto e = parse("cbrt(-8)*conj(i)");
  EXPECT_TRUE(structurally_equal(*e, *(cbrt(L(-8)) * conj(Expr::i()))));
}

TEST(Parse, RationalLiteralVersusDivision) {
  EXPECT_TRUE(structurally_equal(*parse("3/4"), *L(3, 4)));
  EXPECT_TRUE(structurally_equal(*parse("6/8"), *L(3, 4)));
  EXPECT_TRUE(structurally_equal(*parse("3 / 4"), *(L(3) / L(4))));
  EXPECT_TRUE(structurally_equal(*parse("-(2)"), *neg(L(2))));
  EXPECT_TRUE(structurally_equal(*parse("2 - 3 - 4"), *((L(2) - L(3)) - L(4))));
  EXPECT_TRUE(structurally_equal(*parse("1 + 2*3"), *(L(1) + L(2) * L(3))));
}

TEST(Parse, ArbitrarilyLargeRationals) {
  auto e = parse("123456789012345678901234567890/7");
  mpq_class expected("123456789012345678901234567890/7");
  expected.canonicalize();
  EXPECT_EQ(e->literal().re, expected);
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  try {
    parse("cbrt(2");
    FAIL();
  } catch (const SyntaxError& err) {
    EXPECT_EQ(err.position(), 6u);
  }
  try {
    parse("2 + foo(3)");
    FAIL();
  } catch (const SyntaxError& err) {
    EXPECT_EQ(err.position(), 4u);
  }
  EXPECT_THROW(parse("1/0"), SyntaxError);
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("2 )"), SyntaxError);
  EXPECT_THROW(parse("2.5"), SyntaxError);
}

TEST(Eval, CubeRootOfEight) {
  auto v = eval(*parse("cbrt(8)"), P256);
  EXPECT_EQ(v.re(), BigReal(2, P256));
  EXPECT_TRUE(v.im().is_zero());
}

TEST(Eval, CubeRootOfMinusEightIsPrincipal) {
  auto v = eval(*parse("cbrt(-8)"), P256);
  expect_close(v, BigComplex(BigReal(1, P256), newton_sqrt(3, P256)), tau(P256));
  // (1 + i√3)^3 = -8
  expect_close(v * v * v, BigComplex(BigReal(-8, P256), BigReal(P256)), tau(P256));
}

TEST(Eval, SquareRootOfI) {
  auto v = eval(*parse("sqrt(i)"), P256);
  BigReal h = newton_sqrt(2, P256) / 2;
  expect_close(v, BigComplex(h, h), tau(P256));
}

TEST(Eval, DivisionByZero) {
  EXPECT_THROW(eval(*parse("1/(1-1)"), P256), DivisionByZero);
  EXPECT_THROW(eval(*parse("2/(i*i + 1)"), P256), DivisionByZero);
}

TEST(RadicalCounts, Examples) {
  EXPECT_EQ(radical_counts(*parse("cbrt(2)")), (RadicalCounts{0, 1}));
  EXPECT_EQ(radical_counts(*parse("sqrt(cbrt(2) + cbrt(3))")), (RadicalCounts{1, 2}));
  EXPECT_EQ(radical_counts(*parse("1 + i")), (RadicalCounts{0, 0}));
}

namespace {

GaussianRational random_gaussian(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 9);
  GaussianRational g{mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng))};
  g.re.canonicalize();
  g.im.canonicalize();
  return g;
}

ExprPtr random_parseable(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 9);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 6);
  switch (pick(rng)) {
    case 0: {
      mpq_class q(num(rng), den(rng));
      q.canonicalize();
      return Expr::lit(GaussianRational::real(q));
    }
    case 1: return Expr::i();
    case 2: return random_parseable(rng, depth - 1) + random_parseable(rng, depth - 1);
    case 3: return random_parseable(rng, depth - 1) - random_parseable(rng, depth - 1);
    case 4: return random_parseable(rng, depth - 1) * random_parseable(rng, depth - 1);
    case 5: return random_parseable(rng, depth - 1) / random_parseable(rng, depth - 1);
    case 6: return neg(random_parseable(rng, depth - 1));
    case 7: return conj(random_parseable(rng, depth - 1));
    case 8: return sqrt(random_parseable(rng, depth - 1));
    default: return cbrt(random_parseable(rng, depth - 1));
  }
}

}  // namespace

TEST(ExprProperty, PrintParseRoundTrip) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    auto e = random_parseable(rng, 4);
    auto text = to_string(*e);
    auto back = parse(text);
    EXPECT_TRUE(structurally_equal(*e, *back)) << text;
  }
}

TEST(ExprProperty, CubeRootCubesBack) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    auto g = random_gaussian(rng);
    auto x = g.value(P256);
    auto r = eval(*cbrt(Expr::lit(g)), P256);
    BigReal tol = tau(P256) * max(BigReal(1, P256), x.abs());
    EXPECT_LE(distance(r * r * r, x), tol);
  }
}

TEST(ExprProperty, PrincipalBranchRanges) {
  std::mt19937_64 rng(13);
  const BigReal pi_ = pi(P256);
  for (int k = 0; k < 1000; ++k) {
    auto g = random_gaussian(rng);
    if (k % 10 == 0) g.im = 0;  // exercise the negative real axis
    if (g.is_zero()) continue;
    auto s = eval(*sqrt(Expr::lit(g)), P256).arg();
    auto c = eval(*cbrt(Expr::lit(g)), P256).arg();
    EXPECT_GT(s, -pi_ / 2);
    EXPECT_LE(s, pi_ / 2 + tau(P256));
    EXPECT_GT(c, -pi_ / 3);
    EXPECT_LE(c, pi_ / 3 + tau(P256));
  }
}

TEST(ExprProperty, ConjugationCommutesOffTheBranchCut) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 300; ++k) {
    auto g = random_gaussian(rng);
    if (g.im == 0) continue;  // negative reals sit on the cut
    auto e = sqrt(Expr::lit(g)) + cbrt(Expr::lit(g) * L(3, 2));
    auto lhs = eval(*conj(e), P256);
    auto rhs = eval(*e, P256).conj();
    EXPECT_LE(distance(lhs, rhs), tau(P256));
  }
}
