#include <gtest/gtest.h>

#include <random>

#include "conicon/conic.hpp"

using namespace conicon;

namespace {

const Precision P128{128};
const Precision P256{256};

BigReal Q(long n, long d = 1, Precision p = P256) { return BigReal(mpq_class(n, d), p); }
Point pt(long x, long y, Precision p = P256) { return Point(BigReal(x, p), BigReal(y, p)); }

ConicImplicit K(std::array<mpq_class, 6> c, Precision p = P256) { return ConicImplicit::from_rationals(c, p); }

BigReal newton_sqrt(const BigReal& a) {
  BigReal x(1, a.precision());
  if (a > 1) x = a;
  for (int i = 0; i < 400; ++i) x = (x + a / x) / 2;
  return x;
}

void expect_near(const BigReal& a, const BigReal& b, const BigReal& tol) {
  EXPECT_LE(abs(a - b), tol) << a << " vs " << b;
}

void expect_equivalent(const ConicImplicit& a, const ConicImplicit& b, const BigReal& tol) {
  EXPECT_TRUE(scale_equivalent(a, b, tol)) << a.a << ' ' << a.b << ' ' << a.c << ' ' << a.d << ' ' << a.e << ' ' << a.f;
}

}  // namespace

TEST(Classify, Examples) {
  EXPECT_EQ(classify(K({1, 0, 4, 0, 0, -4}), P256), ConicClass::Ellipse);
  EXPECT_EQ(classify(K({0, 1, 0, 0, 0, -1}), P256), ConicClass::Hyperbola);
  EXPECT_EQ(classify(K({1, 0, 1, 0, 0, 1}), P256), ConicClass::Empty);
  EXPECT_EQ(classify(K({1, 0, 1, 0, 0, -1}), P256), ConicClass::Circle);
  EXPECT_EQ(classify(K({0, 0, 1, -1, 0, 0}), P256), ConicClass::Parabola);
  EXPECT_EQ(classify(K({1, 0, -1, 0, 0, 0}), P256), ConicClass::DegenerateLines);
  EXPECT_EQ(classify(K({1, 0, 1, 0, 0, 0}), P256), ConicClass::DegeneratePoint);
  EXPECT_EQ(classify(K({1, 0, 0, 0, 0, -1}), P256), ConicClass::DegenerateLines);
  EXPECT_EQ(classify(K({1, 0, 0, 0, 0, 1}), P256), ConicClass::Empty);
}

TEST(ToRegular, AxisAlignedEllipse) {
  auto rp = to_regular(K({1, 0, 4, 0, 0, -4}), P256);
  EXPECT_EQ(rp.frame.cos, 1);
  EXPECT_TRUE(rp.frame.sin.is_zero());
  const auto& c = std::get<CentralForm>(rp.conic);
  expect_near(c.u, Q(1, 4), tau(P256));
  expect_near(c.rhs, Q(1), tau(P256));
  EXPECT_LE(c.center.abs(), tau(P256));
}

TEST(ToRegular, RectangularHyperbola) {
  auto rp = to_regular(K({0, 1, 0, 0, 0, -1}), P256);
  BigReal h = newton_sqrt(Q(2)) / 2;
  expect_near(rp.frame.cos, h, tau(P256));
  expect_near(rp.frame.sin, h, tau(P256));
  const auto& c = std::get<CentralForm>(rp.conic);
  expect_near(c.u, Q(-1), tau(P256));
  expect_near(c.rhs, Q(2), tau(P256));
}

TEST(ToRegular, ConjugateClassHasNegativeRhs) {
  auto rp = to_regular(K({1, 0, -4, 0, 0, -4}), P256);
  const auto& c = std::get<CentralForm>(rp.conic);
  expect_near(c.u, Q(-1, 4), tau(P256));
  expect_near(c.rhs, Q(-1), tau(P256));
  EXPECT_EQ(c.class_sign(), -1);
}

TEST(ToRegular, Parabola) {
  auto rp = to_regular(K({0, 0, 1, -1, 0, 0}), P256);
  EXPECT_EQ(rp.frame.cos, 1);
  const auto& p = std::get<ParabolaForm>(rp.conic);
  expect_near(p.lambda, Q(1), tau(P256));
  EXPECT_LE(p.vertex.abs(), tau(P256));
}

TEST(ToRegular, ParabolaOpeningAlongYGetsQuarterTurn) {
  // y = x²
  auto rp = to_regular(K({1, 0, 0, 0, -1, 0}), P256);
  ASSERT_TRUE(std::holds_alternative<ParabolaForm>(rp.conic));
  expect_equivalent(regular_to_implicit(rp.conic, rp.frame), K({1, 0, 0, 0, -1, 0}), tau(P256));
}

TEST(ToRegular, RejectsCircleAndDegenerate) {
  EXPECT_THROW(to_regular(K({1, 0, 1, 0, 0, -1}), P256), NotAConic);
  EXPECT_THROW(to_regular(K({1, 0, -1, 0, 0, 0}), P256), NotAConic);
  EXPECT_THROW(to_regular(K({1, 0, 1, 0, 0, 1}), P256), NotAConic);
}

TEST(TrueEccentricity, Examples) {
  CentralForm ell{Q(1, 4), pt(0, 0), Q(1)};
  expect_near(true_eccentricity(ell), newton_sqrt(Q(3)) / 2, tau(P256));
  ParabolaForm par{Q(1), pt(0, 0)};
  EXPECT_EQ(true_eccentricity(par), 1);
  expect_near(true_eccentricity(CentralForm{Q(-1), pt(0, 0), Q(2)}), newton_sqrt(Q(2)), tau(P256));
  expect_near(true_eccentricity(CentralForm{Q(-1), pt(0, 0), Q(-2)}), newton_sqrt(Q(2)), tau(P256));
  EXPECT_NEAR(true_eccentricity(ell).to_double(), 0.8660254037844386, 1e-15);
}

TEST(RegularToImplicit, Examples) {
  auto id = Frame::identity(P256);
  expect_equivalent(regular_to_implicit(CentralForm{Q(3, 4), pt(0, 0), Q(1)}, id), K({mpq_class(3, 4), 0, 1, 0, 0, -1}),
                    tau(P256));
  expect_equivalent(regular_to_implicit(ParabolaForm{Q(2), pt(0, 1)}, id), K({0, 0, 2, -1, -4, 2}), tau(P256));
  BigReal h = newton_sqrt(Q(2)) / 2;
  auto k = regular_to_implicit(CentralForm{Q(-1), pt(0, 0), Q(1)}, Frame{h, h});
  EXPECT_LE(abs(k.a), tau(P256));
  EXPECT_LE(abs(k.c), tau(P256));
  EXPECT_GT(abs(k.b), 0);
}

TEST(FocusDirectrix, ForwardExamples) {
  FocusDirectrix par{Point(Q(1, 4), Q(0)), Directrix{Q(1), Q(0), Q(-1, 4)}, Q(1)};
  expect_equivalent(focus_directrix_to_implicit(par), K({0, 0, 1, -1, 0, 0}), tau(P256));

  BigReal s3 = newton_sqrt(Q(3));
  FocusDirectrix ell{Point(s3, Q(0)), Directrix{Q(1), Q(0), Q(4) / s3}, s3 / 2};
  expect_equivalent(focus_directrix_to_implicit(ell), K({1, 0, 4, 0, 0, -4}), tau(P256));

  FocusDirectrix hyp{pt(0, 0), Directrix{Q(1), Q(0), Q(-1)}, Q(2)};
  auto k = focus_directrix_to_implicit(hyp);
  expect_equivalent(k, K({-3, 0, 1, -8, 0, -4}), tau(P256));
}

TEST(FocusDirectrix, NonUnitNormalKeepsRationalCoefficients) {
  // Directrix 2x = -2 is x = -1.
  FocusDirectrix hyp{pt(0, 0), Directrix{Q(2), Q(0), Q(-2)}, Q(2)};
  auto k = focus_directrix_to_implicit(hyp);
  EXPECT_EQ(k.a, -3);
  EXPECT_EQ(k.c, 1);
  EXPECT_EQ(k.d, -8);
  EXPECT_EQ(k.f, -4);
}

TEST(FocusDirectrix, RejectsFocusOnDirectrix) {
  FocusDirectrix bad{pt(1, 5), Directrix{Q(1), Q(0), Q(1)}, Q(1)};
  EXPECT_THROW(focus_directrix_to_implicit(bad), DegenerateInput);
}

TEST(FocusDirectrix, InverseExamples) {
  auto par = implicit_to_focus_directrix(K({0, 0, 1, -1, 0, 0}), P256);
  ASSERT_EQ(par.size(), 1u);
  EXPECT_LE(distance(par[0].focus, Point(Q(1, 4), Q(0))), tau(P256));
  expect_near(par[0].directrix.offset / par[0].directrix.nx, Q(-1, 4), tau(P256));
  EXPECT_EQ(par[0].ecc, 1);

  auto ell = implicit_to_focus_directrix(K({1, 0, 4, 0, 0, -4}), P256);
  ASSERT_EQ(ell.size(), 2u);
  BigReal s3 = newton_sqrt(Q(3));
  for (auto& fd : ell) {
    expect_near(abs(fd.focus.re()), s3, tau(P256));
    expect_near(abs(fd.directrix.offset / fd.directrix.nx), Q(4) / s3, tau(P256));
    expect_near(fd.ecc, s3 / 2, tau(P256));
  }

  auto hyp = implicit_to_focus_directrix(K({0, 1, 0, 0, 0, -1}), P256);
  ASSERT_EQ(hyp.size(), 2u);
  BigReal s2 = newton_sqrt(Q(2));
  for (auto& fd : hyp) {
    expect_near(abs(fd.focus.re()), s2, tau(P256));
    expect_near(fd.focus.re(), fd.focus.im(), tau(P256));
    expect_near(fd.ecc, s2, tau(P256));
  }

  EXPECT_THROW(implicit_to_focus_directrix(K({1, 0, 1, 0, 0, -1}), P256), CircleHasNoDirectrix);
  EXPECT_THROW(implicit_to_focus_directrix(K({1, 0, -1, 0, 0, 0}), P256), NotAConic);
}

TEST(Similarity, ApplyExamples) {
  auto circ = apply_similarity(K({1, 0, 1, 0, 0, -1}), Similarity{Q(2), pt(1, 0)});
  expect_equivalent(circ, K({1, 0, 1, -2, 0, -3}), tau(P256));
  auto par = apply_similarity(K({0, 0, 1, -1, 0, 0}), Similarity{Q(-1), pt(0, 0)});
  expect_equivalent(par, K({0, 0, 1, 1, 0, 0}), tau(P256));
  // (3/4)(x−2)² + (y−1)² − 4
  auto ell = apply_similarity(K({mpq_class(3, 4), 0, 1, 0, 0, -1}), Similarity{Q(2), pt(2, 1)});
  expect_equivalent(ell, K({mpq_class(3, 4), 0, 1, -3, -2, 0}), tau(P256));
}

TEST(Similarity, BetweenExamples) {
  auto m = similarity_between(CentralForm{Q(3, 4), pt(2, 1), Q(4)}, CentralForm{Q(3, 4), pt(0, 0), Q(1)}, P256);
  expect_near(m.s, Q(2), tau(P256));
  EXPECT_LE(distance(m.t, pt(2, 1)), tau(P256));

  CentralForm f{Q(3, 4), pt(0, 0), Q(1)};
  auto id = similarity_between(f, f, P256);
  EXPECT_EQ(id.s, 1);
  EXPECT_TRUE(id.t.is_zero());

  ParabolaForm tp{Q(1, 3), pt(2, 1)}, fp{Q(1), pt(0, 0)};
  auto mp = similarity_between(tp, fp, P256);
  expect_near(mp.s, Q(3), tau(P256));
  EXPECT_LE(distance(mp.t, pt(2, 1)), tau(P256));
  auto id2 = Frame::identity(P256);
  expect_equivalent(apply_similarity(regular_to_implicit(fp, id2), mp), regular_to_implicit(tp, id2), tau(P256));
}

TEST(Similarity, Mismatches) {
  EXPECT_THROW(similarity_between(CentralForm{Q(1, 2), pt(0, 0), Q(1)}, CentralForm{Q(3, 4), pt(0, 0), Q(1)}, P256),
               FormParameterMismatch);
  EXPECT_THROW(similarity_between(CentralForm{Q(-1), pt(0, 0), Q(-1)}, CentralForm{Q(-1), pt(0, 0), Q(1)}, P256),
               OrientationClassMismatch);
  EXPECT_THROW(similarity_between(ParabolaForm{Q(1), pt(0, 0)}, CentralForm{Q(-1), pt(0, 0), Q(1)}, P256),
               FormParameterMismatch);
}

TEST(Similarity, NegativeScaleFlipsParabola) {
  auto m = similarity_between(ParabolaForm{Q(-2), pt(1, 1)}, ParabolaForm{Q(1), pt(0, 0)}, P256);
  EXPECT_LT(m.s, 0);
}

namespace {

mpq_class small_rational(std::mt19937_64& rng, long lo, long hi) {
  std::uniform_int_distribution<long> num(lo, hi), den(1, 8);
  mpq_class q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

BigReal nonzero(std::mt19937_64& rng, long lo, long hi, Precision p) {
  for (;;) {
    mpq_class q = small_rational(rng, lo, hi);
    if (q != 0) return BigReal(q, p);
  }
}

Frame random_frame(std::mt19937_64& rng, Precision p) {
  // Angles strictly inside (−π/4, π/4) so the canonical frame is unique.
  std::uniform_real_distribution<double> ang(-0.7, 0.7);
  BigReal t(mpq_class(ang(rng)), p);
  return {cos(t), sin(t)};
}

RegularConic random_regular(std::mt19937_64& rng, int k, Precision p) {
  Point center(BigReal(small_rational(rng, -20, 20), p), BigReal(small_rational(rng, -20, 20), p));
  if (k % 3 == 2) return ParabolaForm{nonzero(rng, -10, 10, p), center};
  BigReal u = nonzero(rng, -15, 7, p) / 8;  // u in [-15/8, 7/8]
  while (u == 1) u = nonzero(rng, -15, 7, p) / 8;
  BigReal rhs = nonzero(rng, 1, 30, p);
  if (u.sign() < 0 && k % 2 == 0) rhs = -rhs;
  return CentralForm{u, center, rhs};
}

// Regular-coordinate sample points on a regular conic.
std::vector<Point> sample_regular(const RegularConic& rc, int n) {
  std::vector<Point> out;
  if (const auto* par = std::get_if<ParabolaForm>(&rc)) {
    for (int i = 0; i < n; ++i) {
      BigReal t(i - n / 2, par->lambda.precision());
      BigReal y = par->vertex.im() + t / 3;
      out.emplace_back(par->lambda * (y - par->vertex.im()) * (y - par->vertex.im()) + par->vertex.re(), y);
    }
    return out;
  }
  const auto& c = std::get<CentralForm>(rc);
  Precision p = c.u.precision();
  for (int i = 0; i < n; ++i) {
    BigReal t = BigReal(i, p) / n * 2 * pi(p);
    BigReal dx, dy;
    if (c.u.sign() > 0) {
      dx = sqrt(c.rhs / c.u) * cos(t);
      dy = sqrt(c.rhs) * sin(t);
    } else if (c.rhs.sign() > 0) {
      BigReal s = BigReal(i - n / 2, p) / 5;
      dx = sqrt(c.rhs / -c.u) * sinh(s);
      dy = sqrt(c.rhs) * cosh(s) * (i % 2 ? 1 : -1);
    } else {
      BigReal s = BigReal(i - n / 2, p) / 5;
      dx = sqrt(c.rhs / c.u) * cosh(s) * (i % 2 ? 1 : -1);
      dy = sqrt(-c.rhs) * sinh(s);
    }
    out.emplace_back(c.center.re() + dx, c.center.im() + dy);
  }
  return out;
}

}  // namespace

TEST(ConicProperty, RegularRoundTrip) {
  std::mt19937_64 rng(4242);
  const BigReal tol = tau(P256);
  for (int k = 0; k < 500; ++k) {
    RegularConic rc = random_regular(rng, k, P256);
    Frame fr = random_frame(rng, P256);
    ConicImplicit imp = regular_to_implicit(rc, fr);
    // Random overall scale.
    imp = imp.scaled(nonzero(rng, -9, 9, P256));
    RegularPlacement back = to_regular(imp, P256);
    ASSERT_EQ(back.conic.index(), rc.index()) << k;
    // Same conic as a set.
    expect_equivalent(regular_to_implicit(back.conic, back.frame), imp, tol * 64);
    if (const auto* c = std::get_if<CentralForm>(&rc)) {
      // Rotations within (−π/4, π/4) and u < 1 make the regular form unique.
      const auto& b = std::get<CentralForm>(back.conic);
      expect_near(b.u, c->u, tol * 64);
      expect_near(b.rhs, c->rhs, tol * 64 * max(BigReal(1, P256), abs(c->rhs)));
      EXPECT_LE(distance(b.center, c->center), tol * 64 * 32);
      expect_near(back.frame.cos, fr.cos, tol * 64);
      expect_near(back.frame.sin, fr.sin, tol * 64);
    }
  }
}

TEST(ConicProperty, FocusDirectrixRoundTrip) {
  std::mt19937_64 rng(99);
  const BigReal tol = tau(P128);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    Point focus(BigReal(small_rational(rng, -10, 10), P128), BigReal(small_rational(rng, -10, 10), P128));
    Directrix dir{BigReal(small_rational(rng, -5, 5), P128), BigReal(small_rational(rng, -5, 5), P128),
                  BigReal(small_rational(rng, -10, 10), P128)};
    BigReal ecc = nonzero(rng, 1, 30, P128) / 10;
    if (dir.nx.is_zero() && dir.ny.is_zero()) continue;
    BigReal n = hypot(dir.nx, dir.ny);
    if (abs(dir.nx * focus.re() + dir.ny * focus.im() - dir.offset) / n < BigReal(mpq_class(1, 100), P128)) continue;
    FocusDirectrix fd{focus, dir, ecc};
    ConicImplicit k2 = focus_directrix_to_implicit(fd);
    auto back = implicit_to_focus_directrix(k2, P128);
    bool matched = false;
    for (auto& g : back) {
      BigReal gn = hypot(g.directrix.nx, g.directrix.ny);
      BigReal sgn(dir.nx * g.directrix.nx + dir.ny * g.directrix.ny > 0 ? 1 : -1, P128);
      BigReal scale = max(BigReal(1, P128), max(focus.abs(), abs(dir.offset) / n));
      BigReal t = tol * 1024 * scale;
      if (distance(g.focus, focus) <= t && abs(g.ecc - ecc) <= t &&
          abs(g.directrix.nx / gn - sgn * dir.nx / n) <= t && abs(g.directrix.ny / gn - sgn * dir.ny / n) <= t &&
          abs(g.directrix.offset / gn - sgn * dir.offset / n) <= t)
        matched = true;
    }
    EXPECT_TRUE(matched) << "case " << k;
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(ConicProperty, SimilaritySoundnessAndClassInvariance) {
  std::mt19937_64 rng(777);
  const BigReal tol = tau(P256);
  for (int k = 0; k < 200; ++k) {
    RegularConic fixed = random_regular(rng, k, P256);
    RegularConic target;
    BigReal s = nonzero(rng, 1, 40, P256) / 8;
    Point t(BigReal(small_rational(rng, -20, 20), P256), BigReal(small_rational(rng, -20, 20), P256));
    if (const auto* c = std::get_if<CentralForm>(&fixed)) {
      target = CentralForm{c->u, c->center * s + t, c->rhs * s * s};
    } else {
      const auto& p = std::get<ParabolaForm>(fixed);
      if (k % 2) s = -s;
      target = ParabolaForm{p.lambda / s, p.vertex * s + t};
    }
    Similarity m = similarity_between(target, fixed, P256);
    auto id = Frame::identity(P256);
    ConicImplicit tk = regular_to_implicit(target, id);
    for (auto& p : sample_regular(fixed, 20)) EXPECT_LE(residual(tk, m.apply(p)), tol);

    ConicImplicit fk = regular_to_implicit(fixed, random_frame(rng, P256));
    EXPECT_EQ(classify(apply_similarity(fk, m), P256), classify(fk, P256));
  }
}
