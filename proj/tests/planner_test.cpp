#include <gtest/gtest.h>

#include <random>

#include "conicon/executor.hpp"
#include "conicon/planner.hpp"

using namespace conicon;

namespace {

const Precision P128{128};
const Precision P256{256};

BigReal Q(long n, long d = 1, Precision p = P256) { return BigReal(mpq_class(n, d), p); }
ConicImplicit K(std::array<mpq_class, 6> c, Precision p = P256) { return ConicImplicit::from_rationals(c, p); }

// Newton on x³ = a, independent of MPFR's cbrt.
BigReal newton_cbrt(const BigReal& a) {
  BigReal x = a > 1 ? a : BigReal(1, a.precision());
  for (int i = 0; i < 500; ++i) x = x - (x * x * x - a) / (x * x * 3);
  return x;
}

// Newton on 4x³ − 3x − q from x = 1 converges to the largest root.
BigReal newton_trisect(const BigReal& q) {
  BigReal x(1, q.precision());
  for (int i = 0; i < 500; ++i) {
    BigReal f = x * x * x * 4 - x * 3 - q;
    BigReal df = x * x * 12 - 3;
    if (df.is_zero()) break;
    x = x - f / df;
  }
  return x;
}

int count_conic_steps(const ConstructionProgram& p) {
  int n = 0;
  for (auto& s : p.steps) n += std::holds_alternative<ConicIntersect>(s);
  return n;
}

const std::array<mpq_class, 6> kEllipse{1, 0, 4, 0, 0, -4};
const std::array<mpq_class, 6> kParabola{0, 0, 1, -1, 0, 0};
const std::array<mpq_class, 6> kRotatedHyperbola{0, 1, 0, 0, 0, -1};
const std::array<mpq_class, 6> kConjugateHyperbola{1, 0, -4, 0, 0, -4};

}  // namespace

TEST(GadgetAlgebra, CubeRootIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(1, 1000000), den(1, 1000);
  for (mpq_class u : {mpq_class(3, 4), mpq_class(-1), mpq_class(-3), mpq_class(0)}) {
    for (int k = 0; k < 50; ++k) {
      mpq_class r(num(rng), den(rng));
      r.canonicalize();
      auto g = cbrt_gadget(r, u);
      // y = x²:  x⁴ + (1 + E_c) x² + D x
      EXPECT_EQ(1 + g.circle_E, 0);
      EXPECT_EQ(g.D, -r);
      // conic − circle = (u − 1)(x² − y)
      EXPECT_EQ(g.conic_E - g.circle_E, 1 - u);
    }
  }
}

TEST(GadgetAlgebra, TrisectionIsExact) {
  for (mpq_class u : {mpq_class(3, 4), mpq_class(-1), mpq_class(0)}) {
    for (mpq_class q : {mpq_class(1), mpq_class(-1), mpq_class(1, 2), mpq_class(-7, 10)}) {
      for (mpq_class c : {mpq_class(1), mpq_class(2), mpq_class(1, 4)}) {
        auto g = trisect_gadget(q, c, u);
        EXPECT_EQ(1 + g.circle_E, -3 * c * c / 4);
        EXPECT_EQ(g.D, -q * c * c * c / 4);
      }
    }
  }
  auto unit = trisect_gadget(mpq_class(1, 2), mpq_class(1), mpq_class(3, 4));
  EXPECT_EQ(unit.circle_E, mpq_class(-7, 4));
}

TEST(GadgetCbrt, SelectedPoints) {
  auto p8 = gadget_cbrt(Q(8), Q(3, 4));
  EXPECT_LE(distance(p8.selected, Point(Q(2), Q(4))), tau(P256));
  auto p1 = gadget_cbrt(Q(1), Q(-3));
  EXPECT_LE(distance(p1.selected, Point(Q(1), Q(1))), tau(P256));
  auto p2 = gadget_cbrt(Q(2), Q(3, 4));
  BigReal x = newton_cbrt(Q(2));
  EXPECT_LE(distance(p2.selected, Point(x, x * x)), tau(P256));
  EXPECT_NEAR(p2.selected.im().to_double(), 1.5874010519681994, 1e-15);
}

TEST(GadgetTrisect, SelectedRoots) {
  EXPECT_LE(abs(gadget_trisect(Q(1), 1, Q(3, 4)).selected.re() - 1), tau(P256));
  EXPECT_LE(abs(gadget_trisect(Q(-1), 1, Q(3, 4)).selected.re() - Q(1, 2)), tau(P256));
  auto p = gadget_trisect(Q(1, 2), 1, Q(3, 4));
  EXPECT_LE(abs(p.selected.re() - newton_trisect(Q(1, 2))), tau(P256));
  EXPECT_NEAR(p.selected.re().to_double(), 0.9396926207859084, 1e-15);
}

TEST(GadgetTrisect, SelectedRootInRange) {
  for (int k = -100; k <= 100; ++k) {
    BigReal q(mpq_class(k, 100), P128);
    for (mpq_class c : {mpq_class(1), mpq_class(4), mpq_class(1, 8)}) {
      auto p = gadget_trisect(q, c, BigReal(-1, P128));
      BigReal t = p.selected.re() / BigReal(c, P128);
      EXPECT_GE(t, BigReal(mpq_class(1, 2), P128) - tau(P128));
      EXPECT_LE(t, BigReal(1, P128) + tau(P128));
      for (auto& o : p.others) EXPECT_LE(o.re(), p.selected.re());
    }
  }
}

TEST(ChooseGadgetScale, Examples) {
  mpq_class n = choose_gadget_scale(GadgetKind::CubeRoot, Q(3, 4), Q(2), 1);
  mpq_class r = n * n * n * 2;
  EXPECT_GE(r, 1);
  EXPECT_LT(r, 8);

  mpq_class plus = choose_gadget_scale(GadgetKind::CubeRoot, Q(-1), Q(2), 1);
  EXPECT_EQ(plus, mpq_class(1, 2));
  EXPECT_GT(gadget_rhs(GadgetKind::CubeRoot, Q(-1), plus, Q(2)), 0);

  mpq_class minus = choose_gadget_scale(GadgetKind::CubeRoot, Q(-1), Q(2), -1);
  EXPECT_LT(gadget_rhs(GadgetKind::CubeRoot, Q(-1), minus, Q(2)), 0);

  EXPECT_THROW(choose_gadget_scale(GadgetKind::Trisection, Q(-1), Q(0), -1), ClassUnreachable);
}

TEST(ChooseGadgetScale, ClassMarginHolds) {
  for (long un : {-1, -3, -1000}) {
    for (long ud : {1, 7, 100}) {
      BigReal u = Q(un, ud);
      for (int sign : {1, -1}) {
        for (auto [num, den] : std::vector<std::pair<long, long>>{{1, 1000}, {1, 1}, {1000, 1}, {17, 3}}) {
          BigReal r = Q(num, den);
          mpq_class n = choose_gadget_scale(GadgetKind::CubeRoot, u, r, sign);
          BigReal rs = r * BigReal(mpq_class(n * n * n), P256);
          BigReal t1 = rs * rs / (-u * 4), t2 = u * u / 4;
          if (sign > 0) EXPECT_GE(t2, t1 * 2);
          else EXPECT_GE(t1, t2 * 2);
          EXPECT_EQ(gadget_rhs(GadgetKind::CubeRoot, u, n, r).sign(), sign);
        }
        for (auto [num, den] : std::vector<std::pair<long, long>>{{1, 10}, {-1, 10}, {9, 10}, {-9, 10}, {1, 1}}) {
          BigReal q = Q(num, den);
          mpq_class c = choose_gadget_scale(GadgetKind::Trisection, u, q, sign);
          EXPECT_EQ(gadget_rhs(GadgetKind::Trisection, u, c, q).sign(), sign);
        }
      }
    }
  }
}

TEST(ReduceToFixed, Examples) {
  CentralForm g{Q(3, 4), Point(Q(4), Q(3, 8)), Q(4)};
  CentralForm c{Q(3, 4), Point(Q(0), Q(0)), Q(1)};
  Similarity m = reduce_to_fixed(g, c, P256);
  EXPECT_LE(abs(m.s - 2), tau(P256));
  EXPECT_LE(distance(m.t, Point(Q(4), Q(3, 8))), tau(P256));

  Similarity id = reduce_to_fixed(c, c, P256);
  EXPECT_EQ(id.s, 1);

  Similarity flip = reduce_to_fixed(ParabolaForm{Q(-1, 5), Point(Q(1), Q(0))}, ParabolaForm{Q(1), Point(Q(0), Q(0))}, P256);
  EXPECT_LT(flip.s, 0);
}

TEST(Compile, CubeRootOfTwoUsesOneConicStep) {
  auto prog = compile(*parse("cbrt(2)"), K(kEllipse), Mode::Fixed, P256);
  EXPECT_EQ(count_conic_steps(prog), 1);
  EXPECT_EQ(prog.metadata.conic_depth, 1);
  Valuation v = execute(prog, P256);
  EXPECT_LE(abs(v.point(prog.final).re() - newton_cbrt(Q(2))), tau(P256));
  EXPECT_NEAR(v.point(prog.final).re().to_double(), 1.2599210498948732, 1e-15);
}

TEST(Compile, SquareRootNeedsNoConic) {
  for (auto k : {kEllipse, kParabola, kRotatedHyperbola}) {
    auto prog = compile(*parse("sqrt(2)"), K(k), Mode::Fixed, P256);
    EXPECT_EQ(count_conic_steps(prog), 0);
    EXPECT_EQ(prog.metadata.conic_depth, 0);
  }
}

TEST(Compile, NestedDepth) {
  auto prog = compile(*parse("cbrt(cbrt(2))"), K(kEllipse), Mode::Fixed, P256);
  EXPECT_EQ(prog.metadata.conic_depth, 2);
  EXPECT_EQ(prog.metadata.cbrt_count, 2);
}

TEST(Compile, RejectsCircleAndDegenerateFixedConic) {
  EXPECT_THROW(compile(*parse("cbrt(2)"), K({1, 0, 1, 0, 0, -1}), Mode::Fixed, P256), InvalidFixedConic);
  EXPECT_THROW(compile(*parse("cbrt(2)"), K({1, 0, -1, 0, 0, 0}), Mode::Fixed, P256), InvalidFixedConic);
}

TEST(Compile, DivisionByZeroInConstants) {
  EXPECT_THROW(compile(*parse("cbrt(1/(2-2))"), K(kEllipse), Mode::Fixed, P256), DivisionByZero);
}

TEST(Compile, ZeroRadicandEmitsNoConic) {
  auto prog = compile(*parse("cbrt(1 - 1)"), K(kEllipse), Mode::Fixed, P256);
  EXPECT_EQ(count_conic_steps(prog), 0);
  EXPECT_TRUE(execute(prog, P256).point(prog.final).is_zero());
}

TEST(Compile, FixedModeReferencesOnlyTheFixedConic) {
  for (auto k : {kEllipse, kParabola, kRotatedHyperbola, kConjugateHyperbola}) {
    auto prog = compile(*parse("cbrt(1/2 + i/3) + cbrt(-5)"), K(k), Mode::Fixed, P256);
    for (auto& s : prog.steps) {
      if (const auto* ci = std::get_if<ConicIntersect>(&s)) {
        EXPECT_TRUE(std::holds_alternative<FixedRef>(ci->conic));
      }
    }
    EXPECT_TRUE(audit(prog).pass());
  }
}

TEST(Compile, AnglePathsAgreeWithOracle) {
  // Radicands covering the quarter-turn, generic and near-π paths, and both
  // half planes.
  const char* cases[] = {"cbrt(i)",          "cbrt(-i)",       "cbrt(1/20 + i)", "cbrt(-1/20 - i)", "cbrt(1 + i)",
                         "cbrt(-1 + i)",     "cbrt(-1 - i/5)", "cbrt(-1 + i/5)", "cbrt(3 - 4*i)",   "cbrt(-8)",
                         "cbrt(-8 + i/100)", "cbrt(1/2)",      "cbrt(-1/3)"};
  for (auto k : {kEllipse, kParabola, kRotatedHyperbola, kConjugateHyperbola}) {
    for (Mode mode : {Mode::Fixed, Mode::Lemma}) {
      for (const char* text : cases) {
        Report r = verify(*parse(text), K(k), mode, P256);
        EXPECT_TRUE(r.pass()) << text << " mode " << to_string(mode) << " err " << r.abs_error;
      }
    }
  }
}

TEST(CompileProperty, ClassMatchTotalityOverHyperbolas) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    std::array<mpq_class, 6> co{mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)),
                                mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)),
                                mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng))};
    for (auto& c : co) c.canonicalize();
    ConicImplicit C = K(co, P128);
    if (classify(C, P128) != ConicClass::Hyperbola) continue;
    for (const char* text : {"cbrt(7)", "cbrt(1/1000)", "cbrt(2 + 3*i)", "cbrt(-1 + i/10)"}) {
      EXPECT_NO_THROW({
        Report r = verify(*parse(text), C, Mode::Fixed, P128);
        EXPECT_TRUE(r.pass()) << text;
      });
    }
    ++checked;
  }
  EXPECT_GT(checked, 10);
}
