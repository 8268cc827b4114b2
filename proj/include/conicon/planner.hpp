#pragma once

// Lowers an expression to a construction program. Cube roots go through
// the circle/conic gadgets; in fixed mode each gadget conic is replaced by
// the fixed conic via a similarity.

#include <cstdlib>
#include <map>
#include <optional>
#include <utility>
#include <unordered_map>
#include <vector>

#include "conicon/conic.hpp"
#include "conicon/errors.hpp"
#include "conicon/expr.hpp"
#include "conicon/program.hpp"

namespace conicon {

enum class GadgetKind { CubeRoot, Trisection };

inline mpq_class constant_like(const mpq_class&, long v) { return mpq_class(v); }
inline BigReal constant_like(const BigReal& x, long v) { return BigReal(v, x.precision()); }

/// Gadget pair: the circle x² + y² + D x + E_c y = 0 and the conic
/// u x² + y² + D x + E y = 0 with E = E_c + 1 − u. Their difference is
/// (1 − u)(x² − y), so on the intersection y = x² and
/// x⁴ + (1 + E_c) x² + D x = 0.
template <class T>
struct GadgetCoefficients {
  T D, circle_E, conic_E;
};

/// Cube root of r′: x⁴ − r′x.
template <class T>
GadgetCoefficients<T> cbrt_gadget(const T& r_scaled, const T& u) {
  T one = constant_like(u, 1);
  T circle_E = -one;
  return {-r_scaled, circle_E, circle_E + one - u};
}

/// Trisection with scale c: x(x³ − (3c²/4)x − qc³/4), i.e. x = c·t with
/// 4t³ − 3t − q = 0.
template <class T>
GadgetCoefficients<T> trisect_gadget(const T& q, const T& c, const T& u) {
  T one = constant_like(u, 1);
  T c2 = c * c;
  T circle_E = -(one + c2 * 3 / 4);
  return {-(q * c2 * c) / 4, circle_E, circle_E + one - u};
}

/// Regular form of u x² + y² + D x + E y = 0 (a parabola when u = 0).
inline RegularConic gadget_regular(const BigReal& D, const BigReal& E, const BigReal& u) {
  if (u.is_zero()) {
    BigReal lambda = BigReal(-1, D.precision()) / D;
    return ParabolaForm{lambda, Point(E * E / (D * 4), -E / 2)};
  }
  return CentralForm{u, Point(-D / (u * 2), -E / 2), D * D / (u * 4) + E * E / 4};
}

/// Compile-time description of one gadget.
struct GadgetPlan {
  GadgetCoefficients<BigReal> coefficients;
  Point circle_center;  // the circle passes through the origin
  RegularConic conic;
  Point selected;  // (x*, x*²)
  std::vector<Point> others;

  BigReal min_separation() const {
    BigReal best(selected.precision());
    bool first = true;
    for (const auto& p : others) {
      BigReal d = distance(selected, p);
      if (first || d < best) best = d;
      first = false;
    }
    return best;
  }
};

namespace detail {

inline GadgetPlan make_plan(GadgetCoefficients<BigReal> k, const BigReal& u, const BigReal& x,
                            const std::vector<BigReal>& other_x) {
  GadgetPlan plan{k, Point(-k.D / 2, -k.circle_E / 2), gadget_regular(k.D, k.conic_E, u), Point(x, x * x), {}};
  for (const auto& o : other_x) plan.others.emplace_back(o, o * o);
  return plan;
}

}  // namespace detail

/// Cube-root gadget for r′ > 0: selects (∛r′, ∛r′²); the origin is the
/// only other real intersection.
inline GadgetPlan gadget_cbrt(const BigReal& r_scaled, const BigReal& u) {
  if (r_scaled.sign() <= 0) throw DegenerateGadget("cube-root gadget needs a positive radicand");
  BigReal x = cbrt(r_scaled);
  return detail::make_plan(cbrt_gadget(r_scaled, u), u, x, {BigReal(r_scaled.precision())});
}

/// Trisection gadget for q = cos φ: selects x = c·cos(φ/3), the largest
/// root of the scaled cubic.
inline GadgetPlan gadget_trisect(const BigReal& q, const mpq_class& c, const BigReal& u) {
  Precision p = q.precision();
  BigReal clamped = max(BigReal(-1, p), min(BigReal(1, p), q));
  BigReal phi = acos(clamped);
  BigReal cc(c, p);
  BigReal third = pi(p) * 2 / 3;
  BigReal x = cc * cos(phi / 3);
  std::vector<BigReal> others{BigReal(p), cc * cos(phi / 3 + third), cc * cos(phi / 3 - third)};
  return detail::make_plan(trisect_gadget(q, cc, u), u, x, others);
}

/// Completed-square right-hand side of the gadget conic for a given scale.
/// Cube root: scale n, radicand n³·magnitude. Trisection: scale c,
/// magnitude q.
inline BigReal gadget_rhs(GadgetKind kind, const BigReal& u, const mpq_class& scale, const BigReal& magnitude) {
  Precision p = u.precision();
  GadgetCoefficients<BigReal> k = kind == GadgetKind::CubeRoot
                                      ? cbrt_gadget(magnitude * BigReal(mpq_class(scale * scale * scale), p), u)
                                      : trisect_gadget(magnitude, BigReal(scale, p), u);
  if (u.is_zero()) throw DegenerateGadget("parabolic gadgets have no orientation class");
  return std::get<CentralForm>(gadget_regular(k.D, k.conic_E, u)).rhs;
}

/// Power-of-two scale for a gadget. For ellipses and parabolas it only
/// conditions the problem (radicand in [1, 8), c = 1). For hyperbolas it
/// also puts the gadget conic in the requested orientation class, with the
/// dominant term of the rhs at least twice the other one.
inline mpq_class choose_gadget_scale(GadgetKind kind, const BigReal& u, const BigReal& magnitude, int class_sign) {
  Precision p = u.precision();
  auto pow2q = [](int k) {
    mpq_class v = 1;
    if (k >= 0) mpz_mul_2exp(v.get_num_mpz_t(), v.get_num_mpz_t(), static_cast<mp_bitcnt_t>(k));
    else mpz_mul_2exp(v.get_den_mpz_t(), v.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    return v;
  };

  if (u.sign() > 0 && class_sign < 0)
    throw ClassUnreachable("an elliptic gadget always has a positive right-hand side");

  if (kind == GadgetKind::CubeRoot) {
    if (magnitude.sign() <= 0) throw DegenerateGadget("cube-root gadget needs a positive radicand");
    int k = 0;
    BigReal r = magnitude;
    while (r < 1) r = ldexp(r, 3), ++k;
    while (r >= 8) r = ldexp(r, -3), --k;
    if (u.sign() >= 0) return pow2q(k);

    BigReal au3 = -u * u * u;
    auto ok = [&](const BigReal& rs) {
      BigReal r2 = rs * rs;
      return class_sign > 0 ? r2 * 2 <= au3 : r2 >= au3 * 2;
    };
    int step = class_sign > 0 ? -1 : 1;
    for (int it = 0; it < 4000 && !ok(r); ++it) {
      r = ldexp(r, 3 * step);
      k += step;
    }
    if (!ok(r)) throw ClassUnreachable("no cube-root gadget scale reaches the orientation class");
    return pow2q(k);
  }

  if (u.sign() >= 0) return 1;
  if (magnitude.is_zero() && class_sign < 0)
    throw ClassUnreachable("q = 0 cannot reach the negative orientation class");
  BigReal au = -u;
  auto terms = [&](int j) {
    BigReal c = ldexp(BigReal(1, p), j);
    BigReal c2 = c * c;
    BigReal t1 = magnitude * magnitude * c2 * c2 * c2 / (au * 64);
    BigReal e = u + c2 * 3 / 4;
    BigReal t2 = e * e / 4;
    return std::pair{t1, t2};
  };
  auto ok = [&](int j) {
    auto [t1, t2] = terms(j);
    return class_sign > 0 ? t2 >= t1 * 2 : t1 >= t2 * 2;
  };
  int j = 0;
  int step = class_sign > 0 ? -1 : 1;
  for (int it = 0; it < 4000 && !ok(j); ++it) j += step;
  if (!ok(j)) throw ClassUnreachable("no trisection gadget scale reaches the orientation class");
  return pow2q(j);
}

/// Similarity carrying the fixed conic's regular form onto a gadget conic.
inline Similarity reduce_to_fixed(const RegularConic& gadget, const RegularConic& fixed, Precision prec) {
  return similarity_between(gadget, fixed, prec);
}

/// Appends steps and tracks their compile-time values.
class ProgramBuilder {
 public:
  ProgramBuilder(Precision prec, RegularPlacement placement) : prec_(prec), placement_(std::move(placement)) {
    literal(GaussianRational::real(0));
    literal(GaussianRational::real(1));
  }

  Precision precision() const { return prec_; }
  const RegularPlacement& placement() const { return placement_; }

  StepId literal(const GaussianRational& g) {
    std::string key = rational_string(g.re) + "," + rational_string(g.im);
    if (auto it = literals_.find(key); it != literals_.end()) return it->second;
    StepId id = push(PointLit{g}, g.value(prec_));
    literals_.emplace(std::move(key), id);
    return id;
  }
  StepId literal(const mpq_class& re, const mpq_class& im = 0) { return literal(GaussianRational{re, im}); }

  StepId field(FieldOp op, StepId a, StepId b = 0) {
    BigComplex va = point(a);
    BigComplex v = arity(op) == 1 ? apply_field(op, va, va) : apply_field(op, va, point(b));
    std::vector<StepId> args{a};
    if (arity(op) == 2) args.push_back(b);
    return push(MacroField{op, std::move(args)}, std::move(v));
  }

  StepId add(StepId a, StepId b) { return field(FieldOp::Add, a, b); }
  StepId sub(StepId a, StepId b) { return field(FieldOp::Sub, a, b); }
  StepId mul(StepId a, StepId b) { return field(FieldOp::Mul, a, b); }
  StepId div(StepId a, StepId b) { return field(FieldOp::Div, a, b); }
  StepId neg(StepId a) { return field(FieldOp::Neg, a); }
  StepId conj(StepId a) { return field(FieldOp::Conj, a); }
  StepId scale(StepId a, const mpq_class& re, const mpq_class& im = 0) {
    if (re == 1 && im == 0) return a;
    return mul(a, literal(re, im));
  }

  StepId sqrt(StepId a) { return push(MacroSqrt{a}, point(a).sqrt()); }

  StepId param(ConicParamKind kind) {
    if (auto it = params_.find(kind); it != params_.end()) return it->second;
    StepId id = push(ConicParam{kind}, conic_param_value(kind, placement_, prec_));
    params_.emplace(kind, id);
    return id;
  }

  StepId circle(StepId center, StepId through) { return push(CircleDef{center, through}, std::nullopt); }

  StepId conic_intersect(StepId circle, ConicRef ref, SelectorHint hint) {
    BigComplex v = hint.expected;
    return push(ConicIntersect{circle, std::move(ref), std::move(hint)}, std::move(v));
  }

  const BigComplex& point(StepId id) const {
    const auto& v = values_.at(id);
    if (!v) throw MalformedProgram("step is not a point");
    return *v;
  }

  std::vector<Step> take_steps() { return std::move(steps_); }

 private:
  StepId push(Step s, std::optional<BigComplex> v) {
    steps_.push_back(std::move(s));
    values_.push_back(std::move(v));
    return steps_.size() - 1;
  }

  Precision prec_;
  RegularPlacement placement_;
  std::vector<Step> steps_;
  std::vector<std::optional<BigComplex>> values_;
  std::map<std::string, StepId> literals_;
  std::map<ConicParamKind, StepId> params_;
};

namespace detail {

class Compiler {
 public:
  Compiler(const ConicImplicit& C, Mode mode, Precision prec)
      : mode_(mode), prec_(prec), b_(prec, to_regular(C, prec)) {
    const auto& rc = b_.placement().conic;
    parabola_ = std::holds_alternative<ParabolaForm>(rc);
    if (const auto* c = std::get_if<CentralForm>(&rc)) {
      u_ = c->u;
      class_sign_ = c->class_sign();
    } else {
      u_ = BigReal(prec);
      class_sign_ = 1;
    }
  }

  struct Compiled {
    StepId id;
    int depth;
  };

  /// Shared subtrees compile once.
  Compiled node(const Expr& e) {
    if (auto it = memo_.find(&e); it != memo_.end()) return it->second;
    Compiled c = build(e);
    memo_.emplace(&e, c);
    return c;
  }

  ProgramBuilder& builder() { return b_; }

 private:
  Compiled build(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Lit: return {b_.literal(e.literal()), 0};
      case ExprKind::Add: return binary(FieldOp::Add, e);
      case ExprKind::Sub: return binary(FieldOp::Sub, e);
      case ExprKind::Mul: return binary(FieldOp::Mul, e);
      case ExprKind::Div: return binary(FieldOp::Div, e);
      case ExprKind::Neg: {
        auto c = node(*e.child());
        return {b_.neg(c.id), c.depth};
      }
      case ExprKind::Conj: {
        auto c = node(*e.child());
        return {b_.conj(c.id), c.depth};
      }
      case ExprKind::Sqrt: {
        auto c = node(*e.child());
        return {b_.sqrt(c.id), c.depth};
      }
      case ExprKind::Cbrt: {
        auto c = node(*e.child());
        bool emitted = false;
        StepId id = cube_root(c.id, emitted);
        return {id, c.depth + (emitted ? 1 : 0)};
      }
    }
    throw MalformedProgram("unknown expression node");
  }

  Compiled binary(FieldOp op, const Expr& e) {
    auto l = node(*e.lhs());
    auto r = node(*e.rhs());
    return {b_.field(op, l.id, r.id), std::max(l.depth, r.depth)};
  }

  StepId real_part(StepId w) { return b_.scale(b_.add(w, b_.conj(w)), mpq_class(1, 2)); }
  StepId imag_part(StepId w) { return b_.div(b_.sub(w, b_.conj(w)), b_.literal(0, 2)); }
  StepId half_sqrt(long n) { return b_.scale(b_.sqrt(b_.literal(n)), mpq_class(1, 2)); }
  // 4x² − 1
  StepId triple_factor(StepId x) { return b_.sub(b_.scale(b_.mul(x, x), 4), b_.literal(1)); }

  StepId cube_root(StepId w, bool& emitted) {
    const BigComplex v = b_.point(w);
    StepId R = b_.sqrt(b_.mul(w, b_.conj(w)));
    BigReal r = b_.point(R).re();
    if (r <= pow2(-1.5 * prec_.bits() - 3, prec_)) return b_.literal(0);

    emitted = true;
    StepId CR = cube_root_positive(R);

    if (abs(v.im()) <= pow2(-static_cast<double>(prec_.bits()) + 16, prec_) * r) {
      if (v.re().sign() > 0) return CR;
      // arg ±π/3
      StepId s = half_sqrt(3);
      if (v.im().sign() < 0) s = b_.neg(s);
      return b_.mul(CR, b_.add(b_.literal(mpq_class(1, 2)), b_.mul(s, b_.literal(0, 1))));
    }

    StepId re = real_part(w), im = imag_part(w);
    StepId Q = b_.div(re, R), SIN_T = b_.div(im, R);
    BigReal q = b_.point(Q).re();
    long sgn = v.im().sign() >= 0 ? 1 : -1;

    StepId COS, SIN;
    if (abs(q) < BigReal(mpq_class(1, 10), prec_)) {
      // |θ| = π/2 + φ′ with |φ′| small: trisect φ′ via cos φ′ = |sin θ|,
      // then add π/6.
      StepId q1 = b_.scale(SIN_T, sgn);
      StepId C1 = trisect(q1);
      StepId sin_phi = b_.neg(Q);
      StepId S1 = b_.div(sin_phi, triple_factor(C1));
      COS = b_.sub(b_.mul(C1, half_sqrt(3)), b_.scale(S1, mpq_class(1, 2)));
      SIN = b_.div(SIN_T, triple_factor(COS));
    } else if (q < BigReal(mpq_class(-9, 10), prec_)) {
      // |θ| = 3π/4 + φ′: trisect φ′, then add π/4.
      StepId s2 = half_sqrt(2);
      StepId sin_abs = b_.scale(SIN_T, sgn);
      StepId q1 = b_.mul(b_.add(b_.neg(Q), sin_abs), s2);
      StepId C1 = trisect(q1);
      StepId sin_phi = b_.mul(b_.neg(b_.add(sin_abs, Q)), s2);
      StepId S1 = b_.div(sin_phi, triple_factor(C1));
      COS = b_.mul(b_.sub(C1, S1), s2);
      SIN = b_.scale(b_.mul(b_.add(C1, S1), s2), sgn);
    } else {
      COS = trisect(Q);
      SIN = b_.div(SIN_T, triple_factor(COS));
    }
    return b_.mul(CR, b_.add(COS, b_.mul(SIN, b_.literal(0, 1))));
  }

  StepId cube_root_positive(StepId R) {
    BigReal r = b_.point(R).re();
    mpq_class n = choose_gadget_scale(GadgetKind::CubeRoot, u_, r, class_sign_);
    mpq_class n3 = n * n * n;
    StepId D = b_.scale(R, -n3);
    BigReal r_scaled = -b_.point(D).re();
    GadgetPlan plan = gadget_cbrt(r_scaled, u_);
    StepId X = run_gadget(plan, D, b_.literal(-1));
    return n == 1 ? X : b_.div(X, b_.literal(n));
  }

  /// cos(acos(q)/3) for the step holding q.
  StepId trisect(StepId Q) {
    BigReal q = b_.point(Q).re();
    mpq_class c = choose_gadget_scale(GadgetKind::Trisection, u_, q, class_sign_);
    mpq_class c2 = c * c;
    StepId D = b_.scale(Q, -(c2 * c) / 4);
    StepId Ec = b_.literal(-(1 + c2 * 3 / 4));
    GadgetPlan plan = gadget_trisect(q, c, u_);
    StepId X = run_gadget(plan, D, Ec);
    return c == 1 ? X : b_.div(X, b_.literal(c));
  }

  /// Emits the gadget and returns the step holding the selected x.
  StepId run_gadget(const GadgetPlan& plan, StepId D, StepId Ec) {
    StepId zero = b_.literal(0);
    StepId half_neg = b_.literal(mpq_class(-1, 2));
    StepId half_neg_i = b_.literal(0, mpq_class(-1, 2));
    StepId center = b_.add(b_.mul(D, half_neg), b_.mul(Ec, half_neg_i));

    StepId E = b_.add(Ec, b_.literal(1));
    StepId u{};
    if (!parabola_) {
      u = b_.param(ConicParamKind::FormParam);
      E = b_.sub(E, u);
    }

    StepId g_center, g_rhs;  // central: center, rhs; parabola: vertex, lambda
    if (parabola_) {
      g_rhs = b_.div(b_.literal(-1), D);
      g_center = b_.add(b_.div(b_.mul(E, E), b_.scale(D, 4)), b_.mul(E, half_neg_i));
    } else {
      g_center = b_.add(b_.div(D, b_.scale(u, -2)), b_.mul(E, half_neg_i));
      g_rhs = b_.add(b_.div(b_.mul(D, D), b_.scale(u, 4)), b_.scale(b_.mul(E, E), mpq_class(1, 4)));
    }

    StepId P;
    if (mode_ == Mode::Lemma) {
      StepId circ = b_.circle(center, zero);
      ConicRef ref = parabola_ ? ConicRef{ParabolaRef{g_rhs, g_center}} : ConicRef{CentralRef{u, g_center, g_rhs}};
      P = b_.conic_intersect(circ, ref, SelectorHint{plan.selected, plan.min_separation()});
    } else {
      StepId S, T;
      if (parabola_) {
        S = b_.div(b_.param(ConicParamKind::Lambda), g_rhs);
        T = b_.sub(g_center, b_.mul(S, b_.param(ConicParamKind::Vertex)));
      } else {
        S = b_.sqrt(b_.div(g_rhs, b_.param(ConicParamKind::Rhs)));
        T = b_.sub(g_center, b_.mul(S, b_.param(ConicParamKind::Center)));
      }
      StepId omega = b_.param(ConicParamKind::Frame);
      StepId omega_bar = b_.conj(omega);
      StepId c_world = b_.mul(omega_bar, b_.div(b_.sub(center, T), S));
      StepId t_world = b_.mul(omega_bar, b_.div(b_.neg(T), S));
      StepId circ = b_.circle(c_world, t_world);

      const BigComplex& sv = b_.point(S);
      const BigComplex& tv = b_.point(T);
      BigComplex expected = b_.point(omega).conj() * ((plan.selected - tv) / sv);
      BigReal sep = plan.min_separation() / sv.abs();
      StepId Z = b_.conic_intersect(circ, FixedRef{}, SelectorHint{expected, sep});
      P = b_.add(b_.mul(S, b_.mul(omega, Z)), T);
    }
    return real_part(P);
  }

  Mode mode_;
  Precision prec_;
  ProgramBuilder b_;
  std::unordered_map<const Expr*, Compiled> memo_;
  bool parabola_ = false;
  BigReal u_;
  int class_sign_ = 1;
};

}  // namespace detail

/// Compiles e against the fixed conic C. Every conic step intersects a
/// circle with C itself (fixed mode) or with an axis-aligned conic of C's
/// form parameter (lemma mode).
inline ConstructionProgram compile(const Expr& e, const ConicImplicit& C, Mode mode, Precision prec) {
  ConicClass cls = classify(C, prec);
  if (!is_proper_conic(cls))
    throw InvalidFixedConic("the fixed conic must be a non-degenerate conic other than a circle (got " +
                            to_string(cls) + ")");
  detail::Compiler compiler(C, mode, prec);
  auto top = compiler.node(e);

  ConstructionProgram prog;
  prog.mode = mode;
  prog.fixed_conic = C.with_precision(prec);
  prog.working_frame = compiler.builder().placement().frame;
  prog.steps = compiler.builder().take_steps();
  prog.final = top.id;
  RadicalCounts rc = radical_counts(e);
  prog.metadata = {rc.sqrt_count, rc.cbrt_count, top.depth, prec.bits()};
  return prog;
}

}  // namespace conicon
