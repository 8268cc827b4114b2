#pragma once

// Conic geometry: implicit and regular forms, classification, focus/directrix
// conversion, and plane similarities.
//
// Points are complex numbers x + iy throughout.

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "conicon/errors.hpp"
#include "conicon/numeric.hpp"

namespace conicon {

using Point = BigComplex;

/// a x² + b xy + c y² + d x + e y + f = 0. Any nonzero multiple describes
/// the same conic.
struct ConicImplicit {
  BigReal a, b, c, d, e, f;

  static ConicImplicit from_rationals(const std::array<mpq_class, 6>& k, Precision p) {
    return {BigReal(k[0], p), BigReal(k[1], p), BigReal(k[2], p),
            BigReal(k[3], p), BigReal(k[4], p), BigReal(k[5], p)};
  }

  std::array<const BigReal*, 6> coefficients() const { return {&a, &b, &c, &d, &e, &f}; }

  Precision precision() const {
    Precision p = a.precision();
    for (const BigReal* x : coefficients()) p = min(p, x->precision());
    return p;
  }

  ConicImplicit with_precision(Precision p) const {
    return {a.with_precision(p), b.with_precision(p), c.with_precision(p),
            d.with_precision(p), e.with_precision(p), f.with_precision(p)};
  }

  BigReal operator()(const Point& p) const {
    const BigReal& x = p.re();
    const BigReal& y = p.im();
    return a * x * x + b * x * y + c * y * y + d * x + e * y + f;
  }

  /// Largest coefficient magnitude.
  BigReal scale() const {
    BigReal m(precision());
    for (const BigReal* x : coefficients()) m = max(m, abs(*x));
    return m;
  }

  ConicImplicit scaled(const BigReal& k) const { return {a * k, b * k, c * k, d * k, e * k, f * k}; }

  ConicImplicit normalized() const {
    BigReal s = scale();
    if (s.is_zero()) return *this;
    return scaled(BigReal(1, precision()) / s);
  }
};

/// Scale-free residual |k(p)| / (max|coeff| · max(1, |p|)²).
inline BigReal residual(const ConicImplicit& k, const Point& p) {
  Precision prec = min(k.precision(), p.precision());
  BigReal m = max(BigReal(1, prec), p.abs());
  BigReal s = k.scale();
  if (s.is_zero()) return abs(k(p));
  return abs(k(p)) / (s * m * m);
}

/// True when the two coefficient vectors are proportional within tol
/// (relative to the larger coefficient of each).
inline bool scale_equivalent(const ConicImplicit& k1, const ConicImplicit& k2, const BigReal& tol) {
  ConicImplicit n1 = k1.normalized(), n2 = k2.normalized();
  auto c1 = n1.coefficients();
  auto c2 = n2.coefficients();
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < 6; ++i)
    if (abs(*c1[i]) > abs(*c1[pivot])) pivot = i;
  if (c2[pivot]->is_zero()) return false;
  BigReal ratio = *c1[pivot] / *c2[pivot];
  for (std::size_t i = 0; i < 6; ++i)
    if (abs(*c1[i] - *c2[i] * ratio) > tol) return false;
  return true;
}

/// Substitutes x = ax·X + bx·Y + cx, y = ay·X + by·Y + cy and returns the
/// conic in (X, Y).
inline ConicImplicit substitute(const ConicImplicit& k, const BigReal& ax, const BigReal& bx, const BigReal& cx,
                                const BigReal& ay, const BigReal& by, const BigReal& cy) {
  ConicImplicit r;
  r.a = k.a * ax * ax + k.b * ax * ay + k.c * ay * ay;
  r.b = k.a * ax * bx * 2 + k.b * (ax * by + bx * ay) + k.c * ay * by * 2;
  r.c = k.a * bx * bx + k.b * bx * by + k.c * by * by;
  r.d = k.a * ax * cx * 2 + k.b * (ax * cy + cx * ay) + k.c * ay * cy * 2 + k.d * ax + k.e * ay;
  r.e = k.a * bx * cx * 2 + k.b * (bx * cy + cx * by) + k.c * by * cy * 2 + k.d * bx + k.e * by;
  r.f = k.a * cx * cx + k.b * cx * cy + k.c * cy * cy + k.d * cx + k.e * cy + k.f;
  return r;
}

enum class ConicClass { Circle, Ellipse, Parabola, Hyperbola, DegenerateLines, DegeneratePoint, Empty };

inline std::string to_string(ConicClass c) {
  switch (c) {
    case ConicClass::Circle: return "circle";
    case ConicClass::Ellipse: return "ellipse";
    case ConicClass::Parabola: return "parabola";
    case ConicClass::Hyperbola: return "hyperbola";
    case ConicClass::DegenerateLines: return "degenerate (lines)";
    case ConicClass::DegeneratePoint: return "degenerate (point)";
    case ConicClass::Empty: return "empty";
  }
  return "?";
}

inline bool is_proper_conic(ConicClass c) {
  return c == ConicClass::Ellipse || c == ConicClass::Parabola || c == ConicClass::Hyperbola;
}

/// Classification by the discriminant b² − 4ac and the determinant of the
/// 3×3 matrix of the quadratic form, with τ(prec) thresholds after scaling
/// the coefficients to max magnitude 1.
inline ConicClass classify(const ConicImplicit& input, Precision prec) {
  ConicImplicit k = input.with_precision(prec).normalized();
  const BigReal tol = tau(prec);
  const BigReal& a = k.a;
  const BigReal& c = k.c;
  const BigReal& f = k.f;
  BigReal h = k.b / 2, g = k.d / 2, j = k.e / 2;
  BigReal disc = k.b * k.b - a * c * 4;
  BigReal det = a * (c * f - j * j) - h * (h * f - j * g) + g * (h * j - c * g);

  if (abs(det) <= tol) {
    if (disc < -tol) return ConicClass::DegeneratePoint;
    if (disc > tol) return ConicClass::DegenerateLines;
    BigReal minors = (a * f - g * g) + (c * f - j * j);
    return minors > tol ? ConicClass::Empty : ConicClass::DegenerateLines;
  }
  if (disc < -tol) {
    if ((a + c) * det > 0) return ConicClass::Empty;
    if (abs(k.b) <= tol && abs(a - c) <= tol) return ConicClass::Circle;
    return ConicClass::Ellipse;
  }
  if (abs(disc) <= tol) return ConicClass::Parabola;
  return ConicClass::Hyperbola;
}

/// Rotation by θ, stored as (cos θ, sin θ). Regular coordinates of a world
/// point p are e^{iθ}·p.
struct Frame {
  BigReal cos, sin;

  static Frame identity(Precision p) { return {BigReal(1, p), BigReal(p)}; }

  BigComplex omega() const { return {cos, sin}; }
  Point to_regular(const Point& world) const { return omega() * world; }
  Point to_world(const Point& regular) const { return omega().conj() * regular; }
  Frame quarter_turn() const { return {-sin, cos}; }
};

/// u(x − x₀)² + (y − y₀)² = rhs with u ≠ 0, u ≠ 1. The sign of rhs is the
/// orientation class; conjugate hyperbolas have opposite signs.
struct CentralForm {
  BigReal u;
  Point center;
  BigReal rhs;

  int class_sign() const { return rhs.sign(); }
};

/// x = λ(y − y₀)² + x₀, vertex (x₀, y₀).
struct ParabolaForm {
  BigReal lambda;
  Point vertex;
};

using RegularConic = std::variant<CentralForm, ParabolaForm>;

struct RegularPlacement {
  Frame frame;
  RegularConic conic;
};

inline ConicImplicit rotate_into_frame(const ConicImplicit& k, const Frame& fr) {
  // world p = conj(ω)·p':  x = c x' + s y',  y = −s x' + c y'
  BigReal zero(k.precision());
  return substitute(k, fr.cos, fr.sin, zero, -fr.sin, fr.cos, zero);
}

/// Rotates k by the smallest angle that removes the xy term (ties at ±π/4
/// resolve to +π/4), then adds a quarter turn if a parabola would open
/// along y.
inline RegularPlacement to_regular(const ConicImplicit& input, Precision prec) {
  ConicClass cls = classify(input, prec);
  if (!is_proper_conic(cls)) throw NotAConic("not a non-degenerate, non-circular conic: " + to_string(cls));

  ConicImplicit k = input.with_precision(prec).normalized();
  const BigReal tol = tau(prec);

  Frame frame = Frame::identity(prec);
  if (abs(k.b) > tol) {
    BigReal delta = k.a - k.c;
    BigReal rho = hypot(delta, k.b);
    BigReal cos2 = abs(delta) / rho;
    BigReal sin2 = (delta.sign() > 0 ? -k.b : (delta.sign() < 0 ? k.b : abs(k.b))) / rho;
    BigReal c = sqrt((cos2 + 1) / 2);
    frame = {c, sin2 / (c * 2)};
  }

  ConicImplicit r = rotate_into_frame(k, frame);
  if (cls == ConicClass::Parabola) {
    if (abs(r.a) > abs(r.c)) {
      frame = frame.quarter_turn();
      r = rotate_into_frame(k, frame);
    }
    // r: C y² + D x + E y + F = 0  →  x = λ(y − y₀)² + x₀
    BigReal lambda = -r.c / r.d;
    BigReal y0 = -r.e / (r.c * 2);
    BigReal x0 = -r.f / r.d - lambda * y0 * y0;
    return {frame, ParabolaForm{lambda, Point(x0, y0)}};
  }

  // r: A x² + C y² + D x + E y + F = 0
  BigReal u = r.a / r.c;
  BigReal x0 = -r.d / (r.a * 2);
  BigReal y0 = -r.e / (r.c * 2);
  BigReal rhs = -r.f / r.c + u * x0 * x0 + y0 * y0;
  return {frame, CentralForm{u, Point(x0, y0), rhs}};
}

/// Expansion of the regular form, rotated back to world coordinates by frame.
inline ConicImplicit regular_to_implicit(const RegularConic& rc, const Frame& frame) {
  ConicImplicit local = std::visit(
      [](const auto& form) -> ConicImplicit {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, CentralForm>) {
          const BigReal& x0 = form.center.re();
          const BigReal& y0 = form.center.im();
          Precision p = min(form.u.precision(), min(form.center.precision(), form.rhs.precision()));
          return {form.u, BigReal(p), BigReal(1, p), form.u * x0 * -2, y0 * -2,
                  form.u * x0 * x0 + y0 * y0 - form.rhs};
        } else {
          const BigReal& x0 = form.vertex.re();
          const BigReal& y0 = form.vertex.im();
          Precision p = min(form.lambda.precision(), form.vertex.precision());
          return {BigReal(p), BigReal(p), form.lambda, BigReal(-1, p), form.lambda * y0 * -2,
                  form.lambda * y0 * y0 + x0};
        }
      },
      rc);
  // regular p' = ω p:  X = c x − s y,  Y = s x + c y
  BigReal zero(local.precision());
  return substitute(local, frame.cos, -frame.sin, zero, frame.sin, frame.cos, zero);
}

/// Metric eccentricity, as opposed to the form parameter u.
inline BigReal true_eccentricity(const RegularConic& rc) {
  if (const auto* par = std::get_if<ParabolaForm>(&rc)) return BigReal(1, par->lambda.precision());
  const auto& cf = std::get<CentralForm>(rc);
  const BigReal& u = cf.u;
  if (u.sign() > 0) {
    if (u <= 1) return sqrt(1 - u);
    return sqrt(1 - BigReal(1, u.precision()) / u);
  }
  if (cf.rhs.sign() < 0) return sqrt(1 - u);
  return sqrt(BigReal(1, u.precision()) + BigReal(1, u.precision()) / -u);
}

/// Line n·p = offset (n need not be unit).
struct Directrix {
  BigReal nx, ny, offset;
};

struct FocusDirectrix {
  Point focus;
  Directrix directrix;
  BigReal ecc;
};

/// dist(p, focus)² = ecc²·dist(p, directrix)², expanded. Every coefficient is
/// a rational function of the inputs.
inline ConicImplicit focus_directrix_to_implicit(const FocusDirectrix& fd) {
  const BigReal& fx = fd.focus.re();
  const BigReal& fy = fd.focus.im();
  const BigReal& nx = fd.directrix.nx;
  const BigReal& ny = fd.directrix.ny;
  const BigReal& off = fd.directrix.offset;
  Precision p = min(fd.focus.precision(), min(min(nx.precision(), ny.precision()), min(off.precision(), fd.ecc.precision())));
  if (fd.ecc.sign() <= 0) throw DegenerateInput("eccentricity must be positive");
  BigReal n2 = nx * nx + ny * ny;
  if (n2.is_zero()) throw DegenerateInput("directrix normal is zero");
  BigReal gap = abs(nx * fx + ny * fy - off);
  BigReal scale = max(BigReal(1, p), max(fd.focus.abs(), abs(off) / sqrt(n2)));
  if (gap <= tau(p) * sqrt(n2) * scale) throw DegenerateInput("focus lies on the directrix");

  BigReal k = fd.ecc * fd.ecc / n2;
  return {1 - k * nx * nx,
          k * nx * ny * -2,
          1 - k * ny * ny,
          fx * -2 + k * off * nx * 2,
          fy * -2 + k * off * ny * 2,
          fx * fx + fy * fy - k * off * off};
}

/// One focus/directrix pair for a parabola, two for ellipses and hyperbolas.
inline std::vector<FocusDirectrix> implicit_to_focus_directrix(const ConicImplicit& k, Precision prec) {
  ConicClass cls = classify(k, prec);
  if (cls == ConicClass::Circle) throw CircleHasNoDirectrix("a circle has no directrix");
  RegularPlacement rp = to_regular(k, prec);
  const Frame& fr = rp.frame;
  const BigReal zero(prec), one(1, prec);

  auto make = [&](const Point& focus_reg, const Point& normal_reg, const BigReal& offset, const BigReal& ecc) {
    Point n = fr.to_world(normal_reg);
    return FocusDirectrix{fr.to_world(focus_reg), Directrix{n.re(), n.im(), offset}, ecc};
  };

  if (const auto* par = std::get_if<ParabolaForm>(&rp.conic)) {
    BigReal quarter = one / (par->lambda * 4);
    const BigReal& x0 = par->vertex.re();
    const BigReal& y0 = par->vertex.im();
    return {make(Point(x0 + quarter, y0), Point(one, zero), x0 - quarter, one)};
  }

  const auto& cf = std::get<CentralForm>(rp.conic);
  const BigReal& x0 = cf.center.re();
  const BigReal& y0 = cf.center.im();
  BigReal along_x, along_y;  // signed squared semi-axes
  along_x = cf.rhs / cf.u;
  along_y = cf.rhs;

  bool major_is_x;
  BigReal a2, focal;
  if (cf.u.sign() > 0) {
    major_is_x = along_x >= along_y;
    a2 = major_is_x ? along_x : along_y;
    focal = sqrt(abs(along_x - along_y));
  } else {
    major_is_x = along_x.sign() > 0;
    a2 = major_is_x ? along_x : along_y;
    focal = sqrt(abs(along_x) + abs(along_y));
  }
  BigReal ecc = focal / sqrt(a2);
  BigReal dir = a2 / focal;

  std::vector<FocusDirectrix> out;
  for (int sgn : {1, -1}) {
    if (major_is_x)
      out.push_back(make(Point(x0 + focal * sgn, y0), Point(one, zero), x0 + dir * sgn, ecc));
    else
      out.push_back(make(Point(x0, y0 + focal * sgn), Point(zero, one), y0 + dir * sgn, ecc));
  }
  return out;
}

/// p ↦ s·p + t with real s ≠ 0. Negative s composes a point reflection.
struct Similarity {
  BigReal s;
  Point t;

  Point apply(const Point& p) const { return p * s + t; }
  Point invert(const Point& q) const { return (q - t) / s; }
};

/// The image {m(p) : p ∈ k}.
inline ConicImplicit apply_similarity(const ConicImplicit& k, const Similarity& m) {
  if (m.s.is_zero()) throw DegenerateInput("similarity scale must be nonzero");
  BigReal inv = BigReal(1, m.s.precision()) / m.s;
  BigReal zero(k.precision());
  ConicImplicit r = substitute(k, inv, zero, -m.t.re() * inv, zero, inv, -m.t.im() * inv);
  return r.scaled(m.s * m.s);
}

/// The similarity m with apply_similarity(fixed, m) = target.
inline Similarity similarity_between(const RegularConic& target, const RegularConic& fixed, Precision prec) {
  const BigReal tol = tau(prec);
  if (target.index() != fixed.index())
    throw FormParameterMismatch("a central conic and a parabola are never similar");

  if (const auto* tp = std::get_if<ParabolaForm>(&target)) {
    const auto& fp = std::get<ParabolaForm>(fixed);
    BigReal s = fp.lambda / tp->lambda;
    return {s, tp->vertex - fp.vertex * s};
  }

  const auto& tc = std::get<CentralForm>(target);
  const auto& fc = std::get<CentralForm>(fixed);
  if (abs(tc.u - fc.u) > tol * max(BigReal(1, prec), abs(fc.u)))
    throw FormParameterMismatch("form parameters differ");
  if (tc.class_sign() != fc.class_sign())
    throw OrientationClassMismatch("conjugate hyperbolas are not homothetic");
  BigReal s = sqrt(tc.rhs / fc.rhs);
  return {s, tc.center - fc.center * s};
}

struct Line {
  Point p, q;
};

/// Circle through `through` centered at `center`.
struct Circle {
  Point center, through;

  BigReal radius() const { return distance(center, through); }

  /// x² + y² + D x + E y + F = 0.
  ConicImplicit implicit() const {
    Precision p = min(center.precision(), through.precision());
    const BigReal& cx = center.re();
    const BigReal& cy = center.im();
    BigReal r2 = (through - center).norm();
    return {BigReal(1, p), BigReal(p), BigReal(1, p), cx * -2, cy * -2, cx * cx + cy * cy - r2};
  }

  /// From x² + y² + D x + E y + F = 0; requires a positive squared radius.
  static Circle from_equation(const BigReal& D, const BigReal& E, const BigReal& F) {
    Point center(-D / 2, -E / 2);
    BigReal r2 = center.norm() - F;
    if (r2.sign() <= 0) throw DegenerateInput("circle equation has no real points");
    return {center, center + Point(sqrt(r2), BigReal(D.precision()))};
  }
};

}  // namespace conicon
