#pragma once

// Intersections of lines, circles and one conic.

#include <algorithm>
#include <variant>
#include <vector>

#include "conicon/conic.hpp"
#include "conicon/errors.hpp"
#include "conicon/poly.hpp"

namespace conicon {

using BasicObject = std::variant<Line, Circle>;

namespace detail {

inline BigReal cross(const Point& u, const Point& v) { return u.re() * v.im() - u.im() * v.re(); }
inline BigReal dot(const Point& u, const Point& v) { return u.re() * v.re() + u.im() * v.im(); }

inline void sort_points(std::vector<Point>& pts) { std::sort(pts.begin(), pts.end(), lexicographic_less); }

inline void check_line(const Line& l, const BigReal& tol) {
  if (distance(l.p, l.q) <= tol * max(BigReal(1, tol.precision()), max(l.p.abs(), l.q.abs())))
    throw DegenerateInput("line endpoints coincide");
}

inline void check_circle(const Circle& c, const BigReal& tol) {
  if (c.radius() <= tol * max(BigReal(1, tol.precision()), c.center.abs()))
    throw DegenerateInput("circle radius is zero");
}

inline std::vector<Point> line_line(const Line& l1, const Line& l2, Precision prec, const BigReal& tol) {
  Point d1 = l1.q - l1.p, d2 = l2.q - l2.p;
  BigReal cr = cross(d1, d2);
  BigReal scale = max(BigReal(1, prec), max(l1.p.abs(), l2.p.abs()));
  if (abs(cr) <= tol * d1.abs() * d2.abs()) {
    BigReal off = abs(cross(l2.p - l1.p, d1)) / d1.abs();
    if (off <= tol * scale) throw CoincidentObjects("lines coincide");
    return {};
  }
  BigReal t = cross(l2.p - l1.p, d2) / cr;
  return {l1.p + d1 * t};
}

inline std::vector<Point> line_circle(const Line& l, const Circle& c, Precision prec, const BigReal& tol) {
  Point d = l.q - l.p;
  BigReal len = d.abs();
  Point u = d / len;
  BigReal r = c.radius();
  // Foot of the perpendicular from the center.
  BigReal along = dot(c.center - l.p, u);
  Point foot = l.p + u * along;
  BigReal h = distance(foot, c.center);
  BigReal scale = max(BigReal(1, prec), r);
  if (abs(h - r) <= tol * scale) return {foot};
  if (h > r) return {};
  BigReal half = sqrt((r - h) * (r + h));
  std::vector<Point> out{foot - u * half, foot + u * half};
  sort_points(out);
  return out;
}

inline std::vector<Point> circle_circle(const Circle& c1, const Circle& c2, Precision prec, const BigReal& tol) {
  BigReal r1 = c1.radius(), r2 = c2.radius();
  Point delta = c2.center - c1.center;
  BigReal dd = delta.abs();
  BigReal scale = max(BigReal(1, prec), max(max(r1, r2), max(c1.center.abs(), c2.center.abs())));
  if (dd <= tol * scale) {
    if (abs(r1 - r2) <= tol * scale) throw CoincidentObjects("circles coincide");
    return {};
  }
  BigReal rmax = max(r1, r2);
  if (dd > r1 + r2 + tol * scale) return {};
  if (dd < abs(r1 - r2) - tol * scale) return {};
  Point u = delta / dd;
  BigReal a = (dd * dd + r1 * r1 - r2 * r2) / (dd * 2);
  BigReal h2 = r1 * r1 - a * a;
  if (h2 <= tol * rmax * rmax) return {c1.center + u * a};
  BigReal h = sqrt(h2);
  Point perp(-u.im(), u.re());
  std::vector<Point> out{c1.center + u * a + perp * h, c1.center + u * a - perp * h};
  sort_points(out);
  return out;
}

}  // namespace detail

/// Intersection of two lines or circles: 0 to 2 points, sorted by (x, y).
inline std::vector<Point> intersect_basic(const BasicObject& a, const BasicObject& b, Precision prec) {
  const BigReal tol = tau(prec);
  auto check = [&](const BasicObject& o) {
    if (const auto* l = std::get_if<Line>(&o)) detail::check_line(*l, tol);
    else detail::check_circle(std::get<Circle>(o), tol);
  };
  check(a);
  check(b);

  auto rounded = [&](std::vector<Point> v) {
    for (auto& p : v) p = p.with_precision(prec);
    return v;
  };
  auto wa = std::visit([&](const auto& o) -> BasicObject {
    using T = std::decay_t<decltype(o)>;
    if constexpr (std::is_same_v<T, Line>) return Line{o.p.with_precision(prec), o.q.with_precision(prec)};
    else return Circle{o.center.with_precision(prec), o.through.with_precision(prec)};
  }, a);
  auto wb = std::visit([&](const auto& o) -> BasicObject {
    using T = std::decay_t<decltype(o)>;
    if constexpr (std::is_same_v<T, Line>) return Line{o.p.with_precision(prec), o.q.with_precision(prec)};
    else return Circle{o.center.with_precision(prec), o.through.with_precision(prec)};
  }, b);

  if (const auto* l1 = std::get_if<Line>(&wa)) {
    if (const auto* l2 = std::get_if<Line>(&wb)) return rounded(detail::line_line(*l1, *l2, prec, tol));
    return rounded(detail::line_circle(*l1, std::get<Circle>(wb), prec, tol));
  }
  const auto& c1 = std::get<Circle>(wa);
  if (const auto* l2 = std::get_if<Line>(&wb)) return rounded(detail::line_circle(*l2, c1, prec, tol));
  return rounded(detail::circle_circle(c1, std::get<Circle>(wb), prec, tol));
}

/// A point with its intersection multiplicity.
struct CurvePoint {
  Point point;
  int multiplicity = 1;
};

namespace detail {

inline Poly poly_of(std::initializer_list<BigReal> c) { return Poly(std::vector<BigReal>(c)); }

/// Circle x² + y² + Dx + Ey + F against conic k, eliminating y. Returns
/// false when the resultant vanishes identically.
inline bool circle_conic_eliminate_y(const BigReal& D, const BigReal& E, const BigReal& F, const ConicImplicit& k,
                                     Precision work, Precision prec, std::vector<CurvePoint>& out) {
  const BigReal zero(work), one(1, work);
  // As quadratics in y:  circle  y² + E y + A0(x),   conic  c y² + B1(x) y + B0(x).
  Poly A0 = poly_of({F, D, one});
  Poly B0 = poly_of({k.f, k.d, k.a});
  Poly B1 = poly_of({k.e, k.b});
  Poly cE = poly_of({k.c * E});
  Poly cc = poly_of({k.c});
  Poly EE = poly_of({E});

  Poly T1 = B0 - cc * A0;
  Poly T2 = B1 - cE;
  Poly T3 = EE * B0 - A0 * B1;
  Poly R = T1 * T1 - T2 * T3;

  BigReal scale = max(T1.max_abs_coefficient() * T1.max_abs_coefficient(),
                      T2.max_abs_coefficient() * T3.max_abs_coefficient());
  if (scale.is_zero() || R.max_abs_coefficient() <= pow2(-static_cast<double>(work.bits()) / 2, work) * scale)
    return false;

  // Drop leading coefficients that are rounding noise.
  std::vector<BigReal> rc(R.coefficients().begin(), R.coefficients().end());
  BigReal noise = pow2(-static_cast<double>(work.bits()) + 32, work) * scale;
  while (rc.size() > 1 && abs(rc.back()) <= noise) rc.pop_back();
  Poly Rt(std::move(rc));
  if (Rt.degree() == 0) return true;

  std::vector<BigReal> xs = real_roots(Rt, work);

  // Cluster coincident roots.
  const double quarter = -static_cast<double>(work.bits()) / 4;
  std::vector<std::pair<BigReal, int>> clusters;
  for (auto& x : xs) {
    if (!clusters.empty()) {
      auto& [cx, m] = clusters.back();
      BigReal mean = cx / m;
      if (abs(x - mean) <= pow2(quarter, work) * max(one, abs(mean))) {
        cx = cx + x;
        ++m;
        continue;
      }
    }
    clusters.emplace_back(x, 1);
  }

  const BigReal residual_tol = pow2(-static_cast<double>(work.bits()) / 8, work);
  ConicImplicit circle{one, zero, one, D, E, F};
  for (auto& [sum, m] : clusters) {
    BigReal x = sum / m;
    BigReal g = x * x + D * x + F;
    BigReal disc = E * E - g * 4;
    BigReal disc_tol = pow2(quarter, work) * (E * E + abs(g) * 4 + 1);
    std::vector<BigReal> ys;
    if (abs(disc) <= disc_tol) {
      ys.push_back(-E / 2);
    } else if (disc.sign() > 0) {
      BigReal s = sqrt(disc);
      ys.push_back((-E - s) / 2);
      ys.push_back((-E + s) / 2);
    }

    std::vector<Point> found;
    for (auto& y : ys) {
      Point p(x, y);
      if (residual(k, p) > residual_tol) continue;
      // Newton polish on both equations.
      for (int it = 0; it < 8; ++it) {
        BigReal f1 = circle(p), f2 = k(p);
        BigReal j11 = p.re() * 2 + D, j12 = p.im() * 2 + E;
        BigReal j21 = k.a * p.re() * 2 + k.b * p.im() + k.d;
        BigReal j22 = k.b * p.re() + k.c * p.im() * 2 + k.e;
        BigReal det = j11 * j22 - j12 * j21;
        BigReal gscale = hypot(j11, j12) * hypot(j21, j22);
        if (abs(det) <= pow2(quarter, work) * gscale) break;
        BigReal dx = (f1 * j22 - f2 * j12) / det;
        BigReal dy = (j11 * f2 - j21 * f1) / det;
        p = Point(p.re() - dx, p.im() - dy);
        if (hypot(dx, dy) <= pow2(-static_cast<double>(work.bits()) + 8, work) * max(one, p.abs())) break;
      }
      bool dup = false;
      for (auto& q : found)
        if (distance(p, q) <= pow2(quarter, work) * max(one, q.abs())) dup = true;
      if (!dup) found.push_back(p);
    }
    if (found.empty()) continue;
    int share = std::max(1, m / static_cast<int>(found.size()));
    for (auto& p : found) out.push_back({p.with_precision(prec), share});
  }
  return true;
}

}  // namespace detail

/// Real intersection points of a circle and a conic, with multiplicity,
/// sorted by (x, y). Never more than four counted with multiplicity.
inline std::vector<CurvePoint> intersect_circle_conic(const Circle& circle, const ConicImplicit& conic, Precision prec) {
  const Precision work{2 * prec.bits() + 64};
  detail::check_circle(circle, tau(prec));
  ConicImplicit k = conic.with_precision(work).normalized();
  ConicImplicit ci = Circle{circle.center.with_precision(work), circle.through.with_precision(work)}.implicit();

  std::vector<CurvePoint> out;
  if (!detail::circle_conic_eliminate_y(ci.d, ci.e, ci.f, k, work, prec, out)) {
    // Swap the roles of x and y.
    ConicImplicit ks{k.c, k.b, k.a, k.e, k.d, k.f};
    std::vector<CurvePoint> swapped;
    if (!detail::circle_conic_eliminate_y(ci.e, ci.d, ci.f, ks, work, prec, swapped))
      throw EliminationDegenerate("circle and conic share a component");
    for (auto& cp : swapped) out.push_back({Point(cp.point.im(), cp.point.re()), cp.multiplicity});
  }

  std::sort(out.begin(), out.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return lexicographic_less(a.point, b.point); });
  int total = 0;
  for (auto& cp : out) total += cp.multiplicity;
  if (total > 4) throw EliminationDegenerate("more than four intersections; inputs are not in general position");
  return out;
}

}  // namespace conicon
