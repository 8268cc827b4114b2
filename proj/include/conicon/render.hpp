#pragma once

// SVG figures of executed programs: circles, lines, the fixed conic and
// labeled points. Drawing happens in double precision.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "conicon/executor.hpp"

namespace conicon {

struct RenderOptions {
  int width = 800;
  int height = 800;
  double margin = 0.1;  // fraction of the fitted box added on each side
  int samples = 400;    // per conic branch
  bool labels = true;
};

namespace detail {

struct Vec2 {
  double x, y;
};

inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }
inline Vec2 vec(const BigComplex& z) { return {z.re().to_double(), z.im().to_double()}; }

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;

  void add(Vec2 v) {
    if (!finite(v)) return;
    x0 = std::min(x0, v.x), x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y), y1 = std::max(y1, v.y);
  }
  bool empty() const { return !(x0 <= x1 && y0 <= y1); }
  double w() const { return x1 - x0; }
  double h() const { return y1 - y0; }
};

/// Sampled branches of the placed conic in world coordinates, covering at
/// least `reach` around its center or vertex.
inline std::vector<std::vector<Vec2>> conic_branches(const RegularPlacement& rp, double reach, int n) {
  const double c = rp.frame.cos.to_double(), s = rp.frame.sin.to_double();
  auto world = [&](double X, double Y) { return Vec2{c * X + s * Y, -s * X + c * Y}; };  // conj(ω)·P
  std::vector<std::vector<Vec2>> out;
  auto sweep = [&](double t0, double t1, auto&& f) {
    std::vector<Vec2> b;
    for (int k = 0; k <= n; ++k) {
      Vec2 v = f(t0 + (t1 - t0) * k / n);
      if (finite(v)) b.push_back(v);
    }
    if (b.size() > 1) out.push_back(std::move(b));
  };
  if (const auto* cf = std::get_if<CentralForm>(&rp.conic)) {
    const double u = cf->u.to_double(), rhs = cf->rhs.to_double();
    const double x0 = cf->center.re().to_double(), y0 = cf->center.im().to_double();
    if (u > 0) {
      double ax = std::sqrt(rhs / u), ay = std::sqrt(rhs);
      sweep(0, 2 * M_PI, [&](double t) { return world(x0 + ax * std::cos(t), y0 + ay * std::sin(t)); });
    } else {
      double ax = std::sqrt(std::abs(rhs / u)), ay = std::sqrt(std::abs(rhs));
      double T = std::asinh(reach / std::max(std::max(ax, ay), 1e-300)) + 0.5;
      for (double sg : {1.0, -1.0}) {
        if (rhs > 0)
          sweep(-T, T, [&](double t) { return world(x0 + ax * std::sinh(t), y0 + sg * ay * std::cosh(t)); });
        else
          sweep(-T, T, [&](double t) { return world(x0 + sg * ax * std::cosh(t), y0 + ay * std::sinh(t)); });
      }
    }
  } else {
    const auto& pf = std::get<ParabolaForm>(rp.conic);
    const double lam = pf.lambda.to_double();
    const double x0 = pf.vertex.re().to_double(), y0 = pf.vertex.im().to_double();
    double T = std::min(reach, std::sqrt(reach / std::max(std::abs(lam), 1e-300)));
    sweep(-T, T, [&](double t) { return world(lam * t * t + x0, y0 + t); });
  }
  return out;
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace detail

/// Never throws for an executed valuation of the program; steps whose
/// values are not finite in double precision are skipped, and an empty or
/// zero-area viewport falls back to a unit box.
inline std::string render_svg(const ConstructionProgram& prog, const Valuation& val, const RenderOptions& opt = {}) {
  using detail::Vec2;
  detail::Box box;
  for (const StepValue& v : val.values) {
    if (const auto* p = std::get_if<BigComplex>(&v)) {
      box.add(detail::vec(*p));
    } else if (const auto* l = std::get_if<Line>(&v)) {
      box.add(detail::vec(l->p)), box.add(detail::vec(l->q));
    } else if (const auto* c = std::get_if<Circle>(&v)) {
      Vec2 m = detail::vec(c->center);
      double r = c->radius().to_double();
      if (std::isfinite(r)) box.add({m.x - r, m.y - r}), box.add({m.x + r, m.y + r});
    }
  }

  std::optional<RegularPlacement> placement;
  try {
    placement = to_regular(prog.fixed_conic, prog.fixed_conic.precision());
  } catch (const Error&) {
  }
  if (placement) {
    if (const auto* cf = std::get_if<CentralForm>(&placement->conic)) {
      box.add(detail::vec(placement->frame.to_world(cf->center)));
      if (cf->u.sign() > 0)
        for (auto& b : detail::conic_branches(*placement, 0, 16))
          for (Vec2 v : b) box.add(v);
    } else {
      box.add(detail::vec(placement->frame.to_world(std::get<ParabolaForm>(placement->conic).vertex)));
    }
  }

  if (box.empty()) box.add({0, 0});
  double side = std::max(box.w(), box.h());
  if (!(side > 1e-12) || !std::isfinite(side)) {
    double cx = box.x0, cy = box.y0;
    box = {};
    box.add({cx - 1, cy - 1}), box.add({cx + 1, cy + 1});
    side = 2;
  }
  {
    double cx = (box.x0 + box.x1) / 2, cy = (box.y0 + box.y1) / 2;
    box = {};
    box.add({cx - side / 2, cy - side / 2}), box.add({cx + side / 2, cy + side / 2});
  }
  const double pad = side * opt.margin;
  const double vx0 = box.x0 - pad, vy0 = box.y0 - pad;
  const double vw = box.w() + 2 * pad, vh = box.h() + 2 * pad;
  const double scale = std::min(opt.width / vw, opt.height / vh);
  auto X = [&](double x) { return (x - vx0) * scale; };
  auto Y = [&](double y) { return opt.height - (y - vy0) * scale; };
  auto in_view = [&](Vec2 v) { return v.x >= vx0 && v.x <= vx0 + vw && v.y >= vy0 && v.y <= vy0 + vh; };
  using detail::num;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (placement) {
    double reach = 2 * std::hypot(vw, vh);
    svg << "<g class=\"conic\" fill=\"none\" stroke=\"#b03030\" stroke-width=\"2\">\n";
    for (auto& b : detail::conic_branches(*placement, reach, opt.samples)) {
      svg << "<polyline points=\"";
      for (Vec2 v : b) svg << num(X(v.x)) << ',' << num(Y(v.y)) << ' ';
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }

  svg << "<g class=\"construction\" fill=\"none\" stroke=\"#3060a0\" stroke-width=\"1\">\n";
  for (const StepValue& v : val.values) {
    if (const auto* c = std::get_if<Circle>(&v)) {
      Vec2 m = detail::vec(c->center);
      double r = c->radius().to_double();
      if (!detail::finite(m) || !std::isfinite(r)) continue;
      svg << "<circle cx=\"" << num(X(m.x)) << "\" cy=\"" << num(Y(m.y)) << "\" r=\"" << num(r * scale) << "\"/>\n";
    } else if (const auto* l = std::get_if<Line>(&v)) {
      Vec2 p = detail::vec(l->p), q = detail::vec(l->q);
      double dx = q.x - p.x, dy = q.y - p.y, len = std::hypot(dx, dy);
      if (!detail::finite(p) || !detail::finite(q) || !(len > 0) || !std::isfinite(len)) continue;
      double ext = 2 * std::hypot(vw, vh) / len;
      svg << "<line x1=\"" << num(X(p.x - ext * dx)) << "\" y1=\"" << num(Y(p.y - ext * dy)) << "\" x2=\""
          << num(X(p.x + ext * dx)) << "\" y2=\"" << num(Y(p.y + ext * dy)) << "\"/>\n";
    }
  }
  svg << "</g>\n";

  svg << "<g class=\"points\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (std::size_t i = 0; i < val.values.size(); ++i) {
    const auto* z = std::get_if<BigComplex>(&val.values[i]);
    if (!z) continue;
    Vec2 v = detail::vec(*z);
    if (!detail::finite(v) || !in_view(v)) continue;
    bool last = i == prog.final;
    svg << "<circle cx=\"" << num(X(v.x)) << "\" cy=\"" << num(Y(v.y)) << "\" r=\"" << (last ? 4 : 2.5)
        << "\" fill=\"" << (last ? "#d08000" : "black") << "\"/>\n";
    if (opt.labels)
      svg << "<text x=\"" << num(X(v.x) + 4) << "\" y=\"" << num(Y(v.y) - 4) << "\">P" << i << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace conicon
