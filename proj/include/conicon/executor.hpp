#pragma once

// Runs construction programs, audits their legality, and checks results
// against direct evaluation of the expression.

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conicon/conic.hpp"
#include "conicon/errors.hpp"
#include "conicon/expr.hpp"
#include "conicon/intersect.hpp"
#include "conicon/planner.hpp"
#include "conicon/program.hpp"

namespace conicon {

using StepValue = std::variant<std::monostate, BigComplex, Line, Circle>;

/// Value of every step, plus what the intersection steps did.
struct Valuation {
  std::vector<StepValue> values;
  BigReal max_step_residual;
  int conic_intersections = 0;

  const BigComplex& point(StepId id) const {
    if (id >= values.size()) throw MalformedProgram("step id out of range");
    const auto* p = std::get_if<BigComplex>(&values[id]);
    if (!p) throw MalformedProgram("step " + std::to_string(id) + " is not a point");
    return *p;
  }
};

namespace detail {

/// Nearest candidate to the hint, guarded against ambiguity.
inline BigComplex select(const std::vector<Point>& candidates, const SelectorHint& hint, unsigned compile_bits,
                         Precision prec, StepId id) {
  if (candidates.empty()) throw NoIntersection("no real intersection at step " + std::to_string(id));
  unsigned bits = std::min(compile_bits ? compile_bits : prec.bits(), prec.bits());
  BigComplex expected = hint.expected.with_precision(prec);
  BigReal tol = pow2(-static_cast<double>(bits) / 4, prec) * max(BigReal(1, prec), expected.abs());
  std::vector<std::pair<BigReal, std::size_t>> d;
  for (std::size_t k = 0; k < candidates.size(); ++k) d.emplace_back(distance(candidates[k], expected), k);
  std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (d[0].first > tol) throw NoMatch("no intersection near the expected point at step " + std::to_string(id));
  if (d.size() > 1 && d[1].first <= tol * 2)
    throw SelectionAmbiguous("two intersections near the expected point at step " + std::to_string(id));
  return candidates[d[0].second];
}

inline BasicObject basic_object(const Valuation& v, StepId id) {
  if (id >= v.values.size()) throw MalformedProgram("step id out of range");
  if (const auto* l = std::get_if<Line>(&v.values[id])) return *l;
  if (const auto* c = std::get_if<Circle>(&v.values[id])) return *c;
  throw MalformedProgram("step " + std::to_string(id) + " is not a line or circle");
}

inline ConicImplicit line_implicit(const Line& l) {
  Precision p = min(l.p.precision(), l.q.precision());
  Point d = l.q - l.p;
  // d.y·x − d.x·y + (d.x·p.y − d.y·p.x) = 0
  return {BigReal(p), BigReal(p), BigReal(p), d.im(), -d.re(), d.re() * l.p.im() - d.im() * l.p.re()};
}

inline BigReal object_residual(const BasicObject& o, const Point& p) {
  if (const auto* l = std::get_if<Line>(&o)) return residual(line_implicit(*l), p);
  return residual(std::get<Circle>(o).implicit(), p);
}

}  // namespace detail

/// Executes every step at precision prec. Conic steps are intersected
/// geometrically against the fixed conic (or the lemma-mode conic).
inline Valuation execute(const ConstructionProgram& prog, Precision prec) {
  ConicClass cls = classify(prog.fixed_conic, prec);
  if (!is_proper_conic(cls)) throw InvalidFixedConic("fixed conic is " + to_string(cls));
  const ConicImplicit C = prog.fixed_conic.with_precision(prec);
  std::optional<RegularPlacement> placement;

  Valuation v;
  v.max_step_residual = BigReal(prec);
  v.values.reserve(prog.steps.size());
  auto point = [&](StepId id) -> const BigComplex& { return v.point(id); };
  auto check_id = [&](StepId id, StepId self) {
    if (id >= self) throw MalformedProgram("step " + std::to_string(self) + " references a later step");
  };
  auto note_residual = [&](const BigReal& r) { v.max_step_residual = max(v.max_step_residual, r); };

  for (StepId i = 0; i < prog.steps.size(); ++i) {
    const Step& step = prog.steps[i];
    StepValue out = std::visit(
        [&](const auto& s) -> StepValue {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PointLit>) {
            return s.value.value(prec);
          } else if constexpr (std::is_same_v<T, MacroField>) {
            if (static_cast<int>(s.args.size()) != arity(s.op)) throw MalformedProgram("wrong operand count");
            for (StepId a : s.args) check_id(a, i);
            const BigComplex& a = point(s.args[0]);
            return apply_field(s.op, a, s.args.size() > 1 ? point(s.args[1]) : a);
          } else if constexpr (std::is_same_v<T, MacroSqrt>) {
            check_id(s.arg, i);
            return point(s.arg).sqrt();
          } else if constexpr (std::is_same_v<T, ConicParam>) {
            if (!placement) placement = to_regular(prog.fixed_conic, prec);
            return conic_param_value(s.kind, *placement, prec);
          } else if constexpr (std::is_same_v<T, CircleDef>) {
            check_id(s.center, i);
            check_id(s.through, i);
            return Circle{point(s.center), point(s.through)};
          } else if constexpr (std::is_same_v<T, LineDef>) {
            check_id(s.p, i);
            check_id(s.q, i);
            return Line{point(s.p), point(s.q)};
          } else if constexpr (std::is_same_v<T, IntersectBasicStep>) {
            check_id(s.a, i);
            check_id(s.b, i);
            BasicObject a = detail::basic_object(v, s.a), b = detail::basic_object(v, s.b);
            auto cands = intersect_basic(a, b, prec);
            BigComplex p = detail::select(cands, s.hint, prog.metadata.compile_precision_bits, prec, i);
            note_residual(max(detail::object_residual(a, p), detail::object_residual(b, p)));
            return p;
          } else {
            check_id(s.circle, i);
            const auto* circle = std::get_if<Circle>(&v.values.at(s.circle));
            if (!circle) throw MalformedProgram("conic intersection at step " + std::to_string(i) + " needs a circle");
            ConicImplicit conic = std::holds_alternative<FixedRef>(s.conic)
                                      ? C
                                      : regular_to_implicit(lemma_conic(s.conic, point), Frame::identity(prec));
            auto cands = intersect_circle_conic(*circle, conic, prec);
            std::vector<Point> pts;
            for (auto& cp : cands) pts.push_back(cp.point);
            BigComplex p = detail::select(pts, s.hint, prog.metadata.compile_precision_bits, prec, i);
            note_residual(max(residual(circle->implicit(), p), residual(conic, p)));
            ++v.conic_intersections;
            return p;
          }
        },
        step);
    v.values.push_back(std::move(out));
  }
  if (prog.final >= v.values.size()) throw MalformedProgram("final step out of range");
  return v;
}

/// Empty when the program is legal.
struct AuditResult {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

inline AuditResult audit(const ConstructionProgram& prog) {
  AuditResult out;
  auto flag = [&](std::string msg) { out.violations.push_back(std::move(msg)); };
  const std::size_t n = prog.steps.size();
  enum class Sort { Point, Line, Circle, None };
  std::vector<Sort> sorts(n, Sort::None);

  Precision cp{std::max(prog.metadata.compile_precision_bits, 64u)};
  bool central = false;
  bool conic_ok = false;
  try {
    ConicClass cls = classify(prog.fixed_conic, cp);
    conic_ok = is_proper_conic(cls);
    if (!conic_ok) flag("fixed conic is " + to_string(cls));
    else central = cls != ConicClass::Parabola;
  } catch (const std::exception& e) {
    flag(std::string("fixed conic unreadable: ") + e.what());
  }

  auto sort_of = [&](StepId id, StepId self) {
    if (id >= self) return Sort::None;
    return sorts[id];
  };
  auto need_point = [&](StepId id, StepId self, const char* what) {
    if (id >= self) flag("step " + std::to_string(self) + " references step " + std::to_string(id) + " out of order");
    else if (sorts[id] != Sort::Point)
      flag("step " + std::to_string(self) + ": " + what + " is not a point");
  };
  auto same_point = [&](StepId a, StepId b) {
    if (a == b) return true;
    if (a >= n || b >= n) return false;
    const auto* pa = std::get_if<PointLit>(&prog.steps[a]);
    const auto* pb = std::get_if<PointLit>(&prog.steps[b]);
    return pa && pb && pa->value == pb->value;
  };

  for (StepId i = 0; i < n; ++i) {
    const std::string at = "step " + std::to_string(i);
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PointLit>) {
            sorts[i] = Sort::Point;
          } else if constexpr (std::is_same_v<T, MacroField>) {
            if (static_cast<int>(s.args.size()) != arity(s.op)) flag(at + ": wrong operand count");
            for (StepId a : s.args) need_point(a, i, "operand");
            sorts[i] = Sort::Point;
          } else if constexpr (std::is_same_v<T, MacroSqrt>) {
            need_point(s.arg, i, "radicand");
            sorts[i] = Sort::Point;
          } else if constexpr (std::is_same_v<T, ConicParam>) {
            if (conic_ok && s.kind != ConicParamKind::FormParam && s.kind != ConicParamKind::Frame) {
              bool central_kind = s.kind == ConicParamKind::Center || s.kind == ConicParamKind::Rhs;
              if (central_kind != central) flag(at + ": parameter does not exist for the fixed conic");
            }
            sorts[i] = Sort::Point;
          } else if constexpr (std::is_same_v<T, CircleDef>) {
            need_point(s.center, i, "center");
            need_point(s.through, i, "through point");
            if (same_point(s.center, s.through)) flag(at + ": circle center and through point coincide");
            sorts[i] = Sort::Circle;
          } else if constexpr (std::is_same_v<T, LineDef>) {
            need_point(s.p, i, "endpoint");
            need_point(s.q, i, "endpoint");
            if (same_point(s.p, s.q)) flag(at + ": line endpoints coincide");
            sorts[i] = Sort::Line;
          } else if constexpr (std::is_same_v<T, IntersectBasicStep>) {
            for (StepId a : {s.a, s.b}) {
              Sort so = sort_of(a, i);
              if (so != Sort::Line && so != Sort::Circle) flag(at + ": intersects something other than a line or circle");
            }
            sorts[i] = Sort::Point;
          } else {
            Sort so = sort_of(s.circle, i);
            if (so != Sort::Circle) flag(at + ": conic-conic intersection (first curve is not a circle)");
            if (prog.mode == Mode::Fixed) {
              if (!std::holds_alternative<FixedRef>(s.conic)) flag(at + ": non-fixed conic in fixed mode");
            } else if (std::holds_alternative<FixedRef>(s.conic)) {
              flag(at + ": lemma mode must draw regular conics, not the fixed conic");
            } else {
              bool is_central = std::holds_alternative<CentralRef>(s.conic);
              if (conic_ok && is_central != central) flag(at + ": conic family differs from the session");
              if (const auto* c = std::get_if<CentralRef>(&s.conic)) {
                const auto* cp_step = c->u < i ? std::get_if<ConicParam>(&prog.steps[c->u]) : nullptr;
                if (!cp_step || cp_step->kind != ConicParamKind::FormParam)
                  flag(at + ": conic does not use the session form parameter");
                need_point(c->center, i, "conic center");
                need_point(c->rhs, i, "conic right-hand side");
              } else {
                const auto& p = std::get<ParabolaRef>(s.conic);
                need_point(p.lambda, i, "parabola parameter");
                need_point(p.vertex, i, "parabola vertex");
              }
            }
            sorts[i] = Sort::Point;
          }
        },
        prog.steps[i]);
  }
  if (prog.final >= n) flag("final step out of range");
  else if (sorts[prog.final] != Sort::Point) flag("final step is not a point");
  return out;
}

struct Report {
  BigComplex constructed;
  BigComplex oracle;
  BigReal abs_error;
  BigReal max_step_residual;
  std::vector<std::string> violations;
  int conic_intersections_executed = 0;
  int conic_depth = 0;
  Precision precision_used{64};

  bool audit_pass() const { return violations.empty(); }
  bool pass() const { return audit_pass() && abs_error <= tau(precision_used); }
};

/// Executes an already compiled program and compares with the oracle.
inline Report run_and_check(const ConstructionProgram& prog, const Expr& e, Precision prec) {
  Report r;
  r.precision_used = prec;
  r.violations = audit(prog).violations;
  Valuation v = execute(prog, prec);
  r.constructed = v.point(prog.final);
  r.oracle = eval(e, prec);
  r.abs_error = distance(r.constructed, r.oracle);
  r.max_step_residual = v.max_step_residual;
  r.conic_intersections_executed = v.conic_intersections;
  r.conic_depth = prog.metadata.conic_depth;
  return r;
}

inline Report verify(const Expr& e, const ConicImplicit& C, Mode mode, Precision prec) {
  return run_and_check(compile(e, C, mode, prec), e, prec);
}

}  // namespace conicon
