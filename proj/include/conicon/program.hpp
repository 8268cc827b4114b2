#pragma once

// Construction programs: a topologically ordered list of steps over the
// point 0, 1 and the initial literals.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "conicon/conic.hpp"
#include "conicon/errors.hpp"
#include "conicon/expr.hpp"

namespace conicon {

using StepId = std::size_t;

enum class FieldOp { Add, Sub, Mul, Div, Neg, Conj };

inline int arity(FieldOp op) { return op == FieldOp::Neg || op == FieldOp::Conj ? 1 : 2; }

/// Regular parameters of the fixed conic, re-derived at execution precision.
/// Central conics expose FormParam, Center and Rhs; parabolas expose
/// FormParam (always 0), Lambda and Vertex. Frame is e^{iθ} of the
/// working frame.
enum class ConicParamKind { FormParam, Frame, Center, Rhs, Lambda, Vertex };

struct PointLit {
  GaussianRational value;
};

struct MacroField {
  FieldOp op;
  std::vector<StepId> args;
};

struct MacroSqrt {
  StepId arg;
};

struct ConicParam {
  ConicParamKind kind;
};

struct CircleDef {
  StepId center, through;
};

struct LineDef {
  StepId p, q;
};

/// Expected point at compile precision, and the distance from it to the
/// nearest other intersection point at compile time.
struct SelectorHint {
  BigComplex expected;
  BigReal min_separation;
};

struct IntersectBasicStep {
  StepId a, b;
  SelectorHint hint;
};

struct FixedRef {};
struct CentralRef {
  StepId u, center, rhs;
};
struct ParabolaRef {
  StepId lambda, vertex;
};
using ConicRef = std::variant<FixedRef, CentralRef, ParabolaRef>;

struct ConicIntersect {
  StepId circle;
  ConicRef conic;
  SelectorHint hint;
};

using Step = std::variant<PointLit, MacroField, MacroSqrt, ConicParam, CircleDef, LineDef, IntersectBasicStep,
                          ConicIntersect>;

enum class Mode { Fixed, Lemma };

inline std::string to_string(Mode m) { return m == Mode::Fixed ? "fixed" : "lemma"; }

struct ProgramMetadata {
  int sqrt_count = 0;
  int cbrt_count = 0;
  int conic_depth = 0;
  unsigned compile_precision_bits = 0;
};

struct ConstructionProgram {
  Mode mode = Mode::Fixed;
  ConicImplicit fixed_conic;
  Frame working_frame;
  std::vector<Step> steps;
  StepId final = 0;
  ProgramMetadata metadata;
};

/// Field operation on complex values.
inline BigComplex apply_field(FieldOp op, const BigComplex& a, const BigComplex& b) {
  switch (op) {
    case FieldOp::Add: return a + b;
    case FieldOp::Sub: return a - b;
    case FieldOp::Mul: return a * b;
    case FieldOp::Div: return a / b;
    case FieldOp::Neg: return -a;
    case FieldOp::Conj: return a.conj();
  }
  throw MalformedProgram("unknown field operation");
}

/// Value of a regular parameter of the placed conic.
inline BigComplex conic_param_value(ConicParamKind kind, const RegularPlacement& rp, Precision p) {
  const BigReal zero(p);
  if (kind == ConicParamKind::Frame) return rp.frame.omega();
  if (const auto* c = std::get_if<CentralForm>(&rp.conic)) {
    switch (kind) {
      case ConicParamKind::FormParam: return BigComplex(c->u);
      case ConicParamKind::Center: return c->center;
      case ConicParamKind::Rhs: return BigComplex(c->rhs);
      default: throw MalformedProgram("parabola parameter requested from a central conic");
    }
  }
  const auto& par = std::get<ParabolaForm>(rp.conic);
  switch (kind) {
    case ConicParamKind::FormParam: return BigComplex(zero);
    case ConicParamKind::Lambda: return BigComplex(par.lambda);
    case ConicParamKind::Vertex: return par.vertex;
    default: throw MalformedProgram("central parameter requested from a parabola");
  }
}

/// Regular-form conic described by a lemma-mode reference, in world
/// coordinates. point(id) yields the value of a point step.
template <class PointOf>
RegularConic lemma_conic(const ConicRef& ref, PointOf&& point) {
  if (const auto* c = std::get_if<CentralRef>(&ref)) return CentralForm{point(c->u).re(), point(c->center), point(c->rhs).re()};
  if (const auto* pr = std::get_if<ParabolaRef>(&ref)) return ParabolaForm{point(pr->lambda).re(), point(pr->vertex)};
  throw MalformedProgram("the fixed conic has no lemma-mode parameters");
}

}  // namespace conicon
