#pragma once

// Versioned JSON trace files for construction programs.
//
// Rationals are written as "p/q" strings and reals as decimal strings with
// enough digits to reload the exact binary value at compile precision.

#include <array>
#include <fstream>
#include <sstream>
#include <string>

#include "conicon/program.hpp"
#include "json.hpp"

namespace conicon {

namespace detail {

using json = nlohmann::ordered_json;

inline const char* field_name(FieldOp op) {
  switch (op) {
    case FieldOp::Add: return "add";
    case FieldOp::Sub: return "sub";
    case FieldOp::Mul: return "mul";
    case FieldOp::Div: return "div";
    case FieldOp::Neg: return "neg";
    case FieldOp::Conj: return "conj";
  }
  return "?";
}

inline const char* param_name(ConicParamKind k) {
  switch (k) {
    case ConicParamKind::FormParam: return "u";
    case ConicParamKind::Frame: return "frame";
    case ConicParamKind::Center: return "center";
    case ConicParamKind::Rhs: return "rhs";
    case ConicParamKind::Lambda: return "lambda";
    case ConicParamKind::Vertex: return "vertex";
  }
  return "?";
}

inline std::string real_string(const BigReal& x, Precision p) { return x.with_precision(p).to_string(p.decimal_digits()); }

inline json hint_json(const SelectorHint& h, Precision p) {
  return {{"x", real_string(h.expected.re(), p)},
          {"y", real_string(h.expected.im(), p)},
          {"min_separation", real_string(h.min_separation, p)}};
}

inline json conic_json(const ConicRef& ref) {
  if (std::holds_alternative<FixedRef>(ref)) return {{"kind", "fixed"}};
  if (const auto* c = std::get_if<CentralRef>(&ref)) return {{"kind", "central"}, {"u", c->u}, {"center", c->center}, {"rhs", c->rhs}};
  const auto& pr = std::get<ParabolaRef>(ref);
  return {{"kind", "parabola"}, {"lambda", pr.lambda}, {"vertex", pr.vertex}};
}

inline json step_json(StepId id, const Step& step, Precision p) {
  json j{{"id", id}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointLit>) {
          j["kind"] = "point";
          j["args"] = {rational_string(s.value.re), rational_string(s.value.im)};
        } else if constexpr (std::is_same_v<T, MacroField>) {
          j["kind"] = field_name(s.op);
          j["args"] = s.args;
        } else if constexpr (std::is_same_v<T, MacroSqrt>) {
          j["kind"] = "sqrt";
          j["args"] = {s.arg};
        } else if constexpr (std::is_same_v<T, ConicParam>) {
          j["kind"] = "conic_param";
          j["args"] = {param_name(s.kind)};
        } else if constexpr (std::is_same_v<T, CircleDef>) {
          j["kind"] = "circle";
          j["args"] = {s.center, s.through};
        } else if constexpr (std::is_same_v<T, LineDef>) {
          j["kind"] = "line";
          j["args"] = {s.p, s.q};
        } else if constexpr (std::is_same_v<T, IntersectBasicStep>) {
          j["kind"] = "intersect";
          j["args"] = {s.a, s.b};
          j["hint"] = hint_json(s.hint, p);
        } else {
          j["kind"] = "conic_intersect";
          j["args"] = {s.circle};
          j["conic"] = conic_json(s.conic);
          j["hint"] = hint_json(s.hint, p);
        }
      },
      step);
  return j;
}

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw TraceFormatError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw TraceFormatError(where + ": bad '" + key + "': " + e.what());
  }
}

inline BigReal real_from(const json& j, const char* key, Precision p, const std::string& where) {
  auto s = get_field<std::string>(j, key, where);
  try {
    return BigReal(s, p);
  } catch (const std::invalid_argument&) {
    throw TraceFormatError(where + ": '" + key + "' is not a decimal: " + s);
  }
}

inline SelectorHint hint_from(const json& j, Precision p, const std::string& where) {
  if (!j.contains("hint")) throw TraceFormatError(where + ": missing 'hint'");
  const json& h = j["hint"];
  return {BigComplex(real_from(h, "x", p, where), real_from(h, "y", p, where)), real_from(h, "min_separation", p, where)};
}

inline ConicRef conic_from(const json& j, const std::string& where) {
  const json& c = j.contains("conic") ? j["conic"] : json();
  auto kind = get_field<std::string>(c, "kind", where);
  if (kind == "fixed") return FixedRef{};
  if (kind == "central")
    return CentralRef{get_field<StepId>(c, "u", where), get_field<StepId>(c, "center", where),
                      get_field<StepId>(c, "rhs", where)};
  if (kind == "parabola") return ParabolaRef{get_field<StepId>(c, "lambda", where), get_field<StepId>(c, "vertex", where)};
  throw TraceFormatError(where + ": unknown conic kind '" + kind + "'");
}

inline Step step_from(const json& j, Precision p, const std::string& where) {
  auto kind = get_field<std::string>(j, "kind", where);
  const json args = j.contains("args") ? j["args"] : json::array();
  if (!args.is_array()) throw TraceFormatError(where + ": 'args' is not an array");
  auto ids = [&](std::size_t n) {
    if (args.size() != n) throw TraceFormatError(where + ": expected " + std::to_string(n) + " args");
    std::vector<StepId> out;
    for (const auto& a : args) {
      if (!a.is_number_unsigned()) throw TraceFormatError(where + ": args must be step ids");
      out.push_back(a.get<StepId>());
    }
    return out;
  };
  if (kind == "point") {
    if (args.size() != 2 || !args[0].is_string() || !args[1].is_string())
      throw TraceFormatError(where + ": point needs two rational strings");
    try {
      return PointLit{GaussianRational{parse_rational(args[0].get<std::string>()), parse_rational(args[1].get<std::string>())}};
    } catch (const std::exception& e) {
      throw TraceFormatError(where + ": " + e.what());
    }
  }
  for (FieldOp op : {FieldOp::Add, FieldOp::Sub, FieldOp::Mul, FieldOp::Div, FieldOp::Neg, FieldOp::Conj})
    if (kind == field_name(op)) return MacroField{op, ids(static_cast<std::size_t>(arity(op)))};
  if (kind == "sqrt") return MacroSqrt{ids(1)[0]};
  if (kind == "conic_param") {
    if (args.size() != 1 || !args[0].is_string()) throw TraceFormatError(where + ": conic_param needs a name");
    auto name = args[0].get<std::string>();
    for (ConicParamKind k : {ConicParamKind::FormParam, ConicParamKind::Frame, ConicParamKind::Center,
                             ConicParamKind::Rhs, ConicParamKind::Lambda, ConicParamKind::Vertex})
      if (name == param_name(k)) return ConicParam{k};
    throw TraceFormatError(where + ": unknown conic parameter '" + name + "'");
  }
  if (kind == "circle") {
    auto a = ids(2);
    return CircleDef{a[0], a[1]};
  }
  if (kind == "line") {
    auto a = ids(2);
    return LineDef{a[0], a[1]};
  }
  if (kind == "intersect") {
    auto a = ids(2);
    return IntersectBasicStep{a[0], a[1], hint_from(j, p, where)};
  }
  if (kind == "conic_intersect") return ConicIntersect{ids(1)[0], conic_from(j, where), hint_from(j, p, where)};
  throw TraceFormatError(where + ": unknown step kind '" + kind + "'");
}

}  // namespace detail

inline constexpr const char* kTraceVersion = "1";

inline std::string save_trace(const ConstructionProgram& prog) {
  using detail::json;
  const Precision p{std::max(prog.metadata.compile_precision_bits, Precision::kMinBits)};
  json fixed = json::array();
  for (const BigReal* c : prog.fixed_conic.coefficients()) fixed.push_back(detail::real_string(*c, p));
  json steps = json::array();
  for (StepId i = 0; i < prog.steps.size(); ++i) steps.push_back(detail::step_json(i, prog.steps[i], p));
  json j{{"version", kTraceVersion},
         {"mode", to_string(prog.mode)},
         {"fixed_conic", fixed},
         {"working_frame", {detail::real_string(prog.working_frame.cos, p), detail::real_string(prog.working_frame.sin, p)}},
         {"steps", steps},
         {"final", prog.final},
         {"metadata",
          {{"sqrt_count", prog.metadata.sqrt_count},
           {"cbrt_count", prog.metadata.cbrt_count},
           {"conic_depth", prog.metadata.conic_depth},
           {"compile_precision_bits", prog.metadata.compile_precision_bits}}}};
  return j.dump(2) + "\n";
}

/// Throws TraceFormatError on malformed input. Structural validity
/// (reference order, step kinds) is left to audit.
inline ConstructionProgram load_trace(const std::string& text) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TraceFormatError(std::string("not JSON: ") + e.what());
  }
  if (!j.is_object()) throw TraceFormatError("trace must be a JSON object");
  auto version = detail::get_field<std::string>(j, "version", "trace");
  if (version != kTraceVersion) throw TraceFormatError("unsupported trace version '" + version + "'");

  ConstructionProgram prog;
  const json& meta = j.contains("metadata") ? j["metadata"] : json();
  prog.metadata.sqrt_count = detail::get_field<int>(meta, "sqrt_count", "metadata");
  prog.metadata.cbrt_count = detail::get_field<int>(meta, "cbrt_count", "metadata");
  prog.metadata.conic_depth = detail::get_field<int>(meta, "conic_depth", "metadata");
  prog.metadata.compile_precision_bits = detail::get_field<unsigned>(meta, "compile_precision_bits", "metadata");
  const Precision p{std::max(prog.metadata.compile_precision_bits, Precision::kMinBits)};

  auto mode = detail::get_field<std::string>(j, "mode", "trace");
  if (mode == "fixed") prog.mode = Mode::Fixed;
  else if (mode == "lemma") prog.mode = Mode::Lemma;
  else throw TraceFormatError("unknown mode '" + mode + "'");

  auto fixed = detail::get_field<std::vector<std::string>>(j, "fixed_conic", "trace");
  if (fixed.size() != 6) throw TraceFormatError("fixed_conic needs six coefficients");
  auto frame = detail::get_field<std::vector<std::string>>(j, "working_frame", "trace");
  if (frame.size() != 2) throw TraceFormatError("working_frame needs two values");
  try {
    prog.fixed_conic = {BigReal(fixed[0], p), BigReal(fixed[1], p), BigReal(fixed[2], p),
                        BigReal(fixed[3], p), BigReal(fixed[4], p), BigReal(fixed[5], p)};
    prog.working_frame = {BigReal(frame[0], p), BigReal(frame[1], p)};
  } catch (const std::invalid_argument& e) {
    throw TraceFormatError(e.what());
  }

  if (!j.contains("steps") || !j["steps"].is_array()) throw TraceFormatError("missing 'steps' array");
  for (const json& s : j["steps"]) {
    std::string where = "step " + std::to_string(prog.steps.size());
    if (detail::get_field<StepId>(s, "id", where) != prog.steps.size()) throw TraceFormatError(where + ": ids must be 0, 1, 2, ...");
    prog.steps.push_back(detail::step_from(s, p, where));
  }
  prog.final = detail::get_field<StepId>(j, "final", "trace");
  return prog;
}

inline void write_trace_file(const ConstructionProgram& prog, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TraceFormatError("cannot write " + path);
  out << save_trace(prog);
}

inline ConstructionProgram read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceFormatError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_trace(ss.str());
}

}  // namespace conicon
