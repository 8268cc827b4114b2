// conicon: compile, execute and verify constructions with one fixed conic.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conicon/conicon.hpp"
#include "json.hpp"

using namespace conicon;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

// "p", "p/q" or a plain decimal such as -0.25, converted exactly.
mpq_class parse_number(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument&) {
  }
  auto dot = s.find('.');
  if (dot != std::string::npos && s.find('.', dot + 1) == std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (digits == "-" || digits == "+" || digits.empty()) throw UsageError("not a number: '" + s + "'");
    try {
      mpq_class q = parse_rational(digits);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
      q /= den;
      return q;
    } catch (const std::invalid_argument&) {
    }
  }
  throw UsageError("not a number: '" + s + "'");
}

std::vector<mpq_class> parse_list(const std::string& s, std::size_t n, const char* what) {
  auto parts = split(s);
  if (parts.size() != n)
    throw UsageError(std::string(what) + " needs " + std::to_string(n) + " comma-separated numbers, got '" + s + "'");
  std::vector<mpq_class> out;
  for (auto& p : parts) out.push_back(parse_number(p));
  return out;
}

std::string fmt(const BigReal& x, unsigned digits) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", static_cast<int>(digits), x.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string fmt(const BigComplex& z, unsigned digits) {
  if (z.im().is_zero()) return fmt(z.re(), digits);
  std::string im = fmt(abs(z.im()), digits);
  return fmt(z.re(), digits) + (z.im().sign() < 0 ? " - " : " + ") + im + "i";
}

struct ConicInput {
  std::string coeffs, focus, directrix, ecc;

  void add_to(CLI::App* cmd, bool positional = false) {
    if (positional) cmd->add_option("coefficients", coeffs, "a,b,c,d,e,f of ax²+bxy+cy²+dx+ey+f = 0");
    else cmd->add_option("--conic", coeffs, "fixed conic as a,b,c,d,e,f of ax²+bxy+cy²+dx+ey+f = 0");
    cmd->add_option("--focus", focus, "focus x,y");
    cmd->add_option("--directrix", directrix, "directrix nx,ny,c of the line nx·x + ny·y = c");
    cmd->add_option("--ecc", ecc, "eccentricity");
  }

  ConicImplicit get(Precision p) const {
    bool fd = !focus.empty() || !directrix.empty() || !ecc.empty();
    if (fd && !coeffs.empty()) throw UsageError("give either coefficients or --focus/--directrix/--ecc, not both");
    if (fd) {
      if (focus.empty() || directrix.empty() || ecc.empty())
        throw UsageError("--focus, --directrix and --ecc must be given together");
      auto f = parse_list(focus, 2, "--focus");
      auto d = parse_list(directrix, 3, "--directrix");
      auto e = parse_list(ecc, 1, "--ecc");
      try {
        return focus_directrix_to_implicit({BigComplex(BigReal(f[0], p), BigReal(f[1], p)),
                                            {BigReal(d[0], p), BigReal(d[1], p), BigReal(d[2], p)},
                                            BigReal(e[0], p)});
      } catch (const DegenerateInput& ex) {
        throw UsageError(ex.what());
      }
    }
    if (coeffs.empty()) throw UsageError("a fixed conic is required (--conic a,b,c,d,e,f or --focus/--directrix/--ecc)");
    auto c = parse_list(coeffs, 6, "conic");
    return ConicImplicit::from_rationals({c[0], c[1], c[2], c[3], c[4], c[5]}, p);
  }
};

Mode parse_mode(const std::string& m) {
  if (m == "fixed") return Mode::Fixed;
  if (m == "lemma") return Mode::Lemma;
  throw UsageError("--mode must be fixed or lemma");
}

ExprPtr parse_expr(const std::string& text) {
  try {
    return parse(text);
  } catch (const SyntaxError& e) {
    throw UsageError(std::string("expression: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string conic_description(const ConicImplicit& C, Precision p) {
  ConicClass cls = classify(C, p);
  std::string s = to_string(cls);
  if (is_proper_conic(cls) && cls != ConicClass::Circle)
    s += ", true eccentricity " + fmt(true_eccentricity(to_regular(C, p).conic), 20);
  return s;
}

int print_report(const Report& r, const Expr& e, const ConstructionProgram& prog, unsigned digits, bool as_json,
                 const std::string& label = "constructed") {
  if (as_json) {
    nlohmann::ordered_json j{{"expression", to_string(e)},
                             {"mode", to_string(prog.mode)},
                             {"constructed", {r.constructed.re().to_string(), r.constructed.im().to_string()}},
                             {"oracle", {r.oracle.re().to_string(), r.oracle.im().to_string()}},
                             {"abs_error", r.abs_error.to_string(20)},
                             {"max_step_residual", r.max_step_residual.to_string(20)},
                             {"conic_depth", r.conic_depth},
                             {"conic_intersections", r.conic_intersections_executed},
                             {"steps", prog.steps.size()},
                             {"precision", r.precision_used.bits()},
                             {"violations", r.violations},
                             {"pass", r.pass()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "expression        " << to_string(e) << "\n"
              << "mode              " << to_string(prog.mode) << "\n"
              << label << std::string(label.size() < 18 ? 18 - label.size() : 1, ' ') << fmt(r.constructed, digits) << "\n"
              << "oracle            " << fmt(r.oracle, digits) << "\n"
              << "abs_error         " << fmt(r.abs_error, 6) << "\n"
              << "max_step_residual " << fmt(r.max_step_residual, 6) << "\n"
              << "conic_depth       " << r.conic_depth << "\n"
              << "conic_steps       " << r.conic_intersections_executed << "\n"
              << "steps             " << prog.steps.size() << "\n"
              << "precision         " << r.precision_used.bits() << " bits\n";
    for (auto& v : r.violations) std::cout << "violation         " << v << "\n";
    std::cout << (r.pass() ? "pass" : "FAIL") << "\n";
  }
  return r.pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructions with ruler, compass and one fixed conic"};
  app.require_subcommand(1);

  unsigned bits = 256;
  unsigned digits = 30;
  std::string mode = "fixed", output, expr_text, trace_path, cos_text;
  bool as_json = false;
  std::optional<unsigned> exec_bits;
  ConicInput conic;

  auto common = [&](CLI::App* cmd) {
    conic.add_to(cmd);
    cmd->add_option("--mode", mode, "fixed or lemma")->check(CLI::IsMember({"fixed", "lemma"}));
    cmd->add_option("--precision", bits, "working precision in bits")->check(CLI::Range(64u, 1u << 20));
  };
  auto reporting = [&](CLI::App* cmd) {
    cmd->add_option("--digits", digits, "significant digits printed")->check(CLI::Range(1u, 10000u));
    cmd->add_flag("--json", as_json, "print the report as JSON");
    cmd->add_option("--output", output, "also write the trace to this path");
  };

  auto* compile_cmd = app.add_subcommand("compile", "compile an expression into a trace");
  compile_cmd->add_option("expr", expr_text, "expression, e.g. \"cbrt(2) + i\"")->required();
  common(compile_cmd);
  compile_cmd->add_option("--output", output, "trace path (default: stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "compile, execute and compare with the direct evaluation");
  verify_cmd->add_option("expr", expr_text, "expression")->required();
  common(verify_cmd);
  reporting(verify_cmd);

  auto* run_cmd = app.add_subcommand("run", "audit and execute a trace");
  run_cmd->add_option("trace", trace_path, "trace file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--precision", exec_bits, "execution precision (default: the trace's compile precision)")
      ->check(CLI::Range(64u, 1u << 20));
  run_cmd->add_option("--expr", expr_text, "expression to compare against");
  run_cmd->add_option("--digits", digits, "significant digits printed")->check(CLI::Range(1u, 10000u));

  auto* classify_cmd = app.add_subcommand("classify", "classify a conic and check it can serve as the fixed conic");
  conic.add_to(classify_cmd, true);
  classify_cmd->add_option("--precision", bits, "precision in bits")->check(CLI::Range(64u, 1u << 20));

  auto* render_cmd = app.add_subcommand("render", "draw a trace as SVG");
  render_cmd->add_option("trace", trace_path, "trace file")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--output", output, "SVG path (default: stdout)");
  render_cmd->add_option("--precision", exec_bits, "execution precision")->check(CLI::Range(64u, 1u << 20));

  auto* cube_cmd = app.add_subcommand("double-cube", "construct the cube root of 2");
  common(cube_cmd);
  reporting(cube_cmd);

  auto* trisect_cmd = app.add_subcommand("trisect", "construct cos(θ/3) from cos θ");
  trisect_cmd->add_option("--cos", cos_text, "cos θ as a rational in [-1, 1]")->required();
  common(trisect_cmd);
  reporting(trisect_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    const Precision p{bits};
    if (*compile_cmd || *verify_cmd || *cube_cmd || *trisect_cmd) {
      ConicImplicit C = conic.get(p);
      Mode m = parse_mode(mode);
      ExprPtr e;
      std::string label = "constructed";
      if (*cube_cmd) {
        e = cbrt(Expr::lit(2));
      } else if (*trisect_cmd) {
        mpq_class q = parse_number(cos_text);
        if (q < -1 || q > 1) throw UsageError("--cos must lie in [-1, 1]");
        // cos(θ/3) = Re ∛(cos θ + i sin θ)
        ExprPtr Q = Expr::lit(GaussianRational::real(q));
        ExprPtr w = cbrt(Q + Expr::i() * sqrt(Expr::lit(1) - Q * Q));
        e = (w + conj(w)) / Expr::lit(2);
        label = "cos(theta/3)";
      } else {
        e = parse_expr(expr_text);
      }
      ConstructionProgram prog = compile(*e, C, m, p);
      if (*compile_cmd) {
        write_text(output, save_trace(prog));
        return kPass;
      }
      if (!output.empty()) write_trace_file(prog, output);
      if (!as_json) std::cout << "fixed conic       " << conic_description(C, p) << "\n";
      return print_report(run_and_check(prog, *e, p), *e, prog, digits, as_json, label);
    }

    if (*classify_cmd) {
      ConicImplicit C = conic.get(p);
      std::cout << conic_description(C, p) << "\n";
      ConicClass cls = classify(C, p);
      if (!is_proper_conic(cls) || cls == ConicClass::Circle) {
        std::cout << "not usable as the fixed conic: a non-degenerate, non-circular conic is required\n";
        return kFail;
      }
      return kPass;
    }

    ConstructionProgram prog = read_trace_file(trace_path);
    const Precision ep{exec_bits.value_or(std::max(prog.metadata.compile_precision_bits, Precision::kMinBits))};
    AuditResult audited = audit(prog);
    if (*render_cmd) {
      for (auto& v : audited.violations) std::cerr << "violation: " << v << "\n";
      write_text(output, render_svg(prog, execute(prog, ep)));
      return audited.pass() ? kPass : kFail;
    }

    // run
    if (!expr_text.empty()) {
      ExprPtr e = parse_expr(expr_text);
      return print_report(run_and_check(prog, *e, ep), *e, prog, digits, false);
    }
    for (auto& v : audited.violations) std::cout << "violation         " << v << "\n";
    Valuation val = execute(prog, ep);
    std::cout << "constructed       " << fmt(val.point(prog.final), digits) << "\n"
              << "max_step_residual " << fmt(val.max_step_residual, 6) << "\n"
              << "conic_steps       " << val.conic_intersections << "\n"
              << "conic_depth       " << prog.metadata.conic_depth << "\n";
    bool ok = audited.pass() && val.max_step_residual <= tau(ep);
    std::cout << (ok ? "pass" : "FAIL") << "\n";
    return ok ? kPass : kFail;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const TraceFormatError& e) {
    std::cerr << "bad trace: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidFixedConic& e) {
    std::cerr << "invalid fixed conic: " << e.what() << "\n";
    return kFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
