// Doubling the cube and trisecting 60° with the parabola y² = x as the only
// conic, then writing the first construction as a trace and an SVG figure.

#include <fstream>
#include <iostream>

#include "conicon/conicon.hpp"

int main(int argc, char** argv) {
  using namespace conicon;
  const Precision p{256};
  auto parabola = ConicImplicit::from_rationals({0, 0, 1, -1, 0, 0}, p);

  auto e = parse("cbrt(2)");
  ConstructionProgram prog = compile(*e, parabola, Mode::Fixed, p);
  Report r = run_and_check(prog, *e, p);
  std::cout << "cbrt(2)    = " << r.constructed.re() << "  error " << r.abs_error.to_double() << "  "
            << prog.steps.size() << " steps, conic depth " << r.conic_depth << "\n";

  // cos 20° = Re ∛(e^{iπ/3})
  auto w = parse("cbrt(1/2 + i*sqrt(3)/2)");
  auto cos20 = (w + conj(w)) / Expr::lit(2);
  Report t = verify(*cos20, parabola, Mode::Lemma, p);
  std::cout << "cos 20°    = " << t.constructed.re() << "  error " << t.abs_error.to_double() << "\n";

  std::string stem = argc > 1 ? argv[1] : "double_cube";
  std::ofstream(stem + ".json") << save_trace(prog);
  std::ofstream(stem + ".svg") << render_svg(prog, execute(prog, p));
  std::cout << "wrote " << stem << ".json and " << stem << ".svg\n";
  return r.pass() && t.pass() ? 0 : 1;
}
