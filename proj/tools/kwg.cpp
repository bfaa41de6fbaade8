// kwg: fixtures, residuals, flows, Nahm solves and Jones polynomials from the
// command line. Reports are JSON with sorted keys; identical inputs give
// byte-identical reports unless --timing is set.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace kwg::cli;

constexpr const char* kFooter = R"(Exit codes:
  0  success
  2  invalid arguments, configuration or input text (including PD parse errors)
  3  fixture or file I/O failure
  4  numerical fault (non-finite values, blow-up, rejected step)
  5  shooting did not converge

Environment:
  KWG_FIXTURE_DIR  default directory for `fixtures` output and for relative
                   fixture or PD file names that do not exist as given

Configuration:
  --config FILE reads key = value lines, with one [section] per subcommand;
  flags given on the command line take precedence.)";

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw kwg::io_error("cannot write to standard output");
  } else {
    write_file(path, text);
  }
}

std::string envelope(const std::string& command, const Outcome& o, std::optional<double> wall) {
  json r{{"schema", kSchema}, {"command", command}, {"config", o.config}, {"metrics", o.metrics}};
  if (!o.tables.empty()) r["tables"] = o.tables;
  if (!o.inputs.empty()) r["inputs"] = o.inputs;
  if (wall) r["wall_time_s"] = *wall;
  return r.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for KW-type gauge theory equations, Nahm poles and knot polynomials.", "kwg"};
  app.footer(kFooter);
  app.set_config("--config", "", "INI configuration file");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string out;
  bool timing = false;
  app.add_option("--out", out, "Write the report (or CSV) here instead of standard output");
  app.add_flag("--timing", timing, "Add wall_time_s to the report; reports are then no longer reproducible");

  CsOptions cs;
  auto* c_cs = app.add_subcommand("cs", "Chern-Simons values, Morse functions and gradient checks");
  c_cs->add_option("--fixture", cs.fixture, "Directory with a.kwgf, phi.kwgf, phi0.kwgf");
  c_cs->add_option("--generator", cs.generator, "zero or random, when no fixture is given")->capture_default_str();
  c_cs->add_option("--n", cs.n, "Grid points per axis of the periodic cube")->capture_default_str();
  c_cs->add_option("--rank", cs.rank, "N of su(N)")->capture_default_str();
  c_cs->add_option("--seed", cs.seed, "Generator seed")->capture_default_str();
  c_cs->add_option("--amplitude", cs.amplitude, "Amplitude of random fields")->capture_default_str();
  c_cs->add_option("--alpha", cs.alpha, "Morse angle")->capture_default_str();
  c_cs->add_option("--level", cs.level, "Level normalization of the Morse function")->capture_default_str();
  c_cs->add_flag("--gradient-check", cs.gradient_check, "Compare the gradient with central differences");
  c_cs->add_option("--directions", cs.directions, "Random directions for the gradient check")->capture_default_str();
  c_cs->add_option("--eps", cs.eps, "Finite-difference step")->capture_default_str();

  KwOptions kw;
  std::optional<double> kw_alpha;
  auto* c_kw = app.add_subcommand("kw", "KW residuals, involution checks, flows and refinement studies");
  c_kw->add_option("--fixture", kw.fixture, "nahm-pole, zero, random, or real-flow with --refine")->capture_default_str();
  c_kw->add_option("--t", kw.t, "Point of RP^1: a number or inf")->capture_default_str();
  c_kw->add_option("--alpha", kw_alpha, "Angle; sets t = (1 - cos a) / sin a and drives --flow");
  c_kw->add_option("--rank", kw.rank, "N of su(N)")->capture_default_str();
  c_kw->add_option("--ny", kw.ny, "Nodes along the half-line")->capture_default_str();
  c_kw->add_option("--n", kw.n, "Grid points per periodic axis")->capture_default_str();
  c_kw->add_option("--seed", kw.seed, "Generator seed")->capture_default_str();
  c_kw->add_flag("--fd", kw.fd, "Finite-difference derivatives for the nahm-pole fixture");
  c_kw->add_flag("--refine", kw.refine, "Refinement study over --levels");
  c_kw->add_option("--levels", kw.levels, "Refinement levels")->capture_default_str();
  c_kw->add_flag("--involution-check", kw.involution_check, "Compare residuals under phi -> -phi (t = 0 or inf)");
  c_kw->add_option("--samples", kw.samples, "Random fixtures for the involution check")->capture_default_str();
  c_kw->add_flag("--flow", kw.flow, "Run the extended gradient flow");
  c_kw->add_option("--steps", kw.steps, "Flow steps")->capture_default_str();
  c_kw->add_option("--ds", kw.ds, "Flow step; 0 picks a stable step")->capture_default_str();
  c_kw->add_option("--amplitude", kw.amplitude, "Amplitude of the random initial state")->capture_default_str();
  c_kw->add_option("--level", kw.level, "Level normalization of the flow")->capture_default_str();
  c_kw->add_option("--extent", kw.extent, "Period of the flow box")->capture_default_str();

  NahmCliOptions nahm;
  std::optional<double> bps, shoot;
  auto* c_nahm = app.add_subcommand("nahm", "Integrate or shoot Nahm's equations");
  c_nahm->add_option("--bps", bps, "Integrate from the coth/csch profile with this k");
  c_nahm->add_option("--shoot", shoot, "Shoot from the pole to Coulomb data k t1 at large y");
  c_nahm->add_flag("--pole-only", nahm.pole_only, "Integrate from the pure pole");
  c_nahm->add_flag("--lax-check", nahm.lax_check, "Conservation run from generic data");
  c_nahm->add_option("--rank", nahm.rank, "N of su(N)")->capture_default_str();
  c_nahm->add_option("--y0", nahm.y0, "First node")->capture_default_str();
  c_nahm->add_option("--y1", nahm.y1, "Last node")->capture_default_str();
  c_nahm->add_option("--steps", nahm.steps, "Uniform intervals between y0 and y1")->capture_default_str();
  c_nahm->add_option("--seed", nahm.seed, "Seed of the generic data")->capture_default_str();
  c_nahm->add_option("--amplitude", nahm.amplitude, "Size of the generic data")->capture_default_str();
  c_nahm->add_option("--tolerance", nahm.tolerance, "Shooting tolerance")->capture_default_str();
  c_nahm->add_option("--max-iterations", nahm.max_iterations, "Shooting iterations")->capture_default_str();
  c_nahm->add_option("--csv", nahm.csv, "Also write the trajectory CSV here");

  JonesOptions jo;
  auto* c_jones = app.add_subcommand("jones", "Jones polynomial by the bracket and the vertex model");
  c_jones->add_option("pd,--pd", jo.pd, "PD code, e.g. \"X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\"");
  c_jones->add_option("--file", jo.file, "File holding a PD code");
  c_jones->add_option("--knot", jo.knot, "Named diagram from the built-in corpus");
  c_jones->add_flag("--corpus", jo.corpus, "Every diagram of the built-in corpus");
  c_jones->add_option("--group", jo.group, "Dual gauge group")->capture_default_str();
  c_jones->add_option("--rep", jo.rep, "Representation labelling the link")->capture_default_str();

  PlotOptions po;
  auto* c_plot = app.add_subcommand("plotdata", "Tidy CSV from a table of a report");
  c_plot->add_option("--from", po.from, "Report file");
  c_plot->add_option("--table", po.table, "Table name (flow, refinement, trajectory, rk4)");

  FixtureOptions fo;
  auto* c_fix = app.add_subcommand("fixtures", "Write the standard fixture set");
  c_fix->add_option("--dir", fo.dir, "Output directory (default: $KWG_FIXTURE_DIR)");
  c_fix->add_option("--n", fo.n, "Grid points per periodic axis")->capture_default_str();
  c_fix->add_option("--rank", fo.rank, "N of su(N)")->capture_default_str();
  c_fix->add_option("--ny", fo.ny, "Half-line nodes of the pole fixture")->capture_default_str();
  c_fix->add_option("--seed", fo.seed, "Seed of the random fixture")->capture_default_str();
  c_fix->add_option("--amplitude", fo.amplitude, "Amplitude of the random fixture")->capture_default_str();
  c_fix->add_option("--encoding", fo.encoding, "csv or binary")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    auto wall = [&]() -> std::optional<double> {
      if (!timing) return std::nullopt;
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    if (*c_plot) {
      emit(run_plotdata(po), out);
      return 0;
    }
    std::string name;
    Outcome result;
    if (*c_cs) {
      name = "cs";
      result = run_cs(cs);
    } else if (*c_kw) {
      name = "kw";
      kw.alpha = kw_alpha;
      result = run_kw(kw);
    } else if (*c_nahm) {
      name = "nahm";
      nahm.bps = bps;
      nahm.shoot = shoot;
      result = run_nahm(nahm);
    } else if (*c_jones) {
      name = "jones";
      result = run_jones(jo);
    } else {
      name = "fixtures";
      result = run_fixtures(fo);
    }
    emit(envelope(name, result, wall()), out);
    return 0;
  } catch (const kwg::Error& e) {
    std::cerr << "kwg: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "kwg: malformed report data: " << e.what() << '\n';
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "kwg: out of memory\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "kwg: " << e.what() << '\n';
    return 4;
  }
}
