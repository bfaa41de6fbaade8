#pragma once

// Subcommand implementations. Each returns the metrics part of a report and
// records input checksums; main() adds the envelope and writes it out.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kwgauge/field_io.hpp"
#include "kwgauge/fixtures.hpp"
#include "kwgauge/jones.hpp"
#include "kwgauge/knot_corpus.hpp"

namespace kwg::cli {

using json = nlohmann::json;  // std::map-backed, so keys serialize sorted
namespace fs = std::filesystem;

inline constexpr const char* kSchema = "kwg-report/1";
inline constexpr const char* kFixtureEnv = "KWG_FIXTURE_DIR";

// ---------------------------------------------------------------------------
// Helpers

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text)) throw io_error("cannot write '" + path + "'");
}

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string checksum(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::optional<std::string> fixture_env() {
  const char* v = std::getenv(kFixtureEnv);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

/// Existing paths are used as given; otherwise relative names are looked up
/// in the fixture directory.
inline std::string resolve_input(const std::string& path) {
  if (fs::exists(path)) return path;
  if (const auto dir = fixture_env(); dir && fs::path(path).is_relative() && fs::exists(fs::path(*dir) / path))
    return (fs::path(*dir) / path).string();
  throw io_error("input '" + path + "' not found" + (fixture_env() ? "" : std::string(" (") + kFixtureEnv + " is unset)"));
}

inline double parse_number(const std::string& s, const char* what) {
  try {
    return parse_double(s);
  } catch (const Error&) {
    throw invalid_argument(std::string(what) + ": '" + s + "' is not a number");
  }
}

/// "inf" or "infinity" for the point at infinity, otherwise a finite number.
inline KWParams parse_t(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return KWParams::infinity();
  return KWParams::from_t(parse_number(s, "--t"));
}

inline json t_json(const KWParams& t) { return json::array({t.p, t.q}); }

inline json grid_json(const GridSpec& g) {
  json axes = json::array();
  for (const auto& a : g.axes())
    axes.push_back({{"kind", detail::axis_kind_name(a.kind)}, {"lo", a.lo}, {"hi", a.hi}, {"points", a.points}});
  return {{"dim", g.dim()}, {"axes", axes}};
}

inline json table(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
  return {{"columns", columns}, {"rows", rows}};
}

inline json residual_json(const KWResidual& r) {
  return {{"plus", r.plus_norm()}, {"minus", r.minus_norm()}, {"moment", r.moment_norm()}, {"total", r.total_norm()}};
}

inline json refinement_table(const std::vector<fixtures::RefinementRow>& rows) {
  std::vector<std::vector<double>> out;
  for (const auto& r : rows) out.push_back({r.spacing, r.residual, r.ratio, r.order});
  return table({"spacing", "residual", "ratio", "order"}, out);
}

/// Terms sorted by exponent; `halves` keys become exponents k / 2.
inline json poly_json(const LaurentPolynomial& p, bool halves) {
  json terms = json::array();
  for (const auto& [k, c] : p.terms()) {
    json exponent = halves ? json(k / 2.0) : json(k);
    if (halves && k % 2 == 0) exponent = k / 2;
    terms.push_back({{"coefficient", c}, {"exponent", exponent}});
  }
  return terms;
}

struct Outcome {
  json config;
  json metrics;
  json tables = json::object();
  json inputs = json::object();
};

// ---------------------------------------------------------------------------
// cs

struct CsOptions {
  std::string fixture;
  std::string generator = "random";
  int n = 4;
  int rank = 2;
  std::uint64_t seed = 1;
  double amplitude = 0.4;
  double alpha = M_PI / 2;
  double level = 1.0;
  bool gradient_check = false;
  int directions = 50;
  double eps = 1e-4;
};

inline FlowState load_flow_fixture(const std::string& name, json& inputs) {
  const std::string dir = resolve_input(name);
  std::vector<LatticeField> parts;
  for (const char* part : {"a", "phi", "phi0"}) {
    const std::string path = (fs::path(dir) / (std::string(part) + ".kwgf")).string();
    const std::string bytes = read_file(path);
    inputs[std::string(part) + ".kwgf"] = checksum(bytes);
    std::istringstream is(bytes);
    parts.push_back(read_field(is));
  }
  try {
    return {ComplexConnection(parts[0], parts[1]), parts[2]};
  } catch (const Error& e) {
    throw io_error(std::string("fixture '") + dir + "': " + e.what());
  }
}

inline Outcome run_cs(const CsOptions& o) {
  Outcome out;
  out.config = {{"fixture", o.fixture}, {"generator", o.generator}, {"n", o.n},      {"rank", o.rank},
                {"seed", o.seed},       {"amplitude", o.amplitude}, {"alpha", o.alpha}, {"level", o.level},
                {"gradient_check", o.gradient_check}, {"directions", o.directions}, {"eps", o.eps}};
  FlowState st;
  if (!o.fixture.empty()) {
    st = load_flow_fixture(o.fixture, out.inputs);
  } else {
    const auto g = fixtures::periodic_cube(o.n);
    if (o.generator == "zero") st = FlowState::zero(g, o.rank);
    else if (o.generator == "random") st = fixtures::random_flow_state(g, o.rank, o.seed, o.amplitude);
    else throw invalid_argument("--generator must be 'zero' or 'random'");
  }
  const MorseParams p(o.alpha, o.level);
  const cplx w = cs_complex(st.conn);
  out.metrics = {{"cs", cs_real(st.conn.a)},
                 {"cs_complex", json::array({w.real(), w.imag()})},
                 {"h0", morse_h0(st.conn, p)},
                 {"h", extended_h(st, p)},
                 {"mu_norm", l2_norm(moment_map(st.conn.a, st.conn.phi))},
                 {"grid", grid_json(st.grid())}};
  if (o.gradient_check) {
    const auto gc = fixtures::gradient_check(st, p, o.directions, o.seed + 1000, o.eps);
    out.metrics["gradient"] = {{"directions", gc.directions},
                               {"max_relative_error", gc.max_relative_error},
                               {"max_absolute_error", gc.max_absolute_error}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// kw

struct KwOptions {
  std::string fixture = "nahm-pole";
  std::string t = "1";
  std::optional<double> alpha;
  int rank = 2;
  int ny = 12;
  int n = 4;
  std::uint64_t seed = 1;
  bool fd = false;
  bool refine = false;
  std::vector<int> levels{12, 24, 48};
  bool involution_check = false;
  int samples = 20;
  bool flow = false;
  int steps = 100;
  double ds = 0.0;
  double amplitude = 0.01;
  double level = 2.0 * M_PI;
  double extent = 1.0;  // period of the flow box
};

inline Outcome run_kw(const KwOptions& o) {
  Outcome out;
  const KWParams t = o.alpha ? t_from_alpha(*o.alpha) : parse_t(o.t);
  out.config = {{"fixture", o.fixture}, {"t", t_json(t)}, {"rank", o.rank},   {"ny", o.ny},
                {"n", o.n},             {"seed", o.seed}, {"fd", o.fd},       {"refine", o.refine},
                {"levels", o.levels},   {"involution_check", o.involution_check}, {"samples", o.samples},
                {"flow", o.flow},       {"steps", o.steps}, {"ds", o.ds},     {"amplitude", o.amplitude},
                {"level", o.level}, {"extent", o.extent}};
  if (o.alpha) out.config["alpha"] = *o.alpha;
  out.metrics["t"] = t_json(t);

  if (o.flow) {
    if (!o.alpha) throw invalid_argument("--flow needs --alpha");
    const MorseParams p(*o.alpha, o.level);
    const auto run = fixtures::extended_flow_run(fixtures::periodic_cube(o.n, o.extent), p, o.steps, o.ds, o.seed, o.amplitude);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < run.h.size(); ++k) rows.push_back({double(k), k * run.ds, run.h[k], run.mu[k]});
    out.tables["flow"] = table({"step", "s", "h", "mu_norm"}, rows);
    out.metrics["flow"] = {{"ds", run.ds},           {"steps", o.steps},          {"monotone", run.monotone},
                           {"h_initial", run.h.front()}, {"h_final", run.h.back()}, {"mu_initial", run.mu.front()},
                           {"mu_final", run.mu.back()}};
    out.metrics["residual_norms"] = {{"plus", run.kw.plus}, {"minus", run.kw.minus}, {"moment", run.kw.moment},
                                     {"total", run.kw.total}};
    return out;
  }
  if (o.involution_check) {
    const auto g = fixtures::periodic_torus4(o.n);
    double worst = 0;
    for (int k = 0; k < o.samples; ++k)
      worst = std::max(worst,
                       involution_check(fixtures::random_four_config(g, o.rank, o.seed + 10 * k), t).discrepancy);
    out.metrics["involution"] = {{"samples", o.samples}, {"max_discrepancy", worst}};
    out.metrics["grid"] = grid_json(*g);
    return out;
  }
  if (o.refine) {
    std::vector<fixtures::RefinementRow> rows;
    if (o.fixture == "nahm-pole") rows = fixtures::nahm_pole_refinement(o.rank, t, o.levels);
    else if (o.fixture == "real-flow") rows = fixtures::real_flow_refinement(o.levels, 0.24, o.seed);
    else throw invalid_argument("--refine supports the nahm-pole and real-flow fixtures");
    out.tables["refinement"] = refinement_table(rows);
    json orders = json::array(), ratios = json::array();
    for (std::size_t k = 1; k < rows.size(); ++k) {
      orders.push_back(rows[k].order);
      ratios.push_back(rows[k].ratio);
    }
    out.metrics["refinement_orders"] = orders;
    out.metrics["refinement_ratios"] = ratios;
    out.metrics["residuals"] = json::array();
    for (const auto& r : rows) out.metrics["residuals"].push_back(r.residual);
    return out;
  }

  if (o.fixture == "nahm-pole") {
    out.metrics["residual_norms"] = residual_json(fixtures::nahm_pole_residual(o.rank, t, o.ny, !o.fd));
    out.metrics["derivatives"] = o.fd ? "finite-difference" : "analytic";
    out.metrics["grid"] = grid_json(*fixtures::half_space(o.ny));
  } else if (o.fixture == "zero" || o.fixture == "random") {
    const auto g = fixtures::periodic_torus4(o.n);
    const FourConfig cfg = o.fixture == "zero" ? FourConfig(LatticeField(g, 1, o.rank), LatticeField(g, 1, o.rank))
                                               : fixtures::random_four_config(g, o.rank, o.seed);
    out.metrics["residual_norms"] = residual_json(kw_residual(cfg, t));
    out.metrics["derivatives"] = "finite-difference";
    out.metrics["grid"] = grid_json(*g);
  } else {
    throw invalid_argument("--fixture must be nahm-pole, zero, random or (with --refine) real-flow");
  }
  return out;
}

// ---------------------------------------------------------------------------
// nahm

struct NahmCliOptions {
  std::optional<double> bps;
  std::optional<double> shoot;
  bool pole_only = false;
  bool lax_check = false;
  int rank = 2;
  double y0 = 0.1;
  double y1 = 2.0;
  int steps = 380;
  std::uint64_t seed = 1;
  double amplitude = 0.2;
  double tolerance = 1e-8;
  int max_iterations = 200;
  std::string csv;
};

inline PrincipalTriple cli_triple(int rank) {
  return rank == 2 ? fixtures::su2_adapted() : principal_triple(LieAlgebraSpec(rank));
}

inline json trajectory_table(const NahmTrajectory& tr) {
  std::vector<std::string> cols{"y"};
  const int dimg = tr.states.front().n() * tr.states.front().n() - 1;
  for (int i = 1; i <= 3; ++i)
    for (int a = 0; a < dimg; ++a) cols.push_back("x" + std::to_string(i) + "_" + std::to_string(a));
  cols.push_back("lax_drift");
  const auto drift = lax_drift(tr);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::vector<double> row{tr.states[k].y};
    for (int i = 0; i < 3; ++i)
      for (double v : basis_coefficients(tr.states[k].x[i].matrix())) row.push_back(v);
    row.push_back(drift[k]);
    rows.push_back(std::move(row));
  }
  return table(cols, rows);
}

inline Outcome run_nahm(const NahmCliOptions& o) {
  Outcome out;
  const int modes = int(o.bps.has_value()) + int(o.shoot.has_value()) + int(o.pole_only);
  if (modes > 1) throw invalid_argument("choose at most one of --bps, --shoot and --pole-only");
  if (modes == 0 && !o.lax_check) throw invalid_argument("choose one of --bps, --shoot, --pole-only or --lax-check");
  out.config = {{"pole_only", o.pole_only}, {"lax_check", o.lax_check}, {"rank", o.rank},   {"y0", o.y0},
                {"y1", o.y1},               {"steps", o.steps},         {"seed", o.seed},   {"amplitude", o.amplitude},
                {"tolerance", o.tolerance}, {"max_iterations", o.max_iterations}, {"csv", o.csv}};
  out.config["bps"] = o.bps ? json(*o.bps) : json(nullptr);
  out.config["shoot"] = o.shoot ? json(*o.shoot) : json(nullptr);
  const auto t = cli_triple(o.rank);
  const auto nodes = uniform_nodes(o.y0, o.y1, o.steps);
  NahmTrajectory tr;

  if (o.bps) {
    const double k = *o.bps;
    tr = integrate_nahm(bps_state(t, k, o.y0), nodes);
    double dev = 0;
    NahmTrajectory closed;
    for (const auto& s : tr.states) {
      dev = std::max(dev, fixtures::state_deviation(s, bps_state(t, k, s.y)));
      closed.states.push_back(bps_state(t, k, s.y));
    }
    out.metrics["max_deviation"] = dev;
    out.metrics["closed_form_residual"] =
        fixtures::max_of(nahm_residual(closed, [&](double y) { return bps_derivative(t, k, y); }));
    out.metrics["fd_residual"] = fixtures::max_of(nahm_residual(tr, t));
    if (o.rank == 2) {
      json orders = json::array();
      const auto rows = fixtures::rk4_order_study(k);
      for (std::size_t i = 1; i < rows.size(); ++i) orders.push_back(rows[i].order);
      out.metrics["rk4_orders"] = orders;
      out.tables["rk4"] = refinement_table(rows);
    }
  } else if (o.pole_only) {
    tr = integrate_nahm(pole_state(t, o.y0), nodes);
    double rel = 0;
    for (const auto& s : tr.states)
      rel = std::max(rel, fixtures::state_deviation(s, pole_state(t, s.y)) /
                              triple_norm(pole_triple(t, s.y)));
    // Integrating the remainder from zero must reproduce the pole exactly.
    const auto rem = integrate_nahm_remainder(t, {zero_mat(o.rank), zero_mat(o.rank), zero_mat(o.rank)}, nodes);
    double rmax = 0;
    for (const auto& s : rem.states) rmax = std::max(rmax, fixtures::state_deviation(s, pole_state(t, s.y)));
    out.metrics["max_relative_deviation"] = rel;
    out.metrics["remainder_max"] = rmax;
  } else if (o.shoot) {
    ShootingOptions so;
    so.tolerance = o.tolerance;
    so.max_iterations = o.max_iterations;
    const auto res = solve_pole_to_coulomb(t, coulomb_along_t1(t, *o.shoot), *o.shoot, so);
    tr = res.trajectory;
    double dev = 0;
    for (const auto& s : tr.states) dev = std::max(dev, fixtures::state_deviation(s, bps_state(t, *o.shoot, s.y)));
    out.metrics["shooting"] = {{"parameter", res.parameter},
                               {"mismatch", res.mismatch},
                               {"iterations", res.iterations},
                               {"coulomb_defect", res.coulomb_defect},
                               {"max_deviation_from_bps", dev},
                               {"nodes", tr.size()}};
  } else {
    tr = integrate_nahm(fixtures::random_nahm_state(o.rank, o.y0, o.seed, o.amplitude), nodes);
  }
  out.metrics["max_lax_drift"] = fixtures::max_of(lax_drift(tr));
  out.tables["trajectory"] = trajectory_table(tr);
  if (!o.csv.empty()) {
    std::ostringstream os;
    write_nahm_csv(os, tr);
    write_file(o.csv, os.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// jones

struct JonesOptions {
  std::string pd;
  std::string file;
  std::string knot;
  bool corpus = false;
  std::string group = "SU2";
  std::string rep = "fundamental";
};

inline json link_json(const std::string& name, const PDCode& pd, const KnotLabel& label) {
  json j{{"pd", to_string(pd)},     {"crossings", pd.size()}, {"components", pd.components},
         {"writhe", writhe(pd)}};
  if (!name.empty()) j["name"] = name;
  const auto vertex = jones_polynomial(pd, label, JonesMethod::Vertex);
  j["jones_vertex"] = poly_json(vertex, true);
  j["text"] = vertex.to_string("q", true);
  if (pd.size() <= knot_conventions::kMaxBracketCrossings) {
    const auto bracket = kauffman_bracket(pd);
    const auto jb = jones_polynomial(pd, label, JonesMethod::Bracket);
    j["kauffman_bracket"] = poly_json(bracket, false);
    j["jones_bracket"] = poly_json(jb, true);
    j["methods_agree"] = jb == vertex;
  } else {
    j["kauffman_bracket"] = nullptr;
    j["jones_bracket"] = nullptr;
    j["methods_agree"] = nullptr;
  }
  return j;
}

inline Outcome run_jones(const JonesOptions& o) {
  Outcome out;
  const int sources = int(!o.pd.empty()) + int(!o.file.empty()) + int(!o.knot.empty()) + int(o.corpus);
  if (sources != 1) throw invalid_argument("give exactly one of a PD code, --file, --knot or --corpus");
  const KnotLabel label = parse_knot_label(o.group, o.rep);
  out.config = {{"pd", o.pd}, {"file", o.file}, {"knot", o.knot}, {"corpus", o.corpus},
                {"group", o.group}, {"rep", o.rep}};

  std::vector<std::pair<std::string, std::string>> inputs;
  if (!o.pd.empty()) inputs.emplace_back("", o.pd);
  if (!o.file.empty()) {
    const std::string text = read_file(resolve_input(o.file));
    out.inputs[fs::path(o.file).filename().string()] = checksum(text);
    inputs.emplace_back("", text);
  }
  if (!o.knot.empty()) {
    for (const auto& e : knot_corpus())
      if (e.name == o.knot) inputs.emplace_back(e.name, e.pd);
    if (inputs.empty()) throw invalid_argument("unknown corpus entry '" + o.knot + "'");
  }
  if (o.corpus)
    for (const auto& e : knot_corpus()) inputs.emplace_back(e.name, e.pd);

  json links = json::array();
  bool all_agree = true;
  for (const auto& [name, text] : inputs) {
    const auto j = link_json(name, parse_pd(text), label);
    all_agree = all_agree && j["methods_agree"] == true;
    links.push_back(j);
  }
  if (links.size() == 1) {
    out.metrics = links[0];
  } else {
    out.metrics["links"] = links;
    out.metrics["methods_agree"] = all_agree;
  }
  return out;
}

// ---------------------------------------------------------------------------
// plotdata

struct PlotOptions {
  std::string from;
  std::string table;
};

inline std::string csv_cell(const json& v) {
  if (v.is_null()) return "nan";
  if (v.is_number()) return format_double(v.get<double>());
  return v.dump();
}

/// Tidy CSV of one table of a report.
inline std::string run_plotdata(const PlotOptions& o) {
  if (o.from.empty()) throw invalid_argument("plotdata needs --from REPORT");
  const std::string text = read_file(resolve_input(o.from));
  json report;
  try {
    report = json::parse(text);
  } catch (const json::exception& e) {
    throw io_error("'" + o.from + "' is not a JSON report: " + e.what());
  }
  if (!report.contains("schema") || report["schema"] != kSchema) throw io_error("'" + o.from + "': unknown schema");
  const json tables = report.value("tables", json::object());
  if (tables.empty()) throw invalid_argument("'" + o.from + "' has no tables");
  std::string name = o.table;
  if (name.empty()) {
    if (tables.size() > 1) {
      std::string names;
      for (const auto& [k, v] : tables.items()) names += (names.empty() ? "" : ", ") + k;
      throw invalid_argument("report has several tables (" + names + "); pick one with --table");
    }
    name = tables.begin().key();
  }
  if (!tables.contains(name)) throw invalid_argument("report has no table '" + name + "'");
  const json& tb = tables[name];
  std::ostringstream os;
  bool first = true;
  for (const auto& c : tb["columns"]) {
    os << (first ? "" : ",") << c.get<std::string>();
    first = false;
  }
  os << '\n';
  for (const auto& row : tb["rows"]) {
    first = true;
    for (const auto& v : row) {
      os << (first ? "" : ",") << csv_cell(v);
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// fixtures

struct FixtureOptions {
  std::string dir;
  int n = 4;
  int rank = 2;
  int ny = 12;
  std::uint64_t seed = 1;
  double amplitude = 0.4;
  std::string encoding = "csv";
};

inline Outcome run_fixtures(const FixtureOptions& o) {
  Outcome out;
  std::string dir = o.dir;
  if (dir.empty()) {
    const auto env = fixture_env();
    if (!env) throw invalid_argument(std::string("fixtures needs --dir or ") + kFixtureEnv);
    dir = *env;
  }
  if (o.encoding != "csv" && o.encoding != "binary") throw invalid_argument("--encoding must be csv or binary");
  const FieldEncoding enc = o.encoding == "csv" ? FieldEncoding::Csv : FieldEncoding::Binary;
  out.config = {{"dir", dir},   {"n", o.n},       {"rank", o.rank},           {"ny", o.ny},
                {"seed", o.seed}, {"amplitude", o.amplitude}, {"encoding", o.encoding}};

  json files = json::object();
  auto put = [&](const fs::path& rel, const std::string& bytes) {
    const fs::path p = fs::path(dir) / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw io_error("cannot create '" + p.parent_path().string() + "': " + ec.message());
    write_file(p.string(), bytes);
    files[rel.generic_string()] = checksum(bytes);
  };
  auto field_bytes = [&](const LatticeField& f) {
    std::ostringstream os;
    write_field(os, f, enc);
    return os.str();
  };

  const auto g3 = fixtures::periodic_cube(o.n);
  const auto rnd = fixtures::random_flow_state(g3, o.rank, o.seed, o.amplitude);
  const auto zero = FlowState::zero(g3, o.rank);
  for (const auto& [name, st] : {std::pair<std::string, const FlowState*>{"cs-random", &rnd}, {"cs-zero", &zero}}) {
    put(fs::path(name) / "a.kwgf", field_bytes(st->conn.a));
    put(fs::path(name) / "phi.kwgf", field_bytes(st->conn.phi));
    put(fs::path(name) / "phi0.kwgf", field_bytes(st->phi0));
  }
  const auto gh = fixtures::half_space(o.ny);
  put("nahm-pole/a.kwgf", field_bytes(LatticeField(gh, 1, o.rank)));
  put("nahm-pole/phi.kwgf", field_bytes(embed_nahm_pole(principal_triple(LieAlgebraSpec(o.rank)), gh)));
  for (const auto& e : knot_corpus()) put(fs::path("knots") / (e.name + ".pd"), e.pd + "\n");
  out.metrics["files"] = files;
  out.metrics["count"] = files.size();
  return out;
}

}  // namespace kwg::cli
