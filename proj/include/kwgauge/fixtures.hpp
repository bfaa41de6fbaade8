#pragma once

// Named fixtures and convergence studies shared by the command line tool and
// the acceptance suite.

#include <cmath>
#include <limits>
#include <random>

#include "kwgauge/reduced.hpp"

namespace kwg::fixtures {

inline std::shared_ptr<const GridSpec> periodic_cube(int n, double extent = 2.0 * M_PI) {
  return std::make_shared<const GridSpec>(GridSpec::periodic_box(3, n, extent));
}

inline std::shared_ptr<const GridSpec> periodic_torus4(int n) {
  return std::make_shared<const GridSpec>(GridSpec::periodic_box(4, n));
}

/// [0.5, 4] x T^3 with geometric spacing in y and unit transverse periods.
inline std::shared_ptr<const GridSpec> half_space(int ny = 12, int transverse = 4) {
  if (ny < 4) throw invalid_argument("half_space: need at least 4 nodes in y");
  return make_grid({Axis::graded(0.5, 4.0, std::pow(8.0, 1.0 / (ny - 1)) + 1e-12), Axis::periodic(1.0, transverse),
                    Axis::periodic(1.0, transverse), Axis::periodic(1.0, transverse)});
}

/// Diagonal Cartan generator diag(i, -i, 0, ...).
inline Mat cartan_generator(int rank = 2) {
  Mat t = zero_mat(rank);
  t(0, 0) = cplx(0, 1);
  t(1, 1) = cplx(0, -1);
  return t;
}

inline FlowState random_flow_state(std::shared_ptr<const GridSpec> g, int rank, std::uint64_t seed,
                                   double amplitude) {
  return {ComplexConnection(smooth_random_field(g, 1, rank, seed, amplitude),
                            smooth_random_field(g, 1, rank, seed + 1, amplitude)),
          smooth_random_field(g, 0, rank, seed + 2, amplitude)};
}

/// Independent Gaussian Lie-algebra entries at every site and component.
inline FlowState random_direction(std::shared_ptr<const GridSpec> g, int rank, std::uint64_t seed) {
  FlowState v = FlowState::zero(g, rank);
  std::mt19937_64 rng(seed);
  auto fill = [&](LatticeField& f) {
    for (std::size_t k = 0; k < f.entries(); ++k) f.entry(k) = random_element(LieAlgebraSpec(rank), rng()).matrix();
  };
  fill(v.conn.a);
  fill(v.conn.phi);
  fill(v.phi0);
  return v;
}

inline FourConfig random_four_config(std::shared_ptr<const GridSpec> g, int rank, std::uint64_t seed,
                                     double amplitude = 0.5) {
  return {smooth_random_field(g, 1, rank, seed, amplitude), smooth_random_field(g, 1, rank, seed + 1, amplitude)};
}

// ---------------------------------------------------------------------------
// Gradient check

struct GradientCheck {
  int directions = 0;
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
};

/// Compares <grad h, v> with central differences of h along random v.
inline GradientCheck gradient_check(const FlowState& st, const MorseParams& p, int directions, std::uint64_t seed,
                                    double eps = 1e-4) {
  if (directions < 1 || !(eps > 0)) throw invalid_argument("gradient_check: need directions >= 1 and eps > 0");
  const auto grad = gradient_h(st, p);
  const auto g = st.conn.a.grid_ptr();
  const int rank = st.conn.rank();
  GradientCheck out;
  out.directions = directions;
  for (int k = 0; k < directions; ++k) {
    const auto v = random_direction(g, rank, seed + static_cast<std::uint64_t>(k));
    FlowState plus = st, minus = st;
    plus.axpy(eps, v);
    minus.axpy(-eps, v);
    const double fd = (extended_h(plus, p) - extended_h(minus, p)) / (2 * eps);
    const double an = inner(grad, v);
    const double err = std::abs(an - fd);
    const double scale = std::max(std::abs(an), std::abs(fd));
    out.max_absolute_error = std::max(out.max_absolute_error, err);
    out.max_relative_error = std::max(out.max_relative_error, scale > 0 ? err / scale : 0.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Refinement studies

struct RefinementRow {
  double spacing = 0.0;
  double residual = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();  // previous residual / this one
  double order = std::numeric_limits<double>::quiet_NaN();  // log2 of the ratio
};

inline void fill_orders(std::vector<RefinementRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    rows[k].ratio = rows[k - 1].residual / rows[k].residual;
    rows[k].order = std::log(rows[k].ratio) / std::log(rows[k - 1].spacing / rows[k].spacing);
  }
}

/// Residual of the embedded pole on the half-space grid, with exact or
/// finite-difference derivatives.
inline KWResidual nahm_pole_residual(int rank, const KWParams& t, int ny, bool analytic) {
  const auto triple = principal_triple(LieAlgebraSpec(rank));
  const auto g = half_space(ny);
  if (analytic) return kw_residual(zero_jet(g, 1, rank), nahm_pole_jet(triple, g), t);
  return kw_residual(FourConfig(LatticeField(g, 1, rank), embed_nahm_pole(triple, g)), t);
}

/// Finite-difference residual of the pole; the spacing column is the ratio of
/// neighbouring y-nodes minus one, which halves with the node count.
inline std::vector<RefinementRow> nahm_pole_refinement(int rank, const KWParams& t, const std::vector<int>& levels) {
  std::vector<RefinementRow> rows;
  for (int ny : levels) {
    RefinementRow r;
    r.spacing = std::pow(8.0, 1.0 / (ny - 1)) - 1.0;
    r.residual = nahm_pole_residual(rank, t, ny, false).total_norm();
    rows.push_back(r);
  }
  fill_orders(rows);
  return rows;
}

/// ||F+|| of a real-sector flow trajectory assembled into a 4-connection on
/// T^3 x [0, window], refining the grid and the step together.
inline std::vector<RefinementRow> real_flow_refinement(const std::vector<int>& levels, double window = 0.24,
                                                       std::uint64_t seed = 5, double amplitude = 0.3) {
  std::vector<RefinementRow> rows;
  for (int n : levels) {
    if (n < 4 || n % 2) throw invalid_argument("real_flow_refinement: levels must be even and >= 4");
    const auto g = periodic_cube(n);
    const int steps = n / 2;
    const double ds = window / steps;
    std::vector<LatticeField> tr{smooth_random_field(g, 1, 2, seed, amplitude)};
    for (int k = 0; k < steps; ++k) tr.push_back(real_flow_step(tr.back(), ds));
    RefinementRow r;
    r.spacing = 2.0 * M_PI / n;
    r.residual = real_flow_instanton_check(tr, ds).fplus_norm;
    rows.push_back(r);
  }
  fill_orders(rows);
  return rows;
}

// ---------------------------------------------------------------------------
// Extended flow runs

struct FlowRun {
  double ds = 0.0;
  std::vector<double> h;
  std::vector<double> mu;
  bool monotone = true;
  FlowKWReport kw;
};

inline FlowRun extended_flow_run(std::shared_ptr<const GridSpec> g, const MorseParams& p, int steps, double ds,
                                 std::uint64_t seed, double amplitude) {
  if (steps < 3) throw invalid_argument("extended_flow_run: need at least 3 steps");
  FlowRun run;
  run.ds = ds > 0 ? ds : suggested_step(*g, p);
  std::vector<FlowState> tr{random_flow_state(g, 2, seed, amplitude)};
  auto record = [&](const FlowState& st) {
    run.h.push_back(extended_h(st, p));
    run.mu.push_back(l2_norm(moment_map(st.conn.a, st.conn.phi)));
  };
  record(tr.back());
  for (int k = 0; k < steps; ++k) {
    tr.push_back(flow_step(tr.back(), p, run.ds));
    record(tr.back());
    if (run.h.back() > run.h[run.h.size() - 2] + 1e-12 * (1 + std::abs(run.h.back()))) run.monotone = false;
  }
  run.kw = flow_kw_equivalence_check(tr, run.ds, p);
  return run;
}

// ---------------------------------------------------------------------------
// Constant-flux four-torus

struct FluxFixture {
  FourConfig config;
  double closed_form = 0.0;  // (1/8 pi^2) int Tr F^F for the sampled fluxes
  GaugeTransform gauge;      // smooth transformation with exact derivatives
};

/// A = f01 x0 T dx1 + f23 x2 T dx3 on a box with sides l; one flux quantum per
/// 2-plane, so the closed form is 2 Tr(T^2) / (8 pi^2) (2 pi)^2 = -2.
inline FluxFixture constant_flux_fixture(int points = 5, std::uint64_t seed = 3) {
  const double l[4] = {1.0, 1.5, 2.0, 0.75};
  auto box = make_grid({Axis::interval(0, l[0], points), Axis::interval(0, l[1], points),
                        Axis::interval(0, l[2], points), Axis::interval(0, l[3], points)});
  const double f01 = 2 * M_PI / (l[0] * l[1]), f23 = 2 * M_PI / (l[2] * l[3]);
  const Mat t = cartan_generator();
  const auto a = sample_field(box, 1, 2, [&](const std::vector<double>& x, int mu) -> Mat {
    if (mu == 1) return f01 * x[0] * t;
    if (mu == 3) return f23 * x[2] * t;
    return zero_mat(2);
  });
  const double closed = 2.0 * (t * t).trace().real() * f01 * f23 * l[0] * l[1] * l[2] * l[3] / (8 * M_PI * M_PI);

  // g = g0 exp(theta T) with a quadratic theta.
  const Mat g0 = GaugeTransform::exp_lie(random_element(LieAlgebraSpec(2), seed).matrix());
  auto theta = [](const std::vector<double>& x) { return 0.4 * x[0] * x[1] - 0.3 * x[2] * x[2] + 0.2 * x[3]; };
  auto dtheta = [](const std::vector<double>& x, int mu) {
    switch (mu) {
      case 0: return 0.4 * x[1];
      case 1: return 0.4 * x[0];
      case 2: return -0.6 * x[2];
      default: return 0.2;
    }
  };
  std::vector<Mat> gs;
  std::vector<std::vector<Mat>> dgs(4);
  std::vector<double> x(4);
  for (std::size_t s = 0; s < box->sites(); ++s) {
    for (int d = 0; d < 4; ++d) x[d] = box->coord(s, d);
    const Mat u = g0 * GaugeTransform::exp_lie(theta(x) * t);
    gs.push_back(u);
    for (int d = 0; d < 4; ++d) dgs[d].push_back(dtheta(x, d) * u * t);
  }
  return {FourConfig(a, LatticeField(box, 1, 2)), closed, GaugeTransform(box, gs, dgs)};
}

// ---------------------------------------------------------------------------
// Nahm data

/// su(2) triple with t1 diagonal, the frame used for Coulomb data.
inline PrincipalTriple su2_adapted() { return torus_adapted(principal_triple(LieAlgebraSpec(2))); }

inline double state_deviation(const NahmState& s, const NahmState& ref) {
  double acc = 0;
  for (int i = 0; i < 3; ++i) acc += (s.x[i].matrix() - ref.x[i].matrix()).squaredNorm();
  return std::sqrt(acc);
}

inline double max_of(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, x);
  return m;
}

/// Error at y = 2 of RK4 runs from BPS data at y = 0.1 with 95, 190, 380 steps,
/// and the observed orders between consecutive runs.
inline std::vector<RefinementRow> rk4_order_study(double k = 1.0) {
  const auto t = su2_adapted();
  std::vector<RefinementRow> rows;
  for (int steps : {95, 190, 380}) {
    const auto tr = integrate_nahm(bps_state(t, k, 0.1), uniform_nodes(0.1, 2.0, steps));
    RefinementRow r;
    r.spacing = 1.9 / steps;
    r.residual = state_deviation(tr.states.back(), bps_state(t, k, 2.0));
    rows.push_back(r);
  }
  fill_orders(rows);
  return rows;
}

/// Generic su(N) initial data for conservation runs.
inline NahmState random_nahm_state(int rank, double y, std::uint64_t seed, double amplitude = 0.2) {
  Triple x;
  for (int i = 0; i < 3; ++i) x[i] = random_element(LieAlgebraSpec(rank), seed + i, amplitude).matrix();
  return NahmState::from(y, x);
}

}  // namespace kwg::fixtures
