#include <gtest/gtest.h>

#include <cmath>

#include "kwgauge/kwflow.hpp"

using namespace kwg;

namespace {

std::shared_ptr<const GridSpec> cube(int n) { return std::make_shared<const GridSpec>(GridSpec::periodic_box(3, n)); }

std::shared_ptr<const GridSpec> torus4(int n) { return std::make_shared<const GridSpec>(GridSpec::periodic_box(4, n)); }

std::shared_ptr<const GridSpec> half_space(int ny = 12) {
  return make_grid({Axis::graded(0.5, 4.0, std::pow(8.0, 1.0 / (ny - 1)) + 1e-12), Axis::periodic(1.0, 4),
                    Axis::periodic(1.0, 4), Axis::periodic(1.0, 4)});
}

FourConfig random_config(std::shared_ptr<const GridSpec> g, std::uint64_t seed, int rank = 2) {
  return {smooth_random_field(g, 1, rank, seed, 0.5), smooth_random_field(g, 1, rank, seed + 1, 0.5)};
}

FlowState small_state(std::shared_ptr<const GridSpec> g, std::uint64_t seed, double amp = 0.3) {
  return {ComplexConnection(smooth_random_field(g, 1, 2, seed, amp), smooth_random_field(g, 1, 2, seed + 1, amp)),
          smooth_random_field(g, 0, 2, seed + 2, amp)};
}

Mat diag_t() {
  Mat t = zero_mat(2);
  t(0, 0) = cplx(0, 1);
  t(1, 1) = cplx(0, -1);
  return t;
}

}  // namespace

TEST(KWFlow, TFromAlpha) {
  const auto t1 = t_from_alpha(M_PI / 2);
  EXPECT_EQ(t1.t(), 1.0);
  EXPECT_NEAR(t_from_alpha(2 * M_PI / 3).t(), std::sqrt(3.0), 1e-14);
  const auto inf = t_from_alpha(M_PI);
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_EQ(inf.p, 1.0);
  EXPECT_NEAR(t_from_alpha(3 * M_PI / 2).t(), -1.0, 1e-14);
  EXPECT_THROW(t_from_alpha(0.0), Error);
  EXPECT_THROW(t_from_alpha(2 * M_PI), Error);
  EXPECT_THROW(KWParams(0.0, 0.0), Error);
}

TEST(KWFlow, TrivialAndRealSectorResiduals) {
  auto g = torus4(4);
  const FourConfig zero(LatticeField(g, 1, 2), LatticeField(g, 1, 2));
  EXPECT_EQ(kw_residual(zero, KWParams::from_t(0.7)).total_norm(), 0.0);

  const auto a = smooth_random_field(g, 1, 2, 3);
  const auto split = sd_asd_project(curvature(a));
  for (const auto& t : {KWParams::from_t(0.0), KWParams::from_t(0.5), KWParams::from_t(3.0), KWParams::infinity()}) {
    const auto r = kw_residual(FourConfig(a, LatticeField(g, 1, 2)), t);
    EXPECT_EQ(r.moment_norm(), 0.0);
    if (!t.is_infinite()) EXPECT_LE(max_norm(r.r_plus - split.plus), 1e-14);
    else EXPECT_EQ(r.plus_norm(), 0.0);
    if (!t.is_zero()) EXPECT_LE(max_norm(r.r_minus - split.minus), 1e-14);
    else EXPECT_EQ(r.minus_norm(), 0.0);
  }
}

TEST(KWFlow, ResidualSelfDualityTags) {
  auto g = torus4(4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = kw_residual(random_config(g, 10 * seed), KWParams::from_t(0.3 + seed));
    EXPECT_LE(max_norm(hodge_star(r.r_plus) - r.r_plus), 1e-12 * (1 + max_norm(r.r_plus)));
    EXPECT_LE(max_norm(hodge_star(r.r_minus) + r.r_minus), 1e-12 * (1 + max_norm(r.r_minus)));
  }
}

TEST(KWFlow, ProjectiveScalingInvariance) {
  auto g = torus4(4);
  const auto cfg = random_config(g, 5);
  for (double t : {0.0, 0.5, 2.0}) {
    const auto r0 = kw_residual(cfg, KWParams(t, 1.0));
    for (double lambda : {-3.0, 0.25, 7.0}) {
      const auto r1 = kw_residual(cfg, KWParams(lambda * t, lambda));
      EXPECT_LE(max_norm(r1.r_plus - r0.r_plus), 1e-12 * (1 + max_norm(r0.r_plus)));
      EXPECT_LE(max_norm(r1.r_minus - r0.r_minus), 1e-12 * (1 + max_norm(r0.r_minus)));
    }
  }
  const auto ri = kw_residual(cfg, KWParams::infinity());
  const auto rs = kw_residual(cfg, KWParams(-5.0, 0.0));
  EXPECT_LE(max_norm(ri.r_plus - rs.r_plus), 1e-12 * (1 + max_norm(ri.r_plus)));
  EXPECT_LE(max_norm(ri.r_minus - rs.r_minus), 1e-12 * (1 + max_norm(ri.r_minus)));
}

TEST(KWFlow, NahmPoleSolvesTheEquationsAtTEqualsOne) {
  for (int n : {2, 3}) {
    const auto triple = principal_triple(LieAlgebraSpec(n));
    auto g = half_space();
    const auto r = kw_residual(zero_jet(g, 1, n), nahm_pole_jet(triple, g), KWParams::from_t(1.0));
    EXPECT_LE(r.total_norm(), 1e-10) << "N=" << n;
  }
}

// Pointwise closed form of the residual of the pole at general t: with
// X = -phi^phi and Y = d phi, X_{ij} = -eps_ijk t_k / y^2 and Y_{yi} = -t_i / y^2.
TEST(KWFlow, NahmPoleResidualMatchesClosedFormForAllT) {
  const auto triple = principal_triple(LieAlgebraSpec(3));
  auto g = half_space();
  for (const auto& t : {KWParams::from_t(0.0), KWParams::from_t(0.5), KWParams::from_t(2.0), KWParams::infinity()}) {
    const auto r = kw_residual(zero_jet(g, 1, 3), nahm_pole_jet(triple, g), t);
    double cp, cm;  // coefficients of t_i / (2 y^2) in the (y, i) components
    if (t.is_zero()) {
      cp = -1.0;
      cm = -1.0;
    } else if (t.is_infinite()) {
      cp = 1.0;
      cm = 1.0;
    } else {
      cp = t.t() - 1.0;
      cm = 1.0 - 1.0 / t.t();
    }
    double worst = 0;
    for (std::size_t s = 0; s < g->sites(); ++s) {
      const double y = g->coord(s, 0);
      for (int i = 1; i <= 3; ++i) {
        const int c = component_of(4, {0, i});
        const Mat ti = triple[i - 1].matrix() / (2 * y * y);
        worst = std::max(worst, (r.r_plus.at(s, c) - cp * ti).norm());
        worst = std::max(worst, (r.r_minus.at(s, c) - cm * ti).norm());
      }
    }
    EXPECT_LE(worst, 1e-12) << "t=" << t.t();
    EXPECT_LE(r.moment_norm(), 1e-12);
    EXPECT_GT(r.total_norm(), 1e-3);
  }
}

TEST(KWFlow, NahmPoleFiniteDifferenceResidualConverges) {
  const auto triple = principal_triple(LieAlgebraSpec(2));
  std::vector<double> res;
  for (int ny : {12, 24, 48}) {
    auto g = half_space(ny);
    const auto phi = embed_nahm_pole(triple, g);
    res.push_back(kw_residual(FourConfig(LatticeField(g, 1, 2), phi), KWParams::from_t(1.0)).total_norm());
  }
  EXPECT_GE(res[0] / res[1], 3.5);
  EXPECT_GE(res[1] / res[2], 3.5);
}

TEST(KWFlow, InvolutionAtZeroAndInfinity) {
  auto g = torus4(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cfg = random_config(g, 100 + seed);
    EXPECT_LE(involution_check(cfg, KWParams::from_t(0.0)).discrepancy, 1e-12);
    EXPECT_LE(involution_check(cfg, KWParams::infinity()).discrepancy, 1e-12);
  }
  EXPECT_THROW(involution_check(random_config(g, 1), KWParams::from_t(1.0)), Error);
}

TEST(KWFlow, FlowStepFixesCriticalPoint) {
  auto g = cube(4);
  const auto st = FlowState::zero(g, 2);
  const auto out = flow_step(st, MorseParams(1.0), 0.1);
  EXPECT_EQ(max_norm(out.conn.a) + max_norm(out.conn.phi) + max_norm(out.phi0), 0.0);
  EXPECT_THROW(flow_step(st, MorseParams(1.0), 0.0), Error);
}

TEST(KWFlow, FlowDecreasesMorseFunctionMonotonically) {
  auto g = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 4, 1.0));
  const MorseParams p(1.2);
  FlowState st = small_state(g, 7, 0.05);
  const double ds = suggested_step(*g, p);
  double h = extended_h(st, p);
  for (int k = 0; k < 100; ++k) {
    st = flow_step(st, p, ds);
    const double hn = extended_h(st, p);
    EXPECT_LE(hn, h + 1e-12);
    h = hn;
  }
}

// Abelian fixture on the stable manifold of the phi0 sector: phi = c grad f,
// phi0 = kappa c f with -Laplacian f = kappa^2 f for the discrete stencils.
// Then A stays zero and mu = div phi decays exactly like exp(-kappa s).
TEST(KWFlow, FlowDrivesMomentMapToZero) {
  const int n = 8;
  auto g = cube(n);
  const double h = 2 * M_PI / n;
  const double kappa = std::sin(h) / h;
  const Mat t = diag_t();
  const double c = 0.3;
  const auto phi = sample_field(g, 1, 2, [&](const std::vector<double>& x, int i) -> Mat {
    return i == 0 ? Mat(-c * kappa * std::sin(x[0]) * t) : zero_mat(2);
  });
  const auto phi0 = sample_field(g, 0, 2, [&](const std::vector<double>& x, int) -> Mat {
    return kappa * c * std::cos(x[0]) * t;
  });
  FlowState st(ComplexConnection(LatticeField(g, 1, 2), phi), phi0);
  const MorseParams p(0.8);
  const double mu0 = l2_norm(moment_map(st.conn.a, st.conn.phi));
  ASSERT_GT(mu0, 0.1);
  const double ds = 0.05;
  const int steps = 200;
  for (int k = 0; k < steps; ++k) st = flow_step(st, p, ds);
  const double mu = l2_norm(moment_map(st.conn.a, st.conn.phi));
  EXPECT_NEAR(mu / mu0, std::exp(-kappa * ds * steps), 1e-7);
  EXPECT_LE(mu, 1e-3 * mu0);
  EXPECT_EQ(max_norm(st.conn.a), 0.0);
}

TEST(KWFlow, RealFlowVelocityIsMinusStarCurvature) {
  const int n = 6;
  auto g = cube(n);
  const auto a = smooth_random_field(g, 1, 2, 9, 0.5);
  const auto v = real_flow_velocity(a);
  const auto f = curvature(a);
  const int c01 = component_of(3, {0, 1}), c02 = component_of(3, {0, 2}), c12 = component_of(3, {1, 2});
  for (std::size_t s = 0; s < a.sites(); ++s) {
    EXPECT_LE((v.at(s, 0) + f.at(s, c12)).norm(), 1e-13);
    EXPECT_LE((v.at(s, 1) - f.at(s, c02)).norm(), 1e-13);
    EXPECT_LE((v.at(s, 2) + f.at(s, c01)).norm(), 1e-13);
  }
  // Same direction from the complex flow in the real sector, with the level
  // chosen so that the cos(alpha) factor cancels.
  const double alpha = M_PI / 3;
  const FlowState st(ComplexConnection(a, LatticeField(g, 1, 2)), LatticeField(g, 0, 2));
  const auto vel = flow_velocity(st, MorseParams(alpha, 2 * M_PI / std::cos(alpha)));
  EXPECT_LE(max_norm(vel.conn.a - v), 1e-12);
  EXPECT_EQ(max_norm(vel.phi0), 0.0);
}

TEST(KWFlow, StationaryFlatTrajectoryIsAnInstanton) {
  auto g = cube(4);
  Mat d = diag_t();
  const auto a = sample_field(g, 1, 2, [&](const std::vector<double>&, int mu) { return (0.3 * mu + 0.1) * d; });
  std::vector<LatticeField> tr(5, a);
  const auto rep = real_flow_instanton_check(tr, 0.1);
  EXPECT_LE(rep.fplus_norm, 1e-13);
  EXPECT_THROW(real_flow_instanton_check(std::vector<LatticeField>(3, a), 0.1), Error);
}

TEST(KWFlow, SlicewiseInstantonCheckMatchesAssembledConnection) {
  auto g = cube(5);
  std::vector<LatticeField> tr;
  for (int k = 0; k < 6; ++k) tr.push_back(smooth_random_field(g, 1, 2, 60 + k, 0.4));
  const auto a = real_flow_instanton_check(tr, 0.07);
  const auto b = real_flow_instanton_check_assembled(tr, 0.07);
  EXPECT_NEAR(a.fplus_norm, b.fplus_norm, 1e-12 * b.fplus_norm);
  EXPECT_NEAR(a.fminus_norm, b.fminus_norm, 1e-12 * b.fminus_norm);
  EXPECT_NEAR(a.fplus_max, b.fplus_max, 1e-12 * b.fplus_max);
}

// The s-stencil error constant involves the discrete curl cubed, which
// only settles once low modes are resolved; 12 points per period suffice.
TEST(KWFlow, RealFlowInstantonResidualConvergesAtSecondOrder) {
  const double window = 0.24;
  std::vector<double> fp;
  for (int n : {12, 24, 48}) {
    auto g = cube(n);
    const int steps = n / 2;
    const double ds = window / steps;
    std::vector<LatticeField> tr{smooth_random_field(g, 1, 2, 5, 0.3)};
    for (int k = 0; k < steps; ++k) tr.push_back(real_flow_step(tr.back(), ds));
    fp.push_back(real_flow_instanton_check(tr, ds).fplus_norm);
  }
  EXPECT_GE(fp[0] / fp[1], 3.5);
  EXPECT_GE(fp[1] / fp[2], 3.5);
}

TEST(KWFlow, TrivialTrajectoryHasZeroKWResidual) {
  auto g = cube(4);
  std::vector<FlowState> tr(4, FlowState::zero(g, 2));
  EXPECT_EQ(flow_kw_equivalence_check(tr, 0.1, MorseParams(1.0, 2 * M_PI)).total, 0.0);
}

TEST(KWFlow, ExtendedFlowSolvesKWEquationsInTheLimit) {
  auto g = cube(5);
  for (double alpha : {M_PI / 2, 2.2}) {
    const MorseParams p(alpha, 2 * M_PI);
    std::vector<double> tot;
    for (double ds : {0.02, 0.01, 0.005}) {
      std::vector<FlowState> tr{small_state(g, 1)};
      const int steps = static_cast<int>(std::lround(0.08 / ds));
      for (int k = 0; k < steps; ++k) tr.push_back(flow_step(tr.back(), p, ds));
      const auto rep = flow_kw_equivalence_check(tr, ds, p);
      if (alpha == M_PI / 2) {
        EXPECT_EQ(rep.t.t(), 1.0);
      }
      tot.push_back(rep.total);
    }
    EXPECT_GE(tot[0] / tot[1], 3.5) << alpha;
    EXPECT_GE(tot[1] / tot[2], 3.5) << alpha;
  }
}

TEST(KWFlow, InstantonNumberOfFlatAndFluxConfigurations) {
  auto g = torus4(4);
  EXPECT_EQ(instanton_number(FourConfig(LatticeField(g, 1, 2), LatticeField(g, 1, 2))), 0.0);

  const double l[4] = {1.0, 1.5, 2.0, 0.75};
  auto box = make_grid({Axis::interval(0, l[0], 5), Axis::interval(0, l[1], 5), Axis::interval(0, l[2], 5),
                        Axis::interval(0, l[3], 5)});
  const double f01 = 2 * M_PI / (l[0] * l[1]), f23 = 2 * M_PI / (l[2] * l[3]);
  const Mat t = diag_t();
  const auto a = sample_field(box, 1, 2, [&](const std::vector<double>& x, int mu) -> Mat {
    if (mu == 1) return f01 * x[0] * t;
    if (mu == 3) return f23 * x[2] * t;
    return zero_mat(2);
  });
  const FourConfig cfg(a, LatticeField(box, 1, 2));
  EXPECT_THROW(instanton_number(cfg), Error);
  const double closed_form = 2.0 * (t * t).trace().real() * f01 * f23 * l[0] * l[1] * l[2] * l[3] / (8 * M_PI * M_PI);
  EXPECT_NEAR(closed_form, -2.0, 1e-14);
  const double k = instanton_number(cfg, {true});
  EXPECT_NEAR(k, closed_form, 1e-6);

  // g = g0 exp(theta T) with quadratic theta and exact derivatives.
  const Mat g0 = GaugeTransform::exp_lie(random_element(LieAlgebraSpec(2), 3).matrix());
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
  const GaugeTransform gt(box, gs, dgs);
  const auto gp = apply_gauge(a, LatticeField(box, 1, 2), gt);
  EXPECT_NEAR(instanton_number(FourConfig(gp.a, gp.phi), {true}), k, 1e-9);
}

TEST(KWFlow, CategorificationExactAbelianFixture) {
  auto box = make_grid({Axis::interval(-1, 1, 6), Axis::interval(0, 2, 7), Axis::interval(-0.5, 1, 5)});
  const Mat t = diag_t();
  const double av[3] = {0.7, -0.4, 1.1};
  // phi0 = (a.x) T and A = (1/2)(b x x) T with b = -a, so *F = b T = -d phi0.
  const auto phi0 = sample_field(box, 0, 2, [&](const std::vector<double>& x, int) -> Mat {
    return (av[0] * x[0] + av[1] * x[1] + av[2] * x[2]) * t;
  });
  const auto a = sample_field(box, 1, 2, [&](const std::vector<double>& x, int i) -> Mat {
    const double b[3] = {-av[0], -av[1], -av[2]};
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    return 0.5 * (b[j] * x[k] - b[k] * x[j]) * t;
  });
  const auto rep = categorification_identity_check(a, phi0);
  EXPECT_LE(rep.bogomolny, 1e-12);
  EXPECT_LE(rep.lifted_fplus, 1e-10);
  EXPECT_LE(rep.lifted_selfdual, 1e-10);

  auto g = cube(4);
  const auto cst = sample_field(g, 0, 2, [&](const std::vector<double>&, int) { return t; });
  const auto rep0 = categorification_identity_check(LatticeField(g, 1, 2), cst);
  EXPECT_EQ(rep0.bogomolny, 0.0);
  EXPECT_EQ(rep0.lifted_fplus, 0.0);
}

TEST(KWFlow, CategorificationIdentityOnRandomFixtures) {
  auto g = cube(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = smooth_random_field(g, 1, 2, 200 + seed, 0.6);
    const auto phi0 = smooth_random_field(g, 0, 2, 300 + seed, 0.6);
    const auto rep = categorification_identity_check(a, phi0, 0.5 + 0.1 * seed, 4 + static_cast<int>(seed % 3));
    EXPECT_LE(rep.identity_gap, 1e-10 * (1 + rep.bogomolny));
    EXPECT_NEAR(std::sqrt(2.0) * rep.lifted_fplus, rep.lifted_selfdual, 1e-10 * (1 + rep.bogomolny));
  }
}

TEST(KWFlow, VanishingProxyOnNearSolutions) {
  auto g = cube(6);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = smooth_random_field(g, 1, 2, 400 + seed, 1e-3);
    const auto phi0 = smooth_random_field(g, 0, 2, 500 + seed, 1e-3);
    const auto rep = categorification_identity_check(a, phi0);
    EXPECT_LE(rep.vanishing_constant, 10.0);
    EXPECT_GE(rep.vanishing_constant, 0.5);
  }
}
