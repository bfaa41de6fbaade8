#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "kwgauge/reduced.hpp"

using namespace kwg;

namespace {

PrincipalTriple su2() { return torus_adapted(principal_triple(LieAlgebraSpec(2))); }

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

NahmTrajectory sample(const std::vector<double>& ys, const std::function<NahmState(double)>& f) {
  NahmTrajectory tr;
  for (double y : ys) tr.states.push_back(f(y));
  return tr;
}

double deviation(const NahmState& s, const NahmState& ref) {
  double acc = 0;
  for (int i = 0; i < 3; ++i) acc += (s.x[i].matrix() - ref.x[i].matrix()).squaredNorm();
  return std::sqrt(acc);
}

Mat diag_t(int n = 2) {
  Mat t = zero_mat(n);
  t(0, 0) = cplx(0, 1);
  t(1, 1) = cplx(0, -1);
  return t;
}

Mat random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0, scale);
  Mat m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = cplx(g(rng), g(rng));
  return m;
}

std::shared_ptr<const GridSpec> box(int n) {
  return make_grid({Axis::interval(-1, 1, n), Axis::interval(-1, 1, n), Axis::interval(-1, 1, n)});
}

}  // namespace

// --- residuals -------------------------------------------------------------

TEST(Nahm, ConstantCommutingTripleHasZeroResidual) {
  const Mat c = diag_t();
  auto tr = sample(uniform_nodes(0.5, 2.0, 6), [&](double y) { return NahmState::from(y, {c, 2.0 * c, -c}); });
  EXPECT_LE(max_of(nahm_residual(tr)), 1e-14);  // stencil weights sum to zero up to roundoff
}

TEST(Nahm, PoleSolvesWithAnalyticDerivatives) {
  for (int n : {2, 3, 4}) {
    const auto t = principal_triple(LieAlgebraSpec(n));
    auto tr = sample(graded_nodes(0.01, 10.0, 1.3), [&](double y) { return pole_state(t, y); });
    const auto r = nahm_residual(tr, [&](double y) { return pole_derivative(t, y); });
    EXPECT_LE(max_of(r), 1e-12 * 1e4) << "su(" << n << ")";  // |t/y^2| reaches 1e4 at y = 0.01
    auto coarse = sample(graded_nodes(0.5, 4.0, 1.2), [&](double y) { return pole_state(t, y); });
    EXPECT_LE(max_of(nahm_residual(coarse, [&](double y) { return pole_derivative(t, y); })), 1e-12);
  }
}

TEST(Nahm, BpsProfileSolvesWithAnalyticDerivatives) {
  const auto t = su2();
  for (double k : {0.5, 1.0, 2.0}) {
    auto tr = sample(uniform_nodes(0.1, 5.0, 40), [&](double y) { return bps_state(t, k, y); });
    EXPECT_LE(max_of(nahm_residual(tr, [&](double y) { return bps_derivative(t, k, y); })), 1e-10) << k;
  }
}

TEST(Nahm, BpsDerivativeMatchesDifferenceQuotient) {
  // Independent of the closed-form derivative: a Richardson difference of the profile.
  const auto t = su2();
  for (double k : {0.5, 2.0})
    for (double y : {0.3, 1.0, 2.5}) {
      const double h = 1e-3;
      auto at = [&](double yy) { return bps_state(t, k, yy).matrices(); };
      const Triple p1 = at(y + h), m1 = at(y - h), p2 = at(y + 2 * h), m2 = at(y - 2 * h);
      const Triple d = bps_derivative(t, k, y);
      for (int i = 0; i < 3; ++i) {
        const Mat fd = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12 * h);
        EXPECT_LE((fd - d[i]).norm(), 1e-8 * (1 + d[i].norm()));
      }
    }
}

TEST(Nahm, FiniteDifferenceResidualOnGradedNodes) {
  const auto t = su2();
  auto tr = sample(graded_nodes(0.05, 5.0, 1.02), [&](double y) { return bps_state(t, 1.0, y); });
  EXPECT_LE(max_of(nahm_residual(tr, t)), 1e-6);
  // Without subtracting the pole the stencil sees 1/y and does worse near y0.
  EXPECT_GT(max_of(nahm_residual(tr)), max_of(nahm_residual(tr, t)));
}

TEST(Nahm, ResidualNeedsFourNodes) {
  const auto t = su2();
  auto tr = sample({1.0, 2.0, 3.0}, [&](double y) { return pole_state(t, y); });
  EXPECT_THROW(nahm_residual(tr), Error);
}

// --- integration -----------------------------------------------------------

TEST(Nahm, CommutingDataIsStationary) {
  const Mat c = diag_t();
  const auto nodes = uniform_nodes(0.0, 3.0, 30);
  const auto tr = integrate_nahm(NahmState::from(0.0, {c, -0.5 * c, 3.0 * c}), nodes);
  for (const auto& s : tr.states) EXPECT_EQ(deviation(s, tr.states.front()), 0.0);
}

TEST(Nahm, BpsInitialDataReachesClosedForm) {
  const auto t = su2();
  const auto nodes = uniform_nodes(0.1, 2.0, 1900);  // step 1e-3
  const auto tr = integrate_nahm(bps_state(t, 1.0, 0.1), nodes);
  EXPECT_LE(deviation(tr.states.back(), bps_state(t, 1.0, 2.0)), 1e-6);
}

TEST(Nahm, PoleInitialDataTracksPole) {
  for (int n : {2, 3}) {
    const auto t = principal_triple(LieAlgebraSpec(n));
    const auto nodes = graded_nodes(0.1, 10.0, 1.01);
    const auto tr = integrate_nahm(pole_state(t, 0.1), nodes);
    double worst = 0;
    for (const auto& s : tr.states) worst = std::max(worst, deviation(s, pole_state(t, s.y)));
    EXPECT_LE(worst, 1e-6) << "su(" << n << ")";
  }
}

TEST(Nahm, Rk4OrderAgainstBps) {
  const auto t = su2();
  std::vector<double> err;
  for (int steps : {95, 190, 380}) {
    const auto tr = integrate_nahm(bps_state(t, 1.0, 0.1), uniform_nodes(0.1, 2.0, steps));
    err.push_back(deviation(tr.states.back(), bps_state(t, 1.0, 2.0)));
  }
  for (int i = 0; i + 1 < 3; ++i) {
    const double order = std::log2(err[i] / err[i + 1]);
    EXPECT_GE(order, 3.5);
    EXPECT_LE(order, 4.5);
  }
}

TEST(Nahm, BlowUpIsDetected) {
  // X = t / (y - 1) is a solution with a pole at y = 1.
  const auto t = su2();
  const auto s0 = NahmState::from(0.5, {-2.0 * t.t1.matrix(), -2.0 * t.t2.matrix(), -2.0 * t.t3.matrix()});
  try {
    integrate_nahm(s0, uniform_nodes(0.5, 2.0, 1500));
    FAIL() << "expected a blow-up";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Numerical);
  }
  NahmOptions opt;
  opt.blowup_bound = 10.0;
  EXPECT_THROW(integrate_nahm(s0, uniform_nodes(0.5, 0.95, 450), opt), Error);
}

TEST(Nahm, InitialNodeMustMatchState) {
  const auto t = su2();
  EXPECT_THROW(integrate_nahm(pole_state(t, 0.2), uniform_nodes(0.1, 1.0, 10)), Error);
}

// --- Lax invariant ---------------------------------------------------------

TEST(Lax, ExpandedPolynomialOracle) {
  // Tr A^2 = Tr P^2 - 4i z Tr(P X3) + z^2 (2 Tr PM - 4 Tr X3^2) - 4i z^3 Tr(X3 M) + z^4 Tr M^2.
  std::mt19937_64 rng(3);
  const cplx i(0, 1);
  for (int n : {2, 3}) {
    const LieAlgebraSpec spec(n);
    NahmState s{0.7, {random_element(spec, rng()), random_element(spec, rng()), random_element(spec, rng())}};
    const Mat &x1 = s.x[0].matrix(), &x2 = s.x[1].matrix(), &x3 = s.x[2].matrix();
    const Mat p = x1 + i * x2, m = x1 - i * x2;
    for (cplx z : {cplx(0.3, -1.2), cplx(2, 0), cplx(0, 1)}) {
      const cplx ref = (p * p).trace() - 4.0 * i * z * (p * x3).trace() +
                       z * z * (2.0 * (p * m).trace() - 4.0 * (x3 * x3).trace()) -
                       4.0 * i * z * z * z * (x3 * m).trace() + z * z * z * z * (m * m).trace();
      EXPECT_LE(std::abs(lax_invariant(s, z) - ref), 1e-12 * (1 + std::abs(ref)));
    }
  }
}

TEST(Lax, PoleValueIsZero) {
  // With X_i = t_i / y, Tr P^2 = Tr t1^2 - Tr t2^2 = 0 and the z^2 term cancels.
  for (int n : {2, 3}) {
    const auto t = principal_triple(LieAlgebraSpec(n));
    for (double y : {0.05, 1.0, 7.0})
      for (cplx z : lax_probe_points()) EXPECT_LE(std::abs(lax_invariant(pole_state(t, y), z)), 1e-10);
  }
}

TEST(Lax, BpsValueIsClosedForm) {
  // For X_i = f_i t_i with f2 = f3: Tr A(z)^2 = -(1 + z^2)^2 (f1^2 - f2^2) / 2 = -(1 + z^2)^2 k^2 / 2.
  const auto t = su2();
  for (double k : {0.5, 2.0})
    for (cplx z : lax_probe_points()) {
      const cplx ref = -0.5 * (1.0 + z * z) * (1.0 + z * z) * k * k;
      EXPECT_LE(std::abs(lax_invariant(bps_state(t, k, 0.8), z) - ref), 1e-12);
    }
}

TEST(Lax, ConservedAlongIntegration) {
  const auto t = su2();
  const auto tr = integrate_nahm(bps_state(t, 1.0, 0.1), graded_nodes(0.1, 10.0, 1.005));
  EXPECT_LE(max_of(lax_drift(tr)), 1e-8);

  const Mat c = diag_t();
  const auto flat = integrate_nahm(NahmState::from(0.0, {c, c, c}), uniform_nodes(0.0, 1.0, 10));
  EXPECT_EQ(max_of(lax_drift(flat)), 0.0);

  // Generic su(3) data, small enough to stay clear of the finite-y poles.
  std::mt19937_64 rng(11);
  const LieAlgebraSpec spec(3);
  NahmState s{0.0, {random_element(spec, rng(), 0.2), random_element(spec, rng(), 0.2), random_element(spec, rng(), 0.2)}};
  const auto gen = integrate_nahm(s, uniform_nodes(0.0, 1.0, 400));
  EXPECT_LE(max_of(lax_drift(gen)), 1e-8);
}

// --- shooting --------------------------------------------------------------

TEST(Shooting, SeriesMatchesBpsExpansion) {
  const auto t = su2();
  for (double k : {0.5, 1.0, 2.0}) {
    const double y = 0.01;
    const Triple r = pole_remainder_series(t, -k * k / 6.0, y);
    const Triple exact = bps_state(t, k, y).matrices();
    const Triple pole = pole_triple(t, y);
    for (int i = 0; i < 3; ++i) EXPECT_LE((r[i] + pole[i] - exact[i]).norm(), 1e-8 * std::pow(k, 6));
  }
}

TEST(Shooting, RecoversBpsProfiles) {
  const auto t = su2();
  for (double k : {0.5, 1.0, 2.0}) {
    const auto res = solve_pole_to_coulomb(t, coulomb_along_t1(t, k), k);
    double worst = 0;
    for (const auto& s : res.trajectory.states) worst = std::max(worst, deviation(s, bps_state(t, k, s.y)));
    EXPECT_LE(worst, 1e-5) << "k = " << k;
    EXPECT_LE(std::abs(res.mismatch), 1e-8);
    EXPECT_LE(max_of(nahm_residual(res.trajectory, t)), 1e-6) << "k = " << k;
    EXPECT_LE(max_of(lax_drift(res.trajectory)), 1e-8);
  }
}

TEST(Shooting, LimitAtLargeY) {
  const auto t = su2();
  const auto res = solve_pole_to_coulomb(t, coulomb_along_t1(t, 2.0), 2.0);
  const auto& last = res.trajectory.states.back();
  EXPECT_LE((last.x[0].matrix() - 2.0 * t.t1.matrix()).norm(), 1e-5);
  EXPECT_LE(last.x[1].norm() + last.x[2].norm(), 1e-5);
  EXPECT_LE(res.coulomb_defect, 1e-5);
}

TEST(Shooting, ZeroChargeGivesPurePole) {
  const auto t = su2();
  const auto res = solve_pole_to_coulomb(t, coulomb_along_t1(t, 0.0), 0.0);
  double worst = 0;
  for (const auto& s : res.trajectory.states) worst = std::max(worst, deviation(s, pole_state(t, s.y)));
  EXPECT_LE(worst, 1e-5);
  EXPECT_LE(res.trajectory.states.back().x[0].norm(), 0.1 + 1e-5);  // |t1| / 10
}

TEST(Shooting, Errors) {
  const auto t = su2();
  EXPECT_THROW(solve_pole_to_coulomb(principal_triple(LieAlgebraSpec(3)), coulomb_along_t1(su2(), 1.0), 1.0), Error);
  EXPECT_THROW(solve_pole_to_coulomb(t, coulomb_along_t1(t, 1.0), 2.0), Error);
  // t3 of the unadapted triple is not diagonal in the adapted frame's first slot.
  EXPECT_THROW(coulomb_along_t1(principal_triple(LieAlgebraSpec(2)), 1.0), Error);
  // The mismatch is nearly affine in the shooting parameter, so the secant
  // converges in a step or two; only an unreachable tolerance forces failure.
  ShootingOptions opt;
  opt.max_iterations = 3;
  opt.tolerance = 1e-300;
  try {
    solve_pole_to_coulomb(t, coulomb_along_t1(t, 1.0), 1.0, opt);
    FAIL() << "expected non-convergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Convergence);
  }
}

TEST(Nahm, TrajectoryCsv) {
  const auto t = su2();
  const auto tr = sample(uniform_nodes(1.0, 2.0, 3), [&](double y) { return pole_state(t, y); });
  std::ostringstream os;
  write_nahm_csv(os, tr);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  EXPECT_EQ(header, "y,x1_0,x1_1,x1_2,x2_0,x2_1,x2_2,x3_0,x3_1,x3_2,lax_drift");
  int rows = 0;
  while (std::getline(is, row)) ++rows;
  EXPECT_EQ(rows, 4);
}

// --- Bogomolny -------------------------------------------------------------

TEST(Bogomolny, TrivialSolutions) {
  auto g = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 6));
  LatticeField a(g, 1, 2), phi0(g, 0, 2);
  EXPECT_EQ(max_norm(bogomolny_residual(a, phi0)), 0.0);
  for (std::size_t s = 0; s < phi0.sites(); ++s) phi0.at(s, 0) = 0.7 * diag_t();
  const auto r = bogomolny_residual(a, phi0);
  EXPECT_EQ(r.degree(), 2);
  EXPECT_EQ(max_norm(r), 0.0);
  // Flat abelian A with phi0 in the same Cartan direction.
  auto ab = sample_field(g, 1, 2, [](const std::vector<double>&, int c) -> Mat { return (0.3 + c) * diag_t(); });
  EXPECT_LE(max_norm(bogomolny_residual(ab, phi0)), 1e-14);
}

TEST(Bogomolny, LinearAbelianFixtureMatchesClosedForm) {
  // phi0 = (a.x) T, A = (b x x) T / 2: F_ij = eps_ijk b_k T, d_A phi0 = a T, so the
  // residual is eps_ijk (a + b)_k T. Linear data is differentiated exactly.
  const auto g = box(5);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 4; ++trial) {
    double av[3], bv[3];
    for (int i = 0; i < 3; ++i) av[i] = nd(rng), bv[i] = nd(rng);
    const Mat T = diag_t();
    auto phi0 = sample_field(g, 0, 2, [&](const std::vector<double>& x, int) -> Mat {
      return (av[0] * x[0] + av[1] * x[1] + av[2] * x[2]) * T;
    });
    auto a = sample_field(g, 1, 2, [&](const std::vector<double>& x, int c) -> Mat {
      const int j = (c + 1) % 3, k = (c + 2) % 3;
      return 0.5 * (bv[j] * x[k] - bv[k] * x[j]) * T;
    });
    const auto r = bogomolny_residual(a, phi0);
    for (std::size_t s = 0; s < r.sites(); ++s)
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          const int k = 3 - i - j;
          const double eps = (j == (i + 1) % 3) ? 1.0 : -1.0;
          const Mat expect = eps * (av[k] + bv[k]) * T;
          EXPECT_LE((r.at(s, component_of(3, {i, j})) - expect).norm(), 1e-10);
        }
  }
}

TEST(Bogomolny, VanishingTheoremProxyOnNearSolutions) {
  auto g = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 8));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double eps = 1e-3;
    LatticeField a = smooth_random_field(g, 1, 2, seed, eps);
    LatticeField phi0 = smooth_random_field(g, 0, 2, seed + 100, eps);
    for (std::size_t s = 0; s < phi0.sites(); ++s) phi0.at(s, 0) += 0.5 * diag_t();
    const double r = l2_norm(bogomolny_residual(a, phi0));
    const double dphi = l2_norm(covariant_derivative(a, phi0));
    ASSERT_GT(r, 0);
    EXPECT_LE(dphi / r, 10.0) << "seed " << seed;
  }
}

TEST(Bogomolny, GridChecks) {
  auto g4 = std::make_shared<const GridSpec>(GridSpec::periodic_box(4, 4));
  EXPECT_THROW(bogomolny_residual(LatticeField(g4, 1, 2), LatticeField(g4, 0, 2)), Error);
  auto g3 = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 4));
  EXPECT_THROW(bogomolny_residual(LatticeField(g3, 1, 2), LatticeField(g3, 1, 2)), Error);
}

// --- commuting operators ---------------------------------------------------

TEST(Operators, FlatDerivativesCommute) {
  auto g = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 6));
  OperatorTriple t;
  for (int d = 0; d < 3; ++d) t.ops[d] = {d, LatticeField(g, 0, 2), true};
  const auto r = commuting_operator_residual(t);
  for (double n : r.commutator_norms) EXPECT_EQ(n, 0.0);
  EXPECT_EQ(r.moment_norm, 0.0);
}

TEST(Operators, ConstantDiagonalCoefficients) {
  auto g = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 4));
  OperatorTriple t;
  for (int d = 0; d < 3; ++d) {
    LatticeField c(g, 0, 3);
    Mat m = zero_mat(3);
    m(0, 0) = cplx(d + 1, 0.5);
    m(1, 1) = cplx(-1, d);
    m(2, 2) = cplx(0.25, -2);
    for (std::size_t s = 0; s < c.sites(); ++s) c.at(s, 0) = m;
    t.ops[d] = {-1, std::move(c), false};
  }
  const auto r = commuting_operator_residual(t);
  for (double n : r.commutator_norms) EXPECT_LE(n, 1e-14);
  EXPECT_LE(r.moment_norm, 1e-14);  // normal matrices commute with their adjoints
}

TEST(Operators, AffineCoefficientsMatchProbeSections) {
  // Affine coefficients and probes keep every product quadratic per axis, where the
  // three-point stencils are exact, so direct application must reproduce the
  // zeroth-order fields d_i a_j - d_j a_i + [a_i, a_j] and sum d_i(a_i + a_i^+) + [a_i, a_i^+].
  const auto g = box(5);
  std::mt19937_64 rng(17);
  const int n = 2;
  std::array<Mat, 3> c0, grad[3];
  OperatorTriple t;
  for (int i = 0; i < 3; ++i) {
    c0[i] = random_matrix(rng, n);
    for (int d = 0; d < 3; ++d) grad[i][d] = random_matrix(rng, n);
    t.ops[i].direction = i;
    t.ops[i].uses_derivative = i != 2;  // one purely algebraic operator
    t.ops[i].coeff = sample_field(g, 0, n, [&](const std::vector<double>& x, int) -> Mat {
      return c0[i] + x[0] * grad[i][0] + x[1] * grad[i][1] + x[2] * grad[i][2];
    });
  }
  const auto res = commuting_operator_residual(t);

  for (int p = 0; p < 3; ++p) {
    const int i = kOperatorPairs[p][0], j = kOperatorPairs[p][1];
    for (std::size_t s = 0; s < g->sites(); ++s) {
      Mat expect = commutator(t.ops[i].coeff.at(s, 0), t.ops[j].coeff.at(s, 0));
      if (t.ops[i].uses_derivative) expect += grad[j][t.ops[i].direction];
      if (t.ops[j].uses_derivative) expect -= grad[i][t.ops[j].direction];
      EXPECT_LE((res.commutators[p].at(s, 0) - expect).norm(), 1e-10);
    }
  }
  for (std::size_t s = 0; s < g->sites(); ++s) {
    Mat expect = zero_mat(n);
    for (int i = 0; i < 3; ++i) {
      const Mat a = t.ops[i].coeff.at(s, 0);
      expect += a * a.adjoint() - a.adjoint() * a;
      if (t.ops[i].uses_derivative) expect += grad[i][i] + grad[i][i].adjoint();
    }
    EXPECT_LE((res.moment.at(s, 0) - expect).norm(), 1e-10);
  }

  for (int trial = 0; trial < 3; ++trial) {
    const Mat p0 = random_matrix(rng, n), p1 = random_matrix(rng, n), p2 = random_matrix(rng, n),
              p3 = random_matrix(rng, n);
    auto psi = sample_field(g, 0, n, [&](const std::vector<double>& x, int) -> Mat {
      return p0 + x[0] * p1 + x[1] * p2 + x[2] * p3;
    });
    for (int p = 0; p < 3; ++p) {
      const auto direct = commutator_on(t, kOperatorPairs[p][0], kOperatorPairs[p][1], psi);
      const auto viafield = detail::left_multiply(res.commutators[p], psi);
      EXPECT_LE(max_norm(direct - viafield), 1e-8);
    }
    EXPECT_LE(max_norm(moment_on(t, psi) - detail::left_multiply(res.moment, psi)), 1e-8);
  }
}

TEST(Operators, ValidationRejectsMalformedTriples) {
  auto g = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 4));
  OperatorTriple t;
  for (int d = 0; d < 3; ++d) t.ops[d] = {0, LatticeField(g, 0, 2), true};
  EXPECT_THROW(commuting_operator_residual(t), Error);
  t.ops[1].direction = 5;
  EXPECT_THROW(commuting_operator_residual(t), Error);
  OperatorTriple u;
  for (int d = 0; d < 3; ++d) u.ops[d] = {d, LatticeField(g, 1, 2), true};
  EXPECT_THROW(commuting_operator_residual(u), Error);
}

TEST(Operators, ExperimentalT1Instantiation) {
  auto g = std::make_shared<const GridSpec>(GridSpec::periodic_box(3, 6));
  const auto a = smooth_random_field(g, 1, 2, 41, 0.4);
  const auto phi = smooth_random_field(g, 1, 2, 42, 0.4);
  const auto res = commuting_operator_residual(experimental_t1_operators(a, phi));

  LatticeField complex_a = a;
  complex_a.axpy(cplx(0, 1), phi);
  const auto f = curvature(complex_a);
  for (int p = 0; p < 3; ++p) {
    const int comp = component_of(3, {kOperatorPairs[p][0], kOperatorPairs[p][1]});
    for (std::size_t s = 0; s < g->sites(); ++s)
      EXPECT_LE((res.commutators[p].at(s, 0) - f.at(s, comp)).norm(), 1e-12);
  }
  const auto mu = moment_map(a, phi);
  for (std::size_t s = 0; s < g->sites(); ++s)
    EXPECT_LE((res.moment.at(s, 0) - cplx(0, 2) * mu.at(s, 0)).norm(), 1e-12);
}
