#pragma once

// Dimensional reductions of the four-dimensional equations.
//
//   Nahm:        dX1/dy + [X2, X3] = 0 and cyclic permutations
//   Bogomolny:   F + *d_A phi0 = 0 on a 3-grid
//   Operators:   [D_i, D_j] = 0,  sum_i [D_i, D_i^dagger] = 0
//
// Nahm solutions near y = 0 are written X_i = t_i / y + R_i(y) with a regular
// remainder, so the singular part never enters the integrator.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kwgauge/kwflow.hpp"

namespace kwg {

// ---------------------------------------------------------------------------
// Nahm's equations

using Triple = std::array<Mat, 3>;

struct NahmState {
  double y = 1.0;
  std::array<LieElement, 3> x;

  int n() const { return x[0].n(); }
  Triple matrices() const { return {x[0].matrix(), x[1].matrix(), x[2].matrix()}; }
  static NahmState from(double y, const Triple& m) {
    return {y, {LieElement::unchecked(m[0]), LieElement::unchecked(m[1]), LieElement::unchecked(m[2])}};
  }
};

struct NahmTrajectory {
  std::vector<NahmState> states;

  std::size_t size() const { return states.size(); }
  std::vector<double> ys() const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.y);
    return out;
  }
  void validate() const {
    for (std::size_t k = 1; k < states.size(); ++k)
      if (!(states[k].y > states[k - 1].y)) throw invalid_argument("Nahm trajectory: y must increase strictly");
    for (std::size_t k = 1; k < states.size(); ++k)
      if (states[k].n() != states[0].n()) throw invalid_argument("Nahm trajectory: mixed algebra ranks");
  }
};

// Geometric nodes y0 * q^j ending exactly at y_max.
inline std::vector<double> graded_nodes(double y0, double y_max, double ratio) {
  Axis a = Axis::graded(y0, y_max, ratio);
  a.validate();
  return a.nodes();
}

inline std::vector<double> uniform_nodes(double y0, double y1, int intervals) {
  if (intervals < 1 || !(y1 > y0)) throw invalid_argument("uniform_nodes: need y1 > y0 and intervals >= 1");
  std::vector<double> out(intervals + 1);
  for (int k = 0; k <= intervals; ++k) out[k] = y0 + (y1 - y0) * k / intervals;
  out.back() = y1;
  return out;
}

/// The right-hand side -[X_{i+1}, X_{i+2}].
inline Triple nahm_rhs(const Triple& x) {
  return {-commutator(x[1], x[2]), -commutator(x[2], x[0]), -commutator(x[0], x[1])};
}

inline Triple nahm_defect(const Triple& x, const Triple& dx) {
  const Triple f = nahm_rhs(x);
  return {dx[0] - f[0], dx[1] - f[1], dx[2] - f[2]};
}

inline double triple_norm(const Triple& x) {
  return std::sqrt(x[0].squaredNorm() + x[1].squaredNorm() + x[2].squaredNorm());
}

inline Triple pole_triple(const PrincipalTriple& t, double y) {
  return {t.t1.matrix() / y, t.t2.matrix() / y, t.t3.matrix() / y};
}

inline NahmState pole_state(const PrincipalTriple& t, double y) { return NahmState::from(y, pole_triple(t, y)); }

inline Triple pole_derivative(const PrincipalTriple& t, double y) {
  const double s = -1.0 / (y * y);
  return {s * t.t1.matrix(), s * t.t2.matrix(), s * t.t3.matrix()};
}

/// X1 = k coth(ky) t1, X2 = k csch(ky) t2, X3 = k csch(ky) t3. k = 0 is the pole.
inline NahmState bps_state(const PrincipalTriple& t, double k, double y) {
  if (!(y > 0)) throw invalid_argument("bps_state: y must be positive");
  if (k == 0.0) return pole_state(t, y);
  const double f = k / std::tanh(k * y), g = k / std::sinh(k * y);
  return NahmState::from(y, {f * t.t1.matrix(), g * t.t2.matrix(), g * t.t3.matrix()});
}

inline Triple bps_derivative(const PrincipalTriple& t, double k, double y) {
  if (k == 0.0) return pole_derivative(t, y);
  const double c = 1.0 / std::sinh(k * y), ct = 1.0 / std::tanh(k * y);
  const double df = -k * k * c * c, dg = -k * k * c * ct;
  return {df * t.t1.matrix(), dg * t.t2.matrix(), dg * t.t3.matrix()};
}

namespace detail {

// Weights of the derivative at z of the Lagrange interpolant through x.
inline std::vector<double> derivative_weights(const std::vector<double>& x, double z) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      double term = 1.0 / (x[j] - x[m]);
      for (std::size_t l = 0; l < n; ++l)
        if (l != j && l != m) term *= (z - x[l]) / (x[j] - x[l]);
      w[j] += term;
    }
  return w;
}

inline Triple triple_scaled_sum(const Triple& a, double s, const Triple& b) {
  return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
}

}  // namespace detail

/// Per-node residual norms sqrt(sum_i |dX_i/dy + [X_{i+1}, X_{i+2}]|^2), with
/// dX/dy from a five-point finite difference on the (possibly graded) nodes.
/// When `pole` is given, t_i / y is differentiated analytically and only the
/// remainder goes through the stencil.
inline std::vector<double> nahm_residual(const NahmTrajectory& traj,
                                         const std::optional<PrincipalTriple>& pole = std::nullopt) {
  if (traj.size() < 4) throw invalid_argument("nahm_residual: need at least 4 nodes");
  traj.validate();
  const int n = static_cast<int>(traj.size());
  const int width = std::min(n, 5);
  const std::vector<double> y = traj.ys();
  auto remainder = [&](int k) {
    Triple x = traj.states[k].matrices();
    if (pole) {
      const Triple p = pole_triple(*pole, y[k]);
      for (int i = 0; i < 3; ++i) x[i] -= p[i];
    }
    return x;
  };
  std::vector<Triple> rem(n);
  for (int k = 0; k < n; ++k) rem[k] = remainder(k);

  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    const int lo = std::clamp(k - width / 2, 0, n - width);
    std::vector<double> xs(y.begin() + lo, y.begin() + lo + width);
    const auto w = detail::derivative_weights(xs, y[k]);
    const int r = traj.states[k].n();
    Triple dx{zero_mat(r), zero_mat(r), zero_mat(r)};
    for (int j = 0; j < width; ++j) dx = detail::triple_scaled_sum(dx, w[j], rem[lo + j]);
    if (pole) dx = detail::triple_scaled_sum(dx, 1.0, pole_derivative(*pole, y[k]));
    out[k] = triple_norm(nahm_defect(traj.states[k].matrices(), dx));
  }
  return out;
}

/// Residual norms with derivatives supplied by a callback, e.g. a closed form.
inline std::vector<double> nahm_residual(const NahmTrajectory& traj, const std::function<Triple(double)>& derivative) {
  if (traj.size() < 4) throw invalid_argument("nahm_residual: need at least 4 nodes");
  traj.validate();
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& s : traj.states) out.push_back(triple_norm(nahm_defect(s.matrices(), derivative(s.y))));
  return out;
}

struct NahmOptions {
  double blowup_bound = 1e6;  // abort once any |X_i| exceeds this
  int substeps = 1;           // RK4 steps per grid interval
};

namespace detail {

using TripleRhs = std::function<Triple(double, const Triple&)>;

inline Triple rk4_step(const TripleRhs& f, double y, const Triple& x, double h) {
  const Triple k1 = f(y, x);
  const Triple k2 = f(y + 0.5 * h, triple_scaled_sum(x, 0.5 * h, k1));
  const Triple k3 = f(y + 0.5 * h, triple_scaled_sum(x, 0.5 * h, k2));
  const Triple k4 = f(y + h, triple_scaled_sum(x, h, k3));
  Triple out = x;
  for (int i = 0; i < 3; ++i) out[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Integrates u along the nodes; `to_state` maps (y, u) to the reported X.
inline NahmTrajectory integrate(const TripleRhs& f, Triple u, const std::vector<double>& nodes,
                                const NahmOptions& opt, const std::function<Triple(double, const Triple&)>& to_state) {
  if (nodes.size() < 2) throw invalid_argument("integrate_nahm: need at least 2 nodes");
  if (opt.substeps < 1 || !(opt.blowup_bound > 0)) throw invalid_argument("integrate_nahm: bad options");
  for (std::size_t k = 1; k < nodes.size(); ++k)
    if (!(nodes[k] > nodes[k - 1])) throw invalid_argument("integrate_nahm: nodes must increase strictly");
  NahmTrajectory traj;
  traj.states.reserve(nodes.size());
  auto record = [&](double y, const Triple& v) {
    const Triple x = to_state(y, v);
    for (int i = 0; i < 3; ++i) {
      const double nrm = x[i].norm();
      if (!std::isfinite(nrm) || nrm > opt.blowup_bound)
        throw numerical_fault("Nahm integration blew up at y = " + format_double(y) + ": |X" + std::to_string(i + 1) +
                              "| = " + format_double(nrm) + " exceeds " + format_double(opt.blowup_bound));
    }
    traj.states.push_back(NahmState::from(y, x));
  };
  record(nodes[0], u);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double y0 = nodes[k - 1], h = (nodes[k] - y0) / opt.substeps;
    for (int s = 0; s < opt.substeps; ++s) u = rk4_step(f, y0 + s * h, u, h);
    record(nodes[k], u);
  }
  return traj;
}

}  // namespace detail

/// RK4 integration of Nahm's equations from `initial` across `nodes`.
inline NahmTrajectory integrate_nahm(const NahmState& initial, const std::vector<double>& nodes,
                                     const NahmOptions& opt = {}) {
  if (nodes.empty() || std::abs(initial.y - nodes.front()) > 1e-12 * std::max(1.0, std::abs(nodes.front())))
    throw invalid_argument("integrate_nahm: initial y must equal the first node");
  return detail::integrate([](double, const Triple& x) { return nahm_rhs(x); }, initial.matrices(), nodes, opt,
                           [](double, const Triple& x) { return x; });
}

/// Integrates the remainder R = X - t/y, which satisfies
///   dR_i/dy = -([t_j, R_k] + [R_j, t_k]) / y - [R_j, R_k],
/// and reports the full X at each node.
inline NahmTrajectory integrate_nahm_remainder(const PrincipalTriple& t, const Triple& r0,
                                               const std::vector<double>& nodes, const NahmOptions& opt = {}) {
  const Triple tm{t.t1.matrix(), t.t2.matrix(), t.t3.matrix()};
  auto rhs = [&](double y, const Triple& r) {
    Triple out;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      out[i] = -(commutator(tm[j], r[k]) + commutator(r[j], tm[k])) / y - commutator(r[j], r[k]);
    }
    return out;
  };
  auto full = [&](double y, const Triple& r) {
    return Triple{r[0] + tm[0] / y, r[1] + tm[1] / y, r[2] + tm[2] / y};
  };
  return detail::integrate(rhs, r0, nodes, opt, full);
}

/// Tr A(zeta)^2 with A(zeta) = (X1 + i X2) - 2 i X3 zeta + (X1 - i X2) zeta^2.
inline cplx lax_invariant(const NahmState& s, cplx zeta) {
  const cplx i(0, 1);
  const Mat& x1 = s.x[0].matrix();
  const Mat& x2 = s.x[1].matrix();
  const Mat& x3 = s.x[2].matrix();
  const Mat a = (x1 + i * x2) - (2.0 * i * zeta) * x3 + (zeta * zeta) * (x1 - i * x2);
  return (a * a).trace();
}

inline const std::array<cplx, 4>& lax_probe_points() {
  static const std::array<cplx, 4> z{cplx(0, 0), cplx(1, 0), cplx(0, 1), cplx(-1, 0)};
  return z;
}

/// max over the probe points of |TrA^2(y) - TrA^2(y0)| / (1 + |TrA^2(y0)|), per node.
inline std::vector<double> lax_drift(const NahmTrajectory& traj) {
  std::vector<double> out;
  if (traj.states.empty()) return out;
  out.reserve(traj.size());
  std::array<cplx, 4> ref;
  for (int z = 0; z < 4; ++z) ref[z] = lax_invariant(traj.states.front(), lax_probe_points()[z]);
  for (const auto& s : traj.states) {
    double d = 0.0;
    for (int z = 0; z < 4; ++z)
      d = std::max(d, std::abs(lax_invariant(s, lax_probe_points()[z]) - ref[z]) / (1.0 + std::abs(ref[z])));
    out.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pole-to-Coulomb boundary value problem

struct CoulombData {
  std::array<LieElement, 3> c;

  void validate(double tol = 1e-12) const {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j)
        if (commutator(c[i].matrix(), c[j].matrix()).norm() > tol)
          throw invalid_argument("CoulombData: c_i must commute");
      const Mat& m = c[i].matrix();
      if ((m - Mat(m.diagonal().asDiagonal())).norm() > tol)
        throw invalid_argument("CoulombData: c_i must be diagonal");
    }
  }
};

struct ShootingOptions {
  double y0 = 0.01;
  double y_max = 10.0;
  double ratio = 1.01;
  int max_iterations = 200;
  double tolerance = 1e-8;  // on the y_max mismatch
  double damping = 1.0;     // fraction of the secant step taken
  NahmOptions nahm;
};

struct ShootingResult {
  NahmTrajectory trajectory;
  double parameter = 0.0;  // a in R_2 = R_3 = a y + ..., R_1 = -2 a y + ...
  double mismatch = 0.0;
  int iterations = 0;
  double coulomb_defect = 0.0;  // |X(y_max) - c|, shrinks as y_max grows
};

/// Regular remainder of the SU(2)-symmetric family X_i = f_i(y) t_i through
/// order y^3. With f_2 = f_3 the pole leaves one free coefficient a:
///   f_1 = 1/y - 2a y - 4/5 a^2 y^3,   f_2 = f_3 = 1/y + a y + 7/10 a^2 y^3.
inline Triple pole_remainder_series(const PrincipalTriple& t, double a, double y) {
  const double r1 = -2.0 * a * y - 0.8 * a * a * y * y * y;
  const double r2 = a * y + 0.7 * a * a * y * y * y;
  return {r1 * t.t1.matrix(), r2 * t.t2.matrix(), r2 * t.t3.matrix()};
}

/// Shoots from the Nahm pole at y0 towards X -> (c1, 0, 0) with c1 = k t1.
///
/// The y_max mismatch is Tr A(0)^2 - Tr c1^2. The Lax invariant is constant
/// along exact solutions and equals Tr c1^2 on the Coulomb limit, so matching
/// it avoids the coth(k y_max) - 1 bias of comparing X1 directly.
inline ShootingResult solve_pole_to_coulomb(const PrincipalTriple& t, const CoulombData& c, double k,
                                            const ShootingOptions& opt = {}) {
  if (t.n() != 2) throw invalid_argument("solve_pole_to_coulomb: only SU(2) is supported");
  if (!(k >= 0) || !std::isfinite(k)) throw invalid_argument("solve_pole_to_coulomb: k must be finite and >= 0");
  c.validate();
  if (c.c[1].norm() > 1e-12 || c.c[2].norm() > 1e-12 || (c.c[0].matrix() - k * t.t1.matrix()).norm() > 1e-12)
    throw invalid_argument("solve_pole_to_coulomb: expected c = (k t1, 0, 0)");
  const double target = (c.c[0].matrix() * c.c[0].matrix()).trace().real();
  if (opt.max_iterations < 1 || !(opt.damping > 0 && opt.damping <= 1))
    throw invalid_argument("solve_pole_to_coulomb: bad shooting options");

  const auto nodes = graded_nodes(opt.y0, opt.y_max, opt.ratio);
  auto shoot = [&](double a, NahmTrajectory* keep) -> double {
    NahmTrajectory tr = integrate_nahm_remainder(t, pole_remainder_series(t, a, opt.y0), nodes, opt.nahm);
    const double m = lax_invariant(tr.states.back(), 0.0).real() - target;
    if (keep) *keep = std::move(tr);
    return m;
  };
  // Safe evaluation: a blow-up counts as overshoot and pulls a back.
  auto eval = [&](double a, NahmTrajectory* keep, bool& ok) {
    try {
      ok = true;
      return shoot(a, keep);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numerical) throw;
      ok = false;
      return 0.0;
    }
  };

  ShootingResult res;
  double a_prev = 0.0, a = -k * k / 8.0 - 1e-3;
  bool ok = true;
  double m_prev = eval(a_prev, nullptr, ok);
  if (!ok) throw numerical_fault("solve_pole_to_coulomb: the pure pole failed to integrate");
  double m = eval(a, &res.trajectory, ok);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    res.iterations = it;
    if (!ok) {
      a = 0.5 * (a + a_prev);
      m = eval(a, &res.trajectory, ok);
      continue;
    }
    if (std::abs(m) <= opt.tolerance) break;
    const double denom = m - m_prev;
    if (denom == 0.0) break;
    const double next = a - opt.damping * m * (a - a_prev) / denom;
    a_prev = a;
    m_prev = m;
    a = next;
    m = eval(a, &res.trajectory, ok);
  }
  if (!ok || !(std::abs(m) <= opt.tolerance))
    throw convergence_failure("solve_pole_to_coulomb: mismatch " + format_double(m) + " after " +
                              std::to_string(res.iterations) + " iterations");
  res.parameter = a;
  res.mismatch = m;
  const auto& last = res.trajectory.states.back();
  res.coulomb_defect = std::sqrt((last.x[0].matrix() - c.c[0].matrix()).squaredNorm() +
                                 last.x[1].matrix().squaredNorm() + last.x[2].matrix().squaredNorm());
  return res;
}

/// The cyclic relabelling (t3, t1, t2), still principal, whose first element
/// is diagonal for principal_triple().
inline PrincipalTriple torus_adapted(const PrincipalTriple& t) { return {t.t3, t.t1, t.t2}; }

/// Coulomb data (k t1, 0, 0); t1 must be diagonal.
inline CoulombData coulomb_along_t1(const PrincipalTriple& t, double k) {
  CoulombData c{{LieElement::unchecked(k * t.t1.matrix()), LieElement::zero(t.n()), LieElement::zero(t.n())}};
  c.validate();
  return c;
}

/// CSV: y, su(N) coordinates of X1, X2, X3, then the Lax drift.
inline void write_nahm_csv(std::ostream& os, const NahmTrajectory& traj) {
  if (traj.states.empty()) return;
  const int dimg = traj.states[0].n() * traj.states[0].n() - 1;
  os << "y";
  for (int i = 1; i <= 3; ++i)
    for (int a = 0; a < dimg; ++a) os << ",x" << i << '_' << a;
  os << ",lax_drift\n";
  const auto drift = lax_drift(traj);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    os << format_double(s.y);
    for (int i = 0; i < 3; ++i)
      for (double v : basis_coefficients(s.x[i].matrix())) os << ',' << format_double(v);
    os << ',' << format_double(drift[k]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Commuting first-order operators D_i = u_i d/dx^{d_i} + a_i on a 3-grid, acting
// on sections by left multiplication. A probe is an N x N field whose columns
// are N sections. Adjoints use the flat L2 pairing, so d^dagger = -d.

struct FirstOrderOperator {
  int direction = -1;
  LatticeField coeff;  // complex matrix-valued 0-form
  bool uses_derivative = false;
};

struct OperatorTriple {
  std::array<FirstOrderOperator, 3> ops;

  void validate() const {
    for (const auto& op : ops) {
      if (op.coeff.degree() != 0) throw invalid_argument("OperatorTriple: coefficients must be 0-forms");
      op.coeff.check_compatible(ops[0].coeff);
      if (op.uses_derivative && (op.direction < 0 || op.direction >= op.coeff.dim()))
        throw invalid_argument("OperatorTriple: derivative direction out of range");
    }
    if (ops[0].coeff.dim() != 3) throw invalid_argument("OperatorTriple: expected a 3-grid");
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (ops[i].uses_derivative && ops[j].uses_derivative && ops[i].direction == ops[j].direction)
          throw invalid_argument("OperatorTriple: derivative directions must be distinct");
  }
};

namespace detail {

inline LatticeField left_multiply(const LatticeField& a, const LatticeField& psi) {
  LatticeField out = LatticeField::zeros_like(psi, 0);
  for (std::size_t s = 0; s < psi.sites(); ++s) out.at(s, 0) = a.at(s, 0) * psi.at(s, 0);
  return out;
}

inline LatticeField adjoint_field(const LatticeField& a) {
  LatticeField out = LatticeField::zeros_like(a, 0);
  for (std::size_t s = 0; s < a.sites(); ++s) out.at(s, 0) = a.at(s, 0).adjoint();
  return out;
}

inline double frobenius_l2(const LatticeField& f) {
  const auto& g = f.grid();
  double acc = 0.0;
  for (std::size_t s = 0; s < f.sites(); ++s) {
    double site = 0.0;
    for (int c = 0; c < f.components(); ++c) site += f.at(s, c).squaredNorm();
    acc += g.site_weight(s) * site;
  }
  return std::sqrt(acc);
}

}  // namespace detail

inline LatticeField apply_operator(const FirstOrderOperator& op, const LatticeField& psi) {
  LatticeField out = detail::left_multiply(op.coeff, psi);
  if (op.uses_derivative) out += partial(psi, op.direction);
  return out;
}

inline LatticeField apply_adjoint(const FirstOrderOperator& op, const LatticeField& psi) {
  LatticeField out = detail::left_multiply(detail::adjoint_field(op.coeff), psi);
  if (op.uses_derivative) out -= partial(psi, op.direction);
  return out;
}

/// [D_i, D_j] psi by direct application.
inline LatticeField commutator_on(const OperatorTriple& t, int i, int j, const LatticeField& psi) {
  return apply_operator(t.ops[i], apply_operator(t.ops[j], psi)) - apply_operator(t.ops[j], apply_operator(t.ops[i], psi));
}

/// sum_i [D_i, D_i^dagger] psi by direct application.
inline LatticeField moment_on(const OperatorTriple& t, const LatticeField& psi) {
  LatticeField out = LatticeField::zeros_like(psi, 0);
  for (const auto& op : t.ops) {
    out += apply_operator(op, apply_adjoint(op, psi));
    out -= apply_adjoint(op, apply_operator(op, psi));
  }
  return out;
}

struct OperatorResidual {
  // Zeroth-order fields of [D_1,D_2], [D_1,D_3], [D_2,D_3] and of the moment sum.
  std::array<LatticeField, 3> commutators;
  LatticeField moment;
  std::array<double, 3> commutator_norms{};
  double moment_norm = 0.0;
};

inline constexpr std::array<std::array<int, 2>, 3> kOperatorPairs{{{0, 1}, {0, 2}, {1, 2}}};

/// Applies every commutator and the moment sum to the constant probe basis.
/// Derivatives of a constant section vanish, so the result is exactly the
/// zeroth-order coefficient field, e.g. d_i a_j - d_j a_i + [a_i, a_j].
inline OperatorResidual commuting_operator_residual(const OperatorTriple& t) {
  t.validate();
  const LatticeField& ref = t.ops[0].coeff;
  LatticeField id = LatticeField::zeros_like(ref, 0);
  for (std::size_t s = 0; s < id.sites(); ++s) id.at(s, 0).setIdentity();
  OperatorResidual res;
  for (int p = 0; p < 3; ++p) {
    res.commutators[p] = commutator_on(t, kOperatorPairs[p][0], kOperatorPairs[p][1], id);
    res.commutator_norms[p] = detail::frobenius_l2(res.commutators[p]);
  }
  res.moment = moment_on(t, id);
  res.moment_norm = detail::frobenius_l2(res.moment);
  return res;
}

/// Experimental t = 1 instantiation: D_i = d_i + A_i + i phi_i. Then the
/// commutators are the curvature of A + i phi and the moment sum is
/// 2 i d_A * phi. Other values of t are not provided.
inline OperatorTriple experimental_t1_operators(const LatticeField& a, const LatticeField& phi) {
  require_one_form(a, "experimental_t1_operators");
  a.check_compatible(phi);
  if (a.dim() != 3) throw invalid_argument("experimental_t1_operators: expected a 3-grid");
  OperatorTriple t;
  const cplx i(0, 1);
  for (int d = 0; d < 3; ++d) {
    LatticeField c(a.grid_ptr(), 0, a.rank());
    for (std::size_t s = 0; s < c.sites(); ++s) c.at(s, 0) = a.at(s, d) + i * phi.at(s, d);
    t.ops[d] = {d, std::move(c), true};
  }
  return t;
}

}  // namespace kwg
