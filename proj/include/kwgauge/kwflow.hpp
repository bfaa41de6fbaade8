#pragma once

// Four-dimensional KW equations, the flows whose solutions they describe, and
// the checks relating the two.
//
//   (F - phi^phi)+ = t (d_A phi)+
//   (F - phi^phi)- = -t^-1 (d_A phi)-
//   d_A * phi = 0
//
// t lives on RP^1 and is stored as a pair (p, q) with t = p / q.

#include <cmath>
#include <functional>
#include <limits>

#include "kwgauge/functionals.hpp"

namespace kwg {

struct KWParams {
  double p = 1.0;
  double q = 1.0;

  KWParams() = default;
  KWParams(double p_, double q_) : p(p_), q(q_) { validate(); }

  static KWParams from_t(double t) { return {t, 1.0}; }
  static KWParams infinity() { return {1.0, 0.0}; }

  void validate() const {
    if (!std::isfinite(p) || !std::isfinite(q)) throw invalid_argument("KWParams: non-finite coordinates");
    if (p == 0.0 && q == 0.0) throw invalid_argument("KWParams: (p, q) = (0, 0) is not a point of RP^1");
  }
  bool is_zero() const { return p == 0.0; }
  bool is_infinite() const { return q == 0.0; }
  double t() const { return is_infinite() ? std::numeric_limits<double>::infinity() : p / q; }
};

/// t = (1 - cos a) / sin a, projectively. a = pi gives infinity.
inline KWParams t_from_alpha(double alpha) {
  if (!std::isfinite(alpha)) throw invalid_argument("t_from_alpha: non-finite angle");
  const double r = std::remainder(alpha, 2.0 * M_PI);
  if (std::abs(r) < 1e-12) throw invalid_argument("t_from_alpha: alpha = 0 mod 2pi has no image");
  // Two equivalent forms of tan(alpha/2), chosen to avoid cancellation.
  const double c = std::cos(alpha), sn = std::sin(alpha);
  double p = c >= 0 ? sn : 1.0 - c;
  double q = c >= 0 ? 1.0 + c : sn;
  if (std::abs(q) <= 8 * std::numeric_limits<double>::epsilon() * std::abs(p)) q = 0.0;
  if (q != 0.0) {
    p /= q;
    q = 1.0;
  } else {
    p = 1.0;
  }
  return {p, q};
}

struct FourConfig {
  LatticeField a;
  LatticeField phi;

  FourConfig() = default;
  FourConfig(LatticeField a_, LatticeField phi_) : a(std::move(a_)), phi(std::move(phi_)) { validate(); }

  void validate() const {
    if (a.dim() != 4) throw invalid_argument("FourConfig: expected a 4-grid");
    require_one_form(a, "FourConfig");
    a.check_compatible(phi);
  }
  const GridSpec& grid() const { return a.grid(); }
};

struct KWResidual {
  LatticeField r_plus;
  LatticeField r_minus;
  LatticeField r_moment;

  double plus_norm() const { return l2_norm(r_plus); }
  double minus_norm() const { return l2_norm(r_minus); }
  double moment_norm() const { return l2_norm(r_moment); }
  double total_norm() const { return std::hypot(plus_norm(), minus_norm(), moment_norm()); }
};

/// Residuals from jets, so analytic derivatives can be supplied. At finite
/// nonzero t the first line is divided by q and the second by p, giving the
/// equations above; at t = 0 or infinity the multiplied forms are used.
inline KWResidual kw_residual(const Jet& a, const Jet& phi, const KWParams& params) {
  params.validate();
  FourConfig(a.value, phi.value).validate();
  const LatticeField x = curvature(a) - wedge(phi.value, phi.value);
  const LatticeField y = covariant_derivative(a.value, phi);
  const auto xs = sd_asd_project(x);
  const auto ys = sd_asd_project(y);
  const double np = params.q != 0.0 ? params.q : params.p;
  const double nm = params.p != 0.0 ? params.p : params.q;
  LatticeField rp = (params.q / np) * xs.plus - (params.p / np) * ys.plus;
  LatticeField rm = (params.p / nm) * xs.minus + (params.q / nm) * ys.minus;

  Jet star_phi{hodge_star(phi.value), {}};
  for (const auto& d : phi.partials) star_phi.partials.push_back(hodge_star(d));
  LatticeField mom = hodge_star(covariant_derivative(a.value, star_phi));
  return {std::move(rp), std::move(rm), std::move(mom)};
}

inline KWResidual kw_residual(const FourConfig& cfg, const KWParams& params) {
  return kw_residual(fd_jet(cfg.a), fd_jet(cfg.phi), params);
}

struct InvolutionReport {
  double discrepancy = 0.0;
  double norm_original = 0.0;
  double norm_reflected = 0.0;
};

/// Compares residual norms of (A, phi) and (A, -phi); only meaningful at t = 0 or infinity.
inline InvolutionReport involution_check(const FourConfig& cfg, const KWParams& params) {
  params.validate();
  if (!params.is_zero() && !params.is_infinite())
    throw invalid_argument("involution_check: phi -> -phi is a symmetry only at t = 0 or infinity");
  const auto r0 = kw_residual(cfg, params);
  const auto r1 = kw_residual(FourConfig(cfg.a, -1.0 * cfg.phi), params);
  InvolutionReport rep;
  rep.norm_original = r0.total_norm();
  rep.norm_reflected = r1.total_norm();
  rep.discrepancy = std::max({std::abs(r0.plus_norm() - r1.plus_norm()), std::abs(r0.minus_norm() - r1.minus_norm()),
                              std::abs(r0.moment_norm() - r1.moment_norm())});
  return rep;
}

// ---------------------------------------------------------------------------
// Gradient flow

/// Conservative step heuristic ds = c h_min^2 / L, where L bounds the
/// first-order linearized flow operator in units of 1/h.
inline double suggested_step(const GridSpec& grid, const MorseParams& params, double c = 0.2) {
  const double h = grid.min_spacing();
  const double bound = std::sqrt(3.0) * std::max(1.0, std::abs(params.level_normalization) / (2.0 * M_PI));
  return c * h * h / bound;
}

inline FlowState flow_velocity(const FlowState& st, const MorseParams& p) {
  FlowState v = gradient_h(st, p);
  v.conn.a *= -1.0;
  v.conn.phi *= -1.0;
  v.phi0 *= -1.0;
  return v;
}

/// One explicit RK4 step of dPhi/ds = -grad h. Throws a numerical fault if h
/// increases by more than roundoff.
inline FlowState flow_step(const FlowState& st, const MorseParams& p, double ds) {
  if (!(ds > 0.0) || !std::isfinite(ds)) throw invalid_argument("flow_step: ds must be positive");
  const FlowState k1 = flow_velocity(st, p);
  FlowState s2 = st;
  s2.axpy(0.5 * ds, k1);
  const FlowState k2 = flow_velocity(s2, p);
  FlowState s3 = st;
  s3.axpy(0.5 * ds, k2);
  const FlowState k3 = flow_velocity(s3, p);
  FlowState s4 = st;
  s4.axpy(ds, k3);
  const FlowState k4 = flow_velocity(s4, p);
  FlowState out = st;
  out.axpy(ds / 6.0, k1);
  out.axpy(ds / 3.0, k2);
  out.axpy(ds / 3.0, k3);
  out.axpy(ds / 6.0, k4);
  const double h0 = extended_h(st, p), h1 = extended_h(out, p);
  if (!std::isfinite(h1)) throw numerical_fault("flow_step: non-finite state");
  if (h1 > h0 + 1e-12 * (1.0 + std::abs(h0))) throw numerical_fault("flow_step: step rejected, h increased");
  return out;
}

/// Real-sector flow dA/ds = -*F: the flow of h = -2 pi CS(A).
inline LatticeField real_flow_velocity(const LatticeField& a) { return -1.0 * gradient_cs_real(a, -2.0 * M_PI); }

inline LatticeField real_flow_step(const LatticeField& a, double ds) {
  if (!(ds > 0.0)) throw invalid_argument("real_flow_step: ds must be positive");
  const auto k1 = real_flow_velocity(a);
  LatticeField t = a;
  t.axpy(0.5 * ds, k1);
  const auto k2 = real_flow_velocity(t);
  t = a;
  t.axpy(0.5 * ds, k2);
  const auto k3 = real_flow_velocity(t);
  t = a;
  t.axpy(ds, k3);
  const auto k4 = real_flow_velocity(t);
  LatticeField out = a;
  out.axpy(ds / 6.0, k1);
  out.axpy(ds / 3.0, k2);
  out.axpy(ds / 3.0, k3);
  out.axpy(ds / 6.0, k4);
  return out;
}

// ---------------------------------------------------------------------------
// Assembling four-dimensional configurations from three-dimensional data

/// Grid with `first` as axis 0 followed by the axes of `g`.
inline std::shared_ptr<const GridSpec> prepend_axis(const Axis& first, const GridSpec& g) {
  std::vector<Axis> axes{first};
  axes.insert(axes.end(), g.axes().begin(), g.axes().end());
  return make_grid(std::move(axes));
}

/// Stacks 3d slices along a new axis 0: component 0 of each 1-form is taken
/// from `normal`, components 1..3 from `slice`.
inline LatticeField stack_one_forms(std::shared_ptr<const GridSpec> g4, const std::vector<const LatticeField*>& slices,
                                    const std::vector<const LatticeField*>& normal, int rank) {
  LatticeField out(g4, 1, rank);
  const std::size_t per = slices.front()->sites();
  for (std::size_t k = 0; k < slices.size(); ++k)
    for (std::size_t s = 0; s < per; ++s) {
      const std::size_t site = k * per + s;
      if (!normal.empty() && normal[k]) out.at(site, 0) = normal[k]->at(s, 0);
      for (int i = 0; i < 3; ++i) out.at(site, i + 1) = slices[k]->at(s, i);
    }
  return out;
}

inline void require_trajectory(std::size_t n, double ds) {
  if (n < 4) throw invalid_argument("trajectory needs at least 4 samples");
  if (!(ds > 0.0)) throw invalid_argument("trajectory spacing must be positive");
}

struct InstantonCheckReport {
  double fplus_norm = 0.0;
  double fminus_norm = 0.0;
  double fplus_max = 0.0;
  std::size_t samples = 0;
};

/// Assembles A_s = 0, A_i = A(s) on T^3 x [0, (n-1) ds] and measures F+.
/// With A_s = 0 the curvature splits as F_{si} = d_s A_i plus the slice
/// curvature, so the 4d norms are accumulated one slice at a time using the
/// s-axis stencils; memory stays at the size of a few slices.
inline InstantonCheckReport real_flow_instanton_check(const std::vector<LatticeField>& trajectory, double ds) {
  require_trajectory(trajectory.size(), ds);
  const auto& g3 = trajectory.front().grid();
  const int n = static_cast<int>(trajectory.size());
  const Axis s_axis = Axis::interval(0.0, ds * (n - 1), n);
  const auto stencils = derivative_stencils(s_axis);
  const auto s_weights = quadrature_weights(s_axis);
  for (const auto& a : trajectory) {
    require_same_grid(a.grid(), g3);
    require_one_form(a, "real_flow_instanton_check");
  }
  double plus2 = 0, minus2 = 0, plus_max = 0;
  for (int k = 0; k < n; ++k) {
    LatticeField dsa = LatticeField::zeros_like(trajectory[k], 1);
    for (const auto& e : stencils[k])
      if (e.weight != 0.0) dsa.axpy(e.weight, trajectory[e.node]);
    const LatticeField star_f = hodge_star(curvature(trajectory[k]));
    for (std::size_t s = 0; s < dsa.sites(); ++s) {
      double p = 0, m = 0;
      for (int i = 0; i < 3; ++i) {
        p += 0.5 * (dsa.at(s, i) + star_f.at(s, i)).squaredNorm();
        m += 0.5 * (dsa.at(s, i) - star_f.at(s, i)).squaredNorm();
      }
      const double w = s_weights[k] * g3.site_weight(s);
      plus2 += w * p;
      minus2 += w * m;
      plus_max = std::max(plus_max, std::sqrt(p));
    }
  }
  return {std::sqrt(plus2), std::sqrt(minus2), plus_max, trajectory.size()};
}

/// Reference implementation of the check that materializes the 4-connection.
inline InstantonCheckReport real_flow_instanton_check_assembled(const std::vector<LatticeField>& trajectory, double ds) {
  require_trajectory(trajectory.size(), ds);
  const auto& g3 = trajectory.front().grid();
  const int n = static_cast<int>(trajectory.size());
  auto g4 = prepend_axis(Axis::interval(0.0, ds * (n - 1), n), g3);
  std::vector<const LatticeField*> slices;
  for (const auto& a : trajectory) {
    require_same_grid(a.grid(), g3);
    slices.push_back(&a);
  }
  const LatticeField a4 = stack_one_forms(g4, slices, {}, trajectory.front().rank());
  const auto split = sd_asd_project(curvature(a4));
  return {l2_norm(split.plus), l2_norm(split.minus), max_norm(split.plus), trajectory.size()};
}

/// KW configuration of an extended-flow trajectory: A_s = 0, A_i = A(s),
/// phi_s = -phi0(s), phi_i = phi(s), with s on axis 0.
inline FourConfig assemble_flow_config(const std::vector<FlowState>& trajectory, double ds) {
  require_trajectory(trajectory.size(), ds);
  const auto& g3 = trajectory.front().grid();
  const int n = static_cast<int>(trajectory.size());
  const int rank = trajectory.front().conn.rank();
  auto g4 = prepend_axis(Axis::interval(0.0, ds * (n - 1), n), g3);
  std::vector<LatticeField> neg_phi0;
  std::vector<const LatticeField*> as, phis, normals;
  neg_phi0.reserve(trajectory.size());
  for (const auto& st : trajectory) {
    require_same_grid(st.grid(), g3);
    neg_phi0.push_back(-1.0 * st.phi0);
  }
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    as.push_back(&trajectory[k].conn.a);
    phis.push_back(&trajectory[k].conn.phi);
    normals.push_back(&neg_phi0[k]);
  }
  return {stack_one_forms(g4, as, {}, rank), stack_one_forms(g4, phis, normals, rank)};
}

struct FlowKWReport {
  KWParams t;
  double plus = 0.0;
  double minus = 0.0;
  double moment = 0.0;
  double total = 0.0;
};

inline FlowKWReport flow_kw_equivalence_check(const std::vector<FlowState>& trajectory, double ds,
                                              const MorseParams& params) {
  const auto cfg = assemble_flow_config(trajectory, ds);
  const KWParams t = t_from_alpha(params.alpha);
  const auto r = kw_residual(cfg, t);
  return {t, r.plus_norm(), r.minus_norm(), r.moment_norm(), r.total_norm()};
}

// ---------------------------------------------------------------------------
// Instanton number

struct InstantonOptions {
  // Open grids need an explicit statement that the fields are in a boundary
  // trivialization in which the integral is the topological charge.
  bool boundary_declared = false;
};

/// (1/8 pi^2) int Tr F ^ F = (1/8 pi^2) int 2 Tr(F01 F23 - F02 F13 + F03 F12).
inline double instanton_number(const LatticeField& f) {
  if (f.dim() != 4 || f.degree() != 2) throw invalid_argument("instanton_number: need a 2-form on a 4-grid");
  const int c01 = component_of(4, {0, 1}), c23 = component_of(4, {2, 3}), c02 = component_of(4, {0, 2}),
            c13 = component_of(4, {1, 3}), c03 = component_of(4, {0, 3}), c12 = component_of(4, {1, 2});
  double acc = 0;
  for (std::size_t s = 0; s < f.sites(); ++s) {
    const Mat m = f.at(s, c01) * f.at(s, c23) - f.at(s, c02) * f.at(s, c13) + f.at(s, c03) * f.at(s, c12);
    acc += f.grid().site_weight(s) * 2.0 * m.trace().real();
  }
  return acc / (8.0 * M_PI * M_PI);
}

inline double instanton_number(const FourConfig& cfg, const InstantonOptions& opt = {}) {
  if (!cfg.grid().all_periodic() && !opt.boundary_declared)
    throw invalid_argument("instanton_number: open grid without declared boundary data");
  return instanton_number(curvature(cfg.a));
}

// ---------------------------------------------------------------------------
// Bogomolny equations and the phi0 -> D/Ds substitution

/// The 2-form F + *d_A phi0 on a 3-grid. Its Hodge dual *F + d_A phi0 has the
/// same norm.
inline LatticeField bogomolny_residual(const LatticeField& a, const LatticeField& phi0) {
  if (a.dim() != 3) throw invalid_argument("bogomolny_residual: expected a 3-grid");
  require_one_form(a, "bogomolny_residual");
  if (phi0.degree() != 0) throw invalid_argument("bogomolny_residual: phi0 must be a 0-form");
  return curvature(a) + hodge_star(covariant_derivative(a, phi0));
}

struct CategorificationReport {
  double lifted_selfdual = 0.0;  // ||(F + *F)_{si}|| per unit s-length
  double lifted_fplus = 0.0;     // ||F+|| per unit s-length
  double bogomolny = 0.0;        // ||R||
  double identity_gap = 0.0;     // |lifted_selfdual - bogomolny|
  double vanishing_constant = 0.0;  // sqrt(||F||^2 + ||d_A phi0||^2) / ||R||
};

/// Lifts an s-independent (A, phi0) to four dimensions with A_s = -phi0, so
/// that D/Ds acts as phi0 does, and compares the self-dual curvature of the
/// lift with the Bogomolny residual.
inline CategorificationReport categorification_identity_check(const LatticeField& a, const LatticeField& phi0,
                                                              double window = 1.0, int samples = 5) {
  if (!(window > 0.0) || samples < 4) throw invalid_argument("categorification check: need window > 0, samples >= 4");
  const LatticeField r = bogomolny_residual(a, phi0);
  auto g4 = prepend_axis(Axis::interval(0.0, window, samples), a.grid());
  const LatticeField neg = -1.0 * phi0;
  std::vector<const LatticeField*> slices(samples, &a), normals(samples, &neg);
  const LatticeField a4 = stack_one_forms(g4, slices, normals, a.rank());
  const LatticeField f4 = curvature(a4);
  const LatticeField sd = f4 + hodge_star(f4);

  // Restrict to the (s, i) components and integrate over the window.
  LatticeField si(g4, 1, a.rank());
  for (std::size_t s = 0; s < si.sites(); ++s)
    for (int i = 1; i <= 3; ++i) si.at(s, i) = sd.at(s, component_of(4, {0, i}));
  CategorificationReport rep;
  rep.lifted_selfdual = l2_norm(si) / std::sqrt(window);
  rep.lifted_fplus = l2_norm(sd_asd_project(f4).plus) / std::sqrt(window);
  rep.bogomolny = l2_norm(r);
  rep.identity_gap = std::abs(rep.lifted_selfdual - rep.bogomolny);
  const double lhs = std::hypot(l2_norm(curvature(a)), l2_norm(covariant_derivative(a, phi0)));
  rep.vanishing_constant = rep.bogomolny > 0 ? lhs / rep.bogomolny : 0.0;
  return rep;
}

}  // namespace kwg
