#pragma once

// Chern-Simons functionals on periodic 3-grids, the Morse functions built from
// them and their discrete-adjoint gradients.
//
// All functionals are evaluated on the discretized fields with the grid
// stencils and quadrature. Gradients differentiate that discrete expression,
// so they agree with finite differences of the functional up to roundoff.

#include <cmath>
#include <complex>

#include "kwgauge/forms.hpp"

namespace kwg {

struct ComplexConnection {
  LatticeField a;    // real part
  LatticeField phi;  // imaginary part

  ComplexConnection() = default;
  ComplexConnection(LatticeField a_, LatticeField phi_) : a(std::move(a_)), phi(std::move(phi_)) { validate(); }

  void validate() const {
    require_one_form(a, "ComplexConnection");
    a.check_compatible(phi);
  }
  const GridSpec& grid() const { return a.grid(); }
  int rank() const { return a.rank(); }
};

struct FlowState {
  ComplexConnection conn;
  LatticeField phi0;

  FlowState() = default;
  FlowState(ComplexConnection c, LatticeField p0) : conn(std::move(c)), phi0(std::move(p0)) { validate(); }

  static FlowState zero(std::shared_ptr<const GridSpec> grid, int rank) {
    return {ComplexConnection(LatticeField(grid, 1, rank), LatticeField(grid, 1, rank)), LatticeField(grid, 0, rank)};
  }

  void validate() const {
    conn.validate();
    if (phi0.degree() != 0) throw invalid_argument("FlowState: phi0 must be a 0-form");
    if (phi0.rank() != conn.rank()) throw invalid_argument("FlowState: rank mismatch");
    require_same_grid(phi0.grid(), conn.grid());
  }
  const GridSpec& grid() const { return conn.grid(); }

  // Tangent-space arithmetic used by integrators and finite-difference checks.
  FlowState& axpy(double s, const FlowState& v) {
    conn.a.axpy(s, v.conn.a);
    conn.phi.axpy(s, v.conn.phi);
    phi0.axpy(s, v.phi0);
    return *this;
  }
};

/// Metric of field space: -sum w Tr(dA dA + dphi dphi + dphi0 dphi0).
inline double inner(const FlowState& u, const FlowState& v) {
  return inner(u.conn.a, v.conn.a) + inner(u.conn.phi, v.conn.phi) + inner(u.phi0, v.phi0);
}

struct MorseParams {
  double alpha = M_PI / 2;
  double level_normalization = 1.0;

  MorseParams() = default;
  MorseParams(double a, double level = 1.0) : alpha(a), level_normalization(level) { validate(); }

  void validate() const {
    if (!std::isfinite(alpha) || std::abs(std::sin(alpha)) < 1e-14)
      throw invalid_argument("MorseParams: sin(alpha) must be nonzero");
    if (!std::isfinite(level_normalization)) throw invalid_argument("MorseParams: level normalization must be finite");
  }
};

inline void require_periodic_3grid(const GridSpec& g, const char* who) {
  if (g.dim() != 3) throw invalid_argument(std::string(who) + ": expected a 3-grid");
  if (!g.all_periodic())
    throw invalid_argument(std::string(who) + ": boundary terms on non-periodic grids are not supported");
}

namespace detail {

// CS density of a complex (or real) matrix-valued 1-form at one site:
// eps_ijk Tr(a_i D_j a_k) + 2 Tr(a_1 [a_2, a_3]).
inline cplx cs_density(const LatticeField& a, const std::vector<LatticeField>& da, std::size_t s) {
  static constexpr int eps[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  cplx acc = 0;
  for (int p = 0; p < 6; ++p) {
    const int i = eps[p][0], j = eps[p][1], k = eps[p][2];
    acc += (p < 3 ? 1.0 : -1.0) * (a.at(s, i) * da[j].at(s, k)).trace();
  }
  acc += 2.0 * (a.at(s, 0) * commutator(a.at(s, 1), a.at(s, 2))).trace();
  return acc;
}

inline cplx cs_integral(const LatticeField& a) {
  require_periodic_3grid(a.grid(), "Chern-Simons");
  require_one_form(a, "Chern-Simons");
  std::vector<LatticeField> da;
  for (int d = 0; d < 3; ++d) da.push_back(partial(a, d));
  cplx acc = 0;
  for (std::size_t s = 0; s < a.sites(); ++s) acc += a.grid().site_weight(s) * cs_density(a, da, s);
  return acc / (4.0 * M_PI);
}

}  // namespace detail

/// (1/4pi) int Tr(A ^ dA + (2/3) A ^ A ^ A) on a periodic 3-grid.
inline double cs_real(const LatticeField& a) { return detail::cs_integral(a).real(); }

/// Same functional for the complexified connection A + i phi.
inline cplx cs_complex(const ComplexConnection& c) {
  c.validate();
  return detail::cs_integral(c.a + cplx(0, 1) * c.phi);
}

/// h0 = -Re(e^{i alpha} lambda CS(A + i phi)).
inline double morse_h0(const ComplexConnection& c, const MorseParams& p) {
  p.validate();
  return -(std::polar(1.0, p.alpha) * p.level_normalization * cs_complex(c)).real();
}

/// mu = * d_A * phi, returned as a 0-form: sum_i (d_i phi_i + [A_i, phi_i]).
inline LatticeField moment_map(const LatticeField& a, const LatticeField& phi) {
  require_one_form(a, "moment_map");
  require_one_form(phi, "moment_map");
  a.check_compatible(phi);
  return hodge_star(covariant_derivative(a, hodge_star(phi)));
}

inline double extended_h(const FlowState& st, const MorseParams& p) {
  st.validate();
  const LatticeField mu = moment_map(st.conn.a, st.conn.phi);
  double m = 0;
  for (std::size_t s = 0; s < mu.sites(); ++s) m += mu.grid().site_weight(s) * (st.phi0.at(s, 0) * mu.at(s, 0)).trace().real();
  return morse_h0(st.conn, p) + m;
}

/// B = *(F - phi ^ phi) and C = *(d_A phi) on a 3-grid, so that the complex
/// curvature satisfies *F(A + i phi) = B + i C.
struct CurvatureStars {
  LatticeField b;
  LatticeField c;
};

inline CurvatureStars curvature_stars(const ComplexConnection& conn) {
  const LatticeField x = curvature(conn.a) - wedge(conn.phi, conn.phi);
  const LatticeField y = covariant_derivative(conn.a, conn.phi);
  return {hodge_star(x), hodge_star(y)};
}

/// Gradient of extended_h under the field-space metric: dh(v) = <grad, v>.
inline FlowState gradient_h(const FlowState& st, const MorseParams& p) {
  st.validate();
  p.validate();
  require_periodic_3grid(st.grid(), "gradient_h");
  const auto& a = st.conn.a;
  const auto& phi = st.conn.phi;
  const auto stars = curvature_stars(st.conn);
  const double k = p.level_normalization / (2.0 * M_PI);
  const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);

  FlowState g = FlowState::zero(a.grid_ptr(), a.rank());
  const LatticeField dphi0 = covariant_derivative(a, st.phi0);
  for (std::size_t s = 0; s < a.sites(); ++s) {
    const Mat& p0 = st.phi0.at(s, 0);
    for (int i = 0; i < 3; ++i) {
      const Mat& b = stars.b.at(s, i);
      const Mat& c = stars.c.at(s, i);
      g.conn.a.at(s, i) = k * (ca * b - sa * c) - commutator(phi.at(s, i), p0);
      g.conn.phi.at(s, i) = -k * (ca * c + sa * b) + dphi0.at(s, i);
    }
  }
  g.phi0 = -1.0 * moment_map(a, phi);
  return g;
}

/// Gradient of lambda * cs_real under the trace metric: -(lambda / 2pi) * (*F).
inline LatticeField gradient_cs_real(const LatticeField& a, double level_normalization = 1.0) {
  require_periodic_3grid(a.grid(), "gradient_cs_real");
  return (-level_normalization / (2.0 * M_PI)) * hodge_star(curvature(a));
}

}  // namespace kwg
