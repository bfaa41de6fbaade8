#pragma once

// Adjoint-valued differential forms sampled on a GridSpec, with the exterior
// covariant calculus used by every equation in the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "kwgauge/algebra.hpp"
#include "kwgauge/grid.hpp"

namespace kwg {

using MultiIndex = std::vector<int>;

// Increasing multi-indices of length `degree` from {0..dim-1}, lexicographic.
inline std::vector<MultiIndex> form_basis(int dim, int degree) {
  std::vector<MultiIndex> out;
  if (degree < 0 || degree > dim) return out;
  MultiIndex idx(degree);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int k = degree - 1;
    while (k >= 0 && idx[k] == dim - degree + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < degree; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline int component_of(int dim, const MultiIndex& idx) {
  const auto basis = form_basis(dim, static_cast<int>(idx.size()));
  for (std::size_t c = 0; c < basis.size(); ++c)
    if (basis[c] == idx) return static_cast<int>(c);
  return -1;
}

// Sign of the permutation taking 0..n-1 to seq.
inline int permutation_sign(const std::vector<int>& seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) sign = -sign;
  return sign;
}

// Matrices are stored contiguously (column-major N x N blocks, one per site
// and component) and exposed through Eigen maps.
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(std::shared_ptr<const GridSpec> grid, int degree, int rank)
      : grid_(std::move(grid)), degree_(degree), rank_(rank) {
    if (!grid_) throw invalid_argument("LatticeField needs a grid");
    if (degree < 0 || degree > grid_->dim()) throw invalid_argument("unsupported form degree");
    LieAlgebraSpec(rank).validate();
    ncomp_ = binomial(grid_->dim(), degree);
    block_ = static_cast<std::size_t>(rank) * rank;
    data_.assign(grid_->sites() * ncomp_ * block_, cplx(0, 0));
  }

  static LatticeField zeros_like(const LatticeField& f, int degree) { return {f.grid_, degree, f.rank_}; }

  const GridSpec& grid() const { return *grid_; }
  const std::shared_ptr<const GridSpec>& grid_ptr() const { return grid_; }
  int degree() const { return degree_; }
  int rank() const { return rank_; }
  int dim() const { return grid_->dim(); }
  int components() const { return ncomp_; }
  std::size_t sites() const { return grid_->sites(); }
  std::size_t entries() const { return sites() * ncomp_; }

  MatMap entry(std::size_t k) { return MatMap(data_.data() + k * block_, rank_, rank_); }
  ConstMatMap entry(std::size_t k) const { return ConstMatMap(data_.data() + k * block_, rank_, rank_); }
  MatMap at(std::size_t site, int comp) { return entry(site * ncomp_ + comp); }
  ConstMatMap at(std::size_t site, int comp) const { return entry(site * ncomp_ + comp); }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  LatticeField& operator+=(const LatticeField& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  LatticeField& operator-=(const LatticeField& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  LatticeField& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }
  friend LatticeField operator+(LatticeField a, const LatticeField& b) { return a += b; }
  friend LatticeField operator-(LatticeField a, const LatticeField& b) { return a -= b; }
  friend LatticeField operator*(cplx s, LatticeField a) { return a *= s; }
  friend LatticeField operator*(double s, LatticeField a) { return a *= cplx(s, 0); }

  void axpy(cplx s, const LatticeField& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
  }

  bool all_lie(double tol = kAlgebraTol) const {
    for (std::size_t k = 0; k < entries(); ++k)
      if (!is_lie(entry(k), tol)) return false;
    return true;
  }

  double max_abs() const {
    double v = 0;
    for (std::size_t k = 0; k < entries(); ++k) v = std::max(v, entry(k).norm());
    return v;
  }

  void check_compatible(const LatticeField& o) const {
    if (degree_ != o.degree_ || rank_ != o.rank_) throw invalid_argument("field degree/rank mismatch");
    if (grid_ != o.grid_) require_same_grid(*grid_, *o.grid_);
  }

 private:
  std::shared_ptr<const GridSpec> grid_;
  int degree_ = 0;
  int rank_ = 2;
  int ncomp_ = 1;
  std::size_t block_ = 4;
  std::vector<cplx> data_;
};

inline std::shared_ptr<const GridSpec> make_grid(std::vector<Axis> axes) {
  return std::make_shared<const GridSpec>(std::move(axes));
}

// Samples f(site, component) into a field.
inline LatticeField sample_field(std::shared_ptr<const GridSpec> grid, int degree, int rank,
                                 const std::function<Mat(const std::vector<double>&, int)>& f) {
  LatticeField out(std::move(grid), degree, rank);
  const auto& g = out.grid();
  std::vector<double> x(g.dim());
  for (std::size_t s = 0; s < g.sites(); ++s) {
    for (int d = 0; d < g.dim(); ++d) x[d] = g.coord(s, d);
    for (int c = 0; c < out.components(); ++c) out.at(s, c) = f(x, c);
  }
  return out;
}

/// Finite-difference partial derivative along axis d, applied componentwise.
inline LatticeField partial(const LatticeField& f, int d) {
  const auto& g = f.grid();
  LatticeField out = LatticeField::zeros_like(f, f.degree());
  const std::size_t stride = g.stride(d);
  for (std::size_t s = 0; s < g.sites(); ++s) {
    const int k = g.coord_index(s, d);
    const std::size_t base = s - static_cast<std::size_t>(k) * stride;
    for (const auto& e : g.stencil(d, k)) {
      if (e.weight == 0.0) continue;
      const std::size_t t = base + static_cast<std::size_t>(e.node) * stride;
      for (int c = 0; c < f.components(); ++c) out.at(s, c) += e.weight * f.at(t, c);
    }
  }
  return out;
}

/// A field together with its partial derivatives along every axis.
struct Jet {
  LatticeField value;
  std::vector<LatticeField> partials;
};

inline Jet fd_jet(const LatticeField& f) {
  Jet j{f, {}};
  for (int d = 0; d < f.dim(); ++d) j.partials.push_back(partial(f, d));
  return j;
}

inline void require_one_form(const LatticeField& a, const char* who) {
  if (a.degree() != 1) throw invalid_argument(std::string(who) + ": expected a 1-form");
}

/// F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu].
inline LatticeField curvature(const Jet& a) {
  require_one_form(a.value, "curvature");
  const int dim = a.value.dim();
  LatticeField f = LatticeField::zeros_like(a.value, 2);
  const auto basis = form_basis(dim, 2);
  for (std::size_t s = 0; s < f.sites(); ++s)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const int mu = basis[c][0], nu = basis[c][1];
      f.at(s, c) = a.partials[mu].at(s, nu) - a.partials[nu].at(s, mu) +
                   commutator(a.value.at(s, mu), a.value.at(s, nu));
    }
  return f;
}
inline LatticeField curvature(const LatticeField& a) { return curvature(fd_jet(a)); }

/// Exterior covariant derivative of an adjoint-valued k-form:
/// (d_A w)_I = sum_j (-1)^j (d_{i_j} w_{I\i_j} + [A_{i_j}, w_{I\i_j}]).
inline LatticeField covariant_derivative(const LatticeField& a, const Jet& w) {
  require_one_form(a, "covariant_derivative");
  const int dim = a.dim();
  const int k = w.value.degree();
  if (k + 1 > dim) throw invalid_argument("covariant_derivative: degree overflow");
  a.check_compatible(LatticeField::zeros_like(w.value, 1));
  LatticeField out = LatticeField::zeros_like(w.value, k + 1);
  const auto basis = form_basis(dim, k + 1);
  struct Term {
    int axis, sub, sign;
  };
  std::vector<std::vector<Term>> terms(basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (int j = 0; j <= k; ++j) {
      MultiIndex rest = basis[c];
      rest.erase(rest.begin() + j);
      terms[c].push_back({basis[c][j], component_of(dim, rest), (j % 2) ? -1 : 1});
    }
  for (std::size_t s = 0; s < out.sites(); ++s)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      Mat acc = zero_mat(a.rank());
      for (const auto& t : terms[c]) {
        const Mat v = w.partials[t.axis].at(s, t.sub) + commutator(a.at(s, t.axis), w.value.at(s, t.sub));
        acc += double(t.sign) * v;
      }
      out.at(s, c) = acc;
    }
  return out;
}
inline LatticeField covariant_derivative(const LatticeField& a, const LatticeField& w) {
  return covariant_derivative(a, fd_jet(w));
}

/// (phi ^ psi)_{mu nu} = phi_mu psi_nu - phi_nu psi_mu for matrix-valued 1-forms;
/// phi ^ phi has components [phi_mu, phi_nu].
inline LatticeField wedge(const LatticeField& phi, const LatticeField& psi) {
  require_one_form(phi, "wedge");
  require_one_form(psi, "wedge");
  phi.check_compatible(psi);
  LatticeField out = LatticeField::zeros_like(phi, 2);
  const auto basis = form_basis(phi.dim(), 2);
  for (std::size_t s = 0; s < out.sites(); ++s)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const int mu = basis[c][0], nu = basis[c][1];
      out.at(s, c) = phi.at(s, mu) * psi.at(s, nu) - phi.at(s, nu) * psi.at(s, mu);
    }
  return out;
}

struct HodgeMap {
  std::vector<int> target;
  std::vector<int> sign;
};

// *(dx^I) = sign(I, I^c) dx^{I^c} for the flat metric and axis-order orientation.
inline HodgeMap hodge_map(int dim, int degree) {
  HodgeMap m;
  for (const auto& idx : form_basis(dim, degree)) {
    MultiIndex comp;
    for (int a = 0; a < dim; ++a)
      if (std::find(idx.begin(), idx.end(), a) == idx.end()) comp.push_back(a);
    std::vector<int> seq = idx;
    seq.insert(seq.end(), comp.begin(), comp.end());
    m.target.push_back(component_of(dim, comp));
    m.sign.push_back(permutation_sign(seq));
  }
  return m;
}

inline LatticeField hodge_star(const LatticeField& w) {
  const int dim = w.dim(), k = w.degree();
  const auto map = hodge_map(dim, k);
  LatticeField out = LatticeField::zeros_like(w, dim - k);
  for (std::size_t s = 0; s < w.sites(); ++s)
    for (int c = 0; c < w.components(); ++c) out.at(s, map.target[c]) = double(map.sign[c]) * w.at(s, c);
  return out;
}

struct SelfDualSplit {
  LatticeField plus;
  LatticeField minus;
};

/// w+ = (w + *w)/2, w- = (w - *w)/2 for 2-forms on four-dimensional grids.
inline SelfDualSplit sd_asd_project(const LatticeField& w) {
  if (w.dim() != 4 || w.degree() != 2) throw invalid_argument("sd_asd_project: need a 2-form on a 4-grid");
  const LatticeField star = hodge_star(w);
  LatticeField plus = 0.5 * (w + star);
  LatticeField minus = 0.5 * (w - star);
  return {std::move(plus), std::move(minus)};
}

// Pointwise squared norm sum_I |w_I|^2 (Frobenius; equals -Tr w_I^2 on su(N)).
inline double pointwise_norm2(const LatticeField& w, std::size_t site) {
  double v = 0;
  for (int c = 0; c < w.components(); ++c) v += w.at(site, c).squaredNorm();
  return v;
}

/// L2 norm with the trace-form metric and the grid quadrature.
inline double l2_norm(const LatticeField& w) {
  double v = 0;
  for (std::size_t s = 0; s < w.sites(); ++s) v += w.grid().site_weight(s) * pointwise_norm2(w, s);
  return std::sqrt(v);
}

inline double max_norm(const LatticeField& w) {
  double v = 0;
  for (std::size_t s = 0; s < w.sites(); ++s) v = std::max(v, std::sqrt(pointwise_norm2(w, s)));
  return v;
}

/// Trace-form inner product -sum_sites w(site) sum_I Re Tr(u_I v_I).
inline double inner(const LatticeField& u, const LatticeField& v) {
  u.check_compatible(v);
  double acc = 0;
  for (std::size_t s = 0; s < u.sites(); ++s) {
    double local = 0;
    for (int c = 0; c < u.components(); ++c) local -= (u.at(s, c) * v.at(s, c)).trace().real();
    acc += u.grid().site_weight(s) * local;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Gauge transformations

class GaugeTransform {
 public:
  GaugeTransform(std::shared_ptr<const GridSpec> grid, std::vector<Mat> g,
                 std::optional<std::vector<std::vector<Mat>>> dg = std::nullopt, double tol = 1e-12)
      : grid_(std::move(grid)), g_(std::move(g)), dg_(std::move(dg)) {
    if (g_.size() != grid_->sites()) throw invalid_argument("gauge transform: wrong site count");
    for (const auto& m : g_) {
      const int n = static_cast<int>(m.rows());
      if ((m * m.adjoint() - identity_mat(n)).norm() > tol) throw invalid_argument("gauge transform: non-unitary g");
      if (std::abs(m.determinant() - 1.0) > tol) throw invalid_argument("gauge transform: det g != 1");
    }
  }

  static GaugeTransform identity(std::shared_ptr<const GridSpec> grid, int rank) {
    std::vector<Mat> g(grid->sites(), identity_mat(rank));
    return GaugeTransform(std::move(grid), std::move(g));
  }

  /// g = exp(lambda) sitewise; lambda must be su(N)-valued.
  static GaugeTransform exponential(const LatticeField& lambda) {
    if (lambda.degree() != 0) throw invalid_argument("gauge generator must be a 0-form");
    std::vector<Mat> g;
    g.reserve(lambda.sites());
    for (std::size_t k = 0; k < lambda.entries(); ++k) g.push_back(exp_lie(lambda.entry(k)));
    return GaugeTransform(lambda.grid_ptr(), std::move(g));
  }

  static Mat exp_lie(const Mat& m) {
    const Eigen::MatrixXcd dense = m;
    return Mat(dense.exp());
  }

  const GridSpec& grid() const { return *grid_; }
  const std::shared_ptr<const GridSpec>& grid_ptr() const { return grid_; }
  const Mat& at(std::size_t site) const { return g_[site]; }
  bool has_analytic_derivative() const { return dg_.has_value(); }

  // d_mu g at a site: analytic when supplied, otherwise finite differences.
  Mat derivative(int mu, std::size_t site) const {
    if (dg_) return (*dg_)[mu][site];
    const auto& grid = *grid_;
    const int k = grid.coord_index(site, mu);
    const std::size_t base = site - static_cast<std::size_t>(k) * grid.stride(mu);
    Mat acc = zero_mat(static_cast<int>(g_[site].rows()));
    for (const auto& e : grid.stencil(mu, k))
      if (e.weight != 0.0) acc += e.weight * g_[base + static_cast<std::size_t>(e.node) * grid.stride(mu)];
    return acc;
  }

 private:
  std::shared_ptr<const GridSpec> grid_;
  std::vector<Mat> g_;
  std::optional<std::vector<std::vector<Mat>>> dg_;
};

/// Adjoint action g w g^-1 on every component of a form.
inline LatticeField adjoint_action(const GaugeTransform& g, const LatticeField& w) {
  require_same_grid(g.grid(), w.grid());
  LatticeField out = LatticeField::zeros_like(w, w.degree());
  for (std::size_t s = 0; s < w.sites(); ++s) {
    const Mat& gs = g.at(s);
    const Mat gi = gs.adjoint();
    for (int c = 0; c < w.components(); ++c) out.at(s, c) = gs * w.at(s, c) * gi;
  }
  return out;
}

struct GaugedPair {
  LatticeField a;
  LatticeField phi;
};

/// A' = g A g^-1 - (dg) g^-1,  phi' = g phi g^-1.
inline GaugedPair apply_gauge(const LatticeField& a, const LatticeField& phi, const GaugeTransform& g) {
  require_one_form(a, "apply_gauge");
  LatticeField ap = adjoint_action(g, a);
  for (std::size_t s = 0; s < a.sites(); ++s) {
    const Mat gi = g.at(s).adjoint();
    for (int mu = 0; mu < a.dim(); ++mu) ap.at(s, mu) -= g.derivative(mu, s) * gi;
  }
  return {std::move(ap), adjoint_action(g, phi)};
}

// ---------------------------------------------------------------------------
// Nahm pole lift: A = 0, phi = sum_i t_i dx^i / y, phi_y = 0, on a grid whose
// half-line axis is axis 0 and spatial axes are 1..3.

inline void require_half_line(const GridSpec& grid) {
  if (grid.dim() < 2 || grid.axis(0).is_periodic() || grid.axis(0).lo <= 0)
    throw invalid_argument("Nahm pole embedding needs a half-line axis 0 with y0 > 0");
}

inline LatticeField embed_nahm_pole(const PrincipalTriple& triple, std::shared_ptr<const GridSpec> grid) {
  require_half_line(*grid);
  const int rank = triple.n();
  return sample_field(std::move(grid), 1, rank, [&](const std::vector<double>& x, int c) -> Mat {
    if (c == 0 || c > 3) return zero_mat(rank);
    return triple[c - 1].matrix() / x[0];
  });
}

/// Jet of the Nahm pole lift with exact derivatives d_y phi_i = -t_i / y^2.
inline Jet nahm_pole_jet(const PrincipalTriple& triple, std::shared_ptr<const GridSpec> grid) {
  Jet j{embed_nahm_pole(triple, grid), {}};
  const int rank = triple.n();
  j.partials.push_back(sample_field(grid, 1, rank, [&](const std::vector<double>& x, int c) -> Mat {
    if (c == 0 || c > 3) return zero_mat(rank);
    return -triple[c - 1].matrix() / (x[0] * x[0]);
  }));
  for (int d = 1; d < grid->dim(); ++d) j.partials.push_back(LatticeField(grid, 1, rank));
  return j;
}

inline Jet zero_jet(std::shared_ptr<const GridSpec> grid, int degree, int rank) {
  Jet j{LatticeField(grid, degree, rank), {}};
  for (int d = 0; d < grid->dim(); ++d) j.partials.push_back(LatticeField(grid, degree, rank));
  return j;
}

// Smooth random su(N)-valued field built from a few low Fourier modes, so that
// it is periodic on periodic axes and smooth everywhere.
inline LatticeField smooth_random_field(std::shared_ptr<const GridSpec> grid, int degree, int rank,
                                        std::uint64_t seed, double amplitude = 1.0, int modes = 2) {
  const int dim = grid->dim();
  const int ncomp = binomial(dim, degree);
  struct Mode {
    std::vector<int> k;
    double phase;
    Mat coeff;
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kd(-1, 1);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  std::vector<std::vector<Mode>> per_comp(ncomp);
  std::vector<double> len(dim);
  for (int d = 0; d < dim; ++d) len[d] = grid->axis(d).hi - grid->axis(d).lo;
  for (int c = 0; c < ncomp; ++c)
    for (int m = 0; m < modes; ++m) {
      Mode mode;
      for (int d = 0; d < dim; ++d) mode.k.push_back(kd(rng));
      mode.phase = ph(rng);
      mode.coeff = random_element(LieAlgebraSpec(rank), rng(), amplitude).matrix();
      per_comp[c].push_back(std::move(mode));
    }
  return sample_field(grid, degree, rank, [&](const std::vector<double>& x, int c) -> Mat {
    Mat acc = zero_mat(rank);
    for (const auto& mode : per_comp[c]) {
      double arg = mode.phase;
      for (int d = 0; d < dim; ++d) arg += 2.0 * M_PI * mode.k[d] * x[d] / len[d];
      acc += std::cos(arg) * mode.coeff;
    }
    return acc;
  });
}

}  // namespace kwg
