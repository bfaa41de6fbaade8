#pragma once

// Structured grids over W (periodic boxes), W x [y0, y_max] and R^2-box x [y0, y_max].
//
// Orientation convention: the orientation form is dx^0 ^ dx^1 ^ ... in axis
// order. Half-line / flow coordinates are placed on axis 0, so a
// four-dimensional grid is ordered (y, x1, x2, x3).

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "kwgauge/error.hpp"

namespace kwg {

enum class AxisKind { Periodic, Interval, Graded };

struct Axis {
  AxisKind kind = AxisKind::Periodic;
  double lo = 0.0;     // Periodic: origin. Interval/Graded: first node (y0 for Graded).
  double hi = 1.0;     // Periodic: origin + extent. Interval/Graded: last node.
  int points = 4;      // Graded: derived from ratio when ratio > 1.
  double ratio = 1.0;  // Graded only: target spacing growth factor.

  static Axis periodic(double extent, int points, double origin = 0.0) {
    return {AxisKind::Periodic, origin, origin + extent, points, 1.0};
  }
  static Axis interval(double lo, double hi, int points) { return {AxisKind::Interval, lo, hi, points, 1.0}; }
  // Geometric nodes y_j = y0 * q^j, q <= ratio chosen so the last node is y_max.
  static Axis graded(double y0, double y_max, double ratio) {
    Axis a{AxisKind::Graded, y0, y_max, 0, ratio};
    if (y0 > 0 && y_max > y0 && ratio > 1.0)
      a.points = std::max(4, static_cast<int>(std::ceil(std::log(y_max / y0) / std::log(ratio))) + 1);
    return a;
  }

  bool is_periodic() const { return kind == AxisKind::Periodic; }

  void validate() const {
    if (points < 4) throw invalid_argument("grid axis needs at least 4 points");
    if (!(hi > lo)) throw invalid_argument("grid axis needs lo < hi");
    if (kind == AxisKind::Graded && (lo <= 0 || ratio < 1.0))
      throw invalid_argument("graded axis needs y0 > 0 and ratio >= 1");
  }

  std::vector<double> nodes() const {
    std::vector<double> x(points);
    switch (kind) {
      case AxisKind::Periodic:
        for (int k = 0; k < points; ++k) x[k] = lo + (hi - lo) * k / points;
        break;
      case AxisKind::Interval:
        for (int k = 0; k < points; ++k) x[k] = lo + (hi - lo) * k / (points - 1);
        break;
      case AxisKind::Graded:
        for (int k = 0; k < points; ++k) x[k] = lo * std::pow(hi / lo, double(k) / (points - 1));
        x.back() = hi;
        break;
    }
    return x;
  }
};

// Weights of the derivative at `at` of the quadratic interpolant through x0, x1, x2.
inline std::array<double, 3> lagrange_derivative_weights(double x0, double x1, double x2, double at) {
  return {((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2)),
          ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2)),
          ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1))};
}

struct StencilEntry {
  int node;
  double weight;
};
using Stencil3 = std::array<StencilEntry, 3>;

// Second-order first-derivative stencils: central in the interior and on periodic
// axes, one-sided three-point at non-periodic ends.
inline std::vector<Stencil3> derivative_stencils(const Axis& axis) {
  const int n = axis.points;
  const auto x = axis.nodes();
  std::vector<Stencil3> out(n);
  if (axis.is_periodic()) {
    const double h = (axis.hi - axis.lo) / n;
    for (int k = 0; k < n; ++k)
      out[k] = {StencilEntry{(k + n - 1) % n, -0.5 / h}, StencilEntry{k, 0.0}, StencilEntry{(k + 1) % n, 0.5 / h}};
    return out;
  }
  for (int k = 0; k < n; ++k) {
    const int base = k == 0 ? 0 : (k == n - 1 ? n - 3 : k - 1);
    const auto w = lagrange_derivative_weights(x[base], x[base + 1], x[base + 2], x[k]);
    out[k] = {StencilEntry{base, w[0]}, StencilEntry{base + 1, w[1]}, StencilEntry{base + 2, w[2]}};
  }
  return out;
}

// Product-rule quadrature weights: uniform on periodic axes, trapezoid otherwise.
inline std::vector<double> quadrature_weights(const Axis& axis) {
  const int n = axis.points;
  std::vector<double> w(n, 0.0);
  if (axis.is_periodic()) {
    for (auto& v : w) v = (axis.hi - axis.lo) / n;
    return w;
  }
  const auto x = axis.nodes();
  for (int k = 0; k + 1 < n; ++k) {
    const double h = x[k + 1] - x[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

class GridSpec {
 public:
  GridSpec() = default;
  explicit GridSpec(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > 4) throw invalid_argument("grid dimension must be 1..4");
    for (const auto& a : axes_) a.validate();
    strides_.assign(axes_.size(), 1);
    for (int d = dim() - 2; d >= 0; --d) strides_[d] = strides_[d + 1] * axes_[d + 1].points;
    sites_ = strides_[0] * axes_[0].points;
    for (const auto& a : axes_) {
      stencils_.push_back(derivative_stencils(a));
      nodes_.push_back(a.nodes());
      weights_.push_back(quadrature_weights(a));
    }
  }

  static GridSpec periodic_box(int dim, int points, double extent = 2.0 * M_PI) {
    return GridSpec(std::vector<Axis>(dim, Axis::periodic(extent, points)));
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  std::size_t sites() const { return sites_; }
  const Axis& axis(int d) const { return axes_[d]; }
  const std::vector<Axis>& axes() const { return axes_; }
  bool all_periodic() const {
    for (const auto& a : axes_)
      if (!a.is_periodic()) return false;
    return true;
  }
  int half_line_axis() const {
    for (int d = 0; d < dim(); ++d)
      if (axes_[d].kind == AxisKind::Graded) return d;
    return -1;
  }

  std::size_t stride(int d) const { return strides_[d]; }
  int coord_index(std::size_t site, int d) const { return static_cast<int>((site / strides_[d]) % axes_[d].points); }
  double coord(std::size_t site, int d) const { return nodes_[d][coord_index(site, d)]; }
  const std::vector<double>& nodes(int d) const { return nodes_[d]; }
  const Stencil3& stencil(int d, int k) const { return stencils_[d][k]; }

  double site_weight(std::size_t site) const {
    double w = 1.0;
    for (int d = 0; d < dim(); ++d) w *= weights_[d][coord_index(site, d)];
    return w;
  }

  double min_spacing() const {
    double h = 1e300;
    for (const auto& x : nodes_)
      for (std::size_t k = 0; k + 1 < x.size(); ++k) h = std::min(h, x[k + 1] - x[k]);
    return h;
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    if (a.axes_.size() != b.axes_.size()) return false;
    for (std::size_t d = 0; d < a.axes_.size(); ++d) {
      const auto &x = a.axes_[d], &y = b.axes_[d];
      if (x.kind != y.kind || x.lo != y.lo || x.hi != y.hi || x.points != y.points || x.ratio != y.ratio) return false;
    }
    return true;
  }

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t sites_ = 0;
  std::vector<std::vector<Stencil3>> stencils_;
  std::vector<std::vector<double>> nodes_;
  std::vector<std::vector<double>> weights_;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw invalid_argument("grid mismatch");
}

}  // namespace kwg
