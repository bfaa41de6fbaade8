#pragma once

// Matrix Lie algebra su(N): elements, brackets, the fundamental trace form and
// principal su(2) triples.

#include <Eigen/Dense>

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kwgauge/error.hpp"

namespace kwg {

using cplx = std::complex<double>;

inline constexpr int kMaxRank = 6;

// Fixed-capacity storage keeps per-site matrices off the heap.
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxRank, kMaxRank>;
using MatMap = Eigen::Map<Eigen::MatrixXcd>;
using ConstMatMap = Eigen::Map<const Eigen::MatrixXcd>;

inline constexpr double kAlgebraTol = 1e-12;

enum class GroupFamily { SU };

struct LieAlgebraSpec {
  GroupFamily group_family = GroupFamily::SU;
  int rank_n = 2;

  LieAlgebraSpec() = default;
  explicit LieAlgebraSpec(int n) : rank_n(n) { validate(); }

  void validate() const {
    if (rank_n < 2 || rank_n > kMaxRank)
      throw invalid_argument("su(N) requires 2 <= N <= " + std::to_string(kMaxRank) + ", got " +
                             std::to_string(rank_n));
  }
  friend bool operator==(const LieAlgebraSpec&, const LieAlgebraSpec&) = default;
};

inline Mat zero_mat(int n) { return Mat::Zero(n, n); }
inline Mat identity_mat(int n) { return Mat::Identity(n, n); }

inline Mat commutator(const Mat& x, const Mat& y) { return x * y - y * x; }

// Distance of m from su(N): ||m + m^H|| + |tr m|.
inline double lie_defect(const Mat& m) {
  return (m + m.adjoint()).norm() + std::abs(m.trace());
}

inline bool is_lie(const Mat& m, double tol = kAlgebraTol) {
  return m.rows() == m.cols() && lie_defect(m) <= tol * (1.0 + m.norm());
}

// Projection onto su(N) (anti-hermitian, traceless part).
inline Mat project_lie(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Mat a = 0.5 * (m - m.adjoint());
  a -= (a.trace() / double(n)) * identity_mat(n);
  return a;
}

/// An element of su(N) stored as an anti-hermitian traceless N x N matrix.
class LieElement {
 public:
  LieElement() = default;

  explicit LieElement(Mat m, double tol = kAlgebraTol) : m_(std::move(m)) {
    if (m_.rows() < 2 || m_.rows() != m_.cols() || m_.rows() > kMaxRank)
      throw invalid_argument("LieElement: matrix must be square with 2 <= N <= 6");
    if (!is_lie(m_, tol)) throw invalid_argument("LieElement: matrix is not anti-hermitian and traceless");
  }

  static LieElement zero(int n) { return unchecked(zero_mat(n)); }
  static LieElement unchecked(Mat m) {
    LieElement e;
    e.m_ = std::move(m);
    return e;
  }

  int n() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }
  double norm() const { return m_.norm(); }

  LieElement& operator+=(const LieElement& o) { m_ += o.m_; return *this; }
  LieElement& operator-=(const LieElement& o) { m_ -= o.m_; return *this; }
  LieElement& operator*=(double s) { m_ *= s; return *this; }
  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
  friend LieElement operator*(double s, LieElement a) { return a *= s; }
  friend LieElement operator-(LieElement a) { a.m_ = -a.m_; return a; }
  friend bool operator==(const LieElement& a, const LieElement& b) { return a.m_ == b.m_; }

 private:
  Mat m_;
};

inline void require_same_rank(const LieElement& x, const LieElement& y) {
  if (x.n() != y.n())
    throw invalid_argument("dimension mismatch: su(" + std::to_string(x.n()) + ") vs su(" +
                           std::to_string(y.n()) + ")");
}

inline LieElement bracket(const LieElement& x, const LieElement& y) {
  require_same_rank(x, y);
  return LieElement::unchecked(commutator(x.matrix(), y.matrix()));
}

/// Re Tr(xy) in the fundamental representation. Negative definite on su(N).
inline double trace_form(const LieElement& x, const LieElement& y) {
  require_same_rank(x, y);
  return (x.matrix() * y.matrix()).trace().real();
}

// Pointwise trace-form norm squared, -Tr(x x), for anti-hermitian x.
inline double trace_norm2(const Mat& x) { return -(x * x).trace().real(); }

struct PrincipalTriple {
  LieElement t1, t2, t3;

  const LieElement& operator[](int i) const { return i == 0 ? t1 : (i == 1 ? t2 : t3); }
  int n() const { return t1.n(); }
};

/// Spin-(N-1)/2 generators t_a = -i J_a, so that [t1,t2] = t3 cyclically and
/// t1^2 + t2^2 + t3^2 = -(N^2 - 1)/4.
inline PrincipalTriple principal_triple(const LieAlgebraSpec& spec) {
  spec.validate();
  const int n = spec.rank_n;
  const double j = 0.5 * (n - 1);
  Mat jp = zero_mat(n), jz = zero_mat(n);
  for (int k = 0; k < n; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Mat jm = jp.adjoint();
  const cplx i(0, 1);
  const Mat jx = 0.5 * (jp + jm);
  const Mat jy = (jp - jm) / (2.0 * i);
  return {LieElement::unchecked(-i * jx), LieElement::unchecked(-i * jy), LieElement::unchecked(-i * jz)};
}

inline LieElement random_element(const LieAlgebraSpec& spec, std::uint64_t seed, double scale = 1.0) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = spec.rank_n;
  Mat m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = cplx(gauss(rng), gauss(rng));
  return LieElement::unchecked(scale * project_lie(m));
}

// Orthogonal basis of su(N) with Tr(e_a e_b) = -delta_ab / 2. For N = 2 this is
// the principal triple -i sigma_a / 2.
inline std::vector<Mat> su_basis(int n) {
  std::vector<Mat> basis;
  const cplx i(0, 1);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Mat sx = zero_mat(n), sy = zero_mat(n);
      sx(a, b) = sx(b, a) = 1.0;
      sy(a, b) = -i;
      sy(b, a) = i;
      basis.push_back(-0.5 * i * sx);
      basis.push_back(-0.5 * i * sy);
    }
  for (int d = 1; d < n; ++d) {
    Mat h = zero_mat(n);
    const double norm = std::sqrt(2.0 / (d * (d + 1.0)));
    for (int k = 0; k < d; ++k) h(k, k) = norm;
    h(d, d) = -d * norm;
    basis.push_back(-0.5 * i * h);
  }
  return basis;
}

// Real coordinates of x in su_basis(n).
inline std::vector<double> basis_coefficients(const Mat& x) {
  const auto basis = su_basis(static_cast<int>(x.rows()));
  std::vector<double> out;
  out.reserve(basis.size());
  for (const auto& e : basis) out.push_back(-2.0 * (x * e).trace().real());
  return out;
}

// ---------------------------------------------------------------------------
// Matrix fixture text format: "lie N=<n>" then N*N tokens "(re,im)" row-major.
// Shortest round-trip formatting makes the round trip bit-exact.

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw io_error("malformed number '" + std::string(s) + "'");
  return v;
}

inline void write_lie(std::ostream& os, const Mat& m) {
  os << "lie N=" << m.rows() << '\n';
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << '(' << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag()) << ')';
    }
    os << '\n';
  }
}

inline cplx parse_complex_token(std::string_view tok) {
  if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')') throw io_error("malformed complex token");
  tok = tok.substr(1, tok.size() - 2);
  const auto comma = tok.find(',');
  if (comma == std::string_view::npos) throw io_error("malformed complex token");
  return {parse_double(tok.substr(0, comma)), parse_double(tok.substr(comma + 1))};
}

inline Mat read_lie(std::istream& is) {
  std::string header;
  if (!(is >> header) || header != "lie") throw io_error("matrix fixture: expected 'lie' header");
  std::string ntok;
  is >> ntok;
  if (ntok.rfind("N=", 0) != 0) throw io_error("matrix fixture: expected N=<n>");
  const int n = static_cast<int>(parse_double(ntok.substr(2)));
  if (n < 2 || n > kMaxRank) throw io_error("matrix fixture: unsupported N");
  Mat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      std::string tok;
      if (!(is >> tok)) throw io_error("matrix fixture: truncated");
      m(r, c) = parse_complex_token(tok);
    }
  return m;
}

}  // namespace kwg
