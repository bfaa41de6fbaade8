#pragma once

// Exact Laurent polynomials with 64-bit integer coefficients.
//
// Keys are integer exponents of the polynomial's step variable. Bracket
// polynomials use A itself; Jones polynomials use q^(1/2), so a key k stands
// for q^(k/2) and half-integer powers of q stay integral.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "kwgauge/error.hpp"

namespace kwg {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw numerical_fault("polynomial coefficient overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw numerical_fault("polynomial coefficient overflow");
  return r;
}

}  // namespace detail

class LaurentPolynomial {
 public:
  using Terms = std::map<int, std::int64_t>;

  LaurentPolynomial() = default;
  LaurentPolynomial(std::int64_t constant) { add(0, constant); }  // NOLINT: integers promote

  static LaurentPolynomial monomial(std::int64_t coeff, int key) {
    LaurentPolynomial p;
    p.add(key, coeff);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::int64_t coeff(int key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? 0 : it->second;
  }
  int min_key() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_key() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  void add(int key, std::int64_t c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(key, c);
    if (!fresh) {
      it->second = detail::checked_add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  LaurentPolynomial& operator-=(const LaurentPolynomial& o) {
    for (const auto& [k, c] : o.terms_) add(k, detail::checked_mul(c, -1));
    return *this;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator-(const LaurentPolynomial& a) { return LaurentPolynomial() - a; }

  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add(ka + kb, detail::checked_mul(ca, cb));
    return out;
  }
  LaurentPolynomial& operator*=(const LaurentPolynomial& o) { return *this = *this * o; }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPolynomial& a, const LaurentPolynomial& b) { return !(a == b); }

  LaurentPolynomial pow(int n) const {
    if (n < 0) throw invalid_argument("LaurentPolynomial::pow: negative exponent");
    LaurentPolynomial out(1), base = *this;
    for (; n; n >>= 1, base *= base)
      if (n & 1) out *= base;
    return out;
  }

  /// x -> x^-1.
  LaurentPolynomial reflected() const {
    LaurentPolynomial out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(-k, c);
    return out;
  }

  /// x -> x^m for a nonzero integer m.
  LaurentPolynomial rescaled(int m) const {
    if (m == 0) throw invalid_argument("LaurentPolynomial::rescaled: zero factor");
    LaurentPolynomial out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k * m, c);
    return out;
  }

  /// Exact quotient; throws if `d` does not divide this polynomial.
  LaurentPolynomial divided_by(const LaurentPolynomial& d) const {
    if (d.is_zero()) throw invalid_argument("LaurentPolynomial: division by zero");
    const int dk = d.max_key();
    const std::int64_t lead = d.coeff(dk);
    LaurentPolynomial rem = *this, quo;
    while (!rem.is_zero()) {
      const int rk = rem.max_key();
      if (rk - dk < rem.min_key() - d.min_key()) break;  // quotient would need more terms than fit
      const std::int64_t rc = rem.coeff(rk);
      if (rc % lead != 0) break;
      const auto step = monomial(rc / lead, rk - dk);
      quo += step;
      rem -= step * d;
    }
    if (!rem.is_zero()) throw numerical_fault("LaurentPolynomial: inexact division");
    return quo;
  }

  /// Human-readable form, e.g. "-q^-4 + q^-3 + q^-1". With `halves` the keys
  /// are printed divided by two ("q^3/2").
  std::string to_string(const std::string& var, bool halves = false) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto [k, c] = *it;
      const std::int64_t mag = c < 0 ? -c : c;
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      first = false;
      if (k == 0) {
        os << mag;
        continue;
      }
      if (mag != 1) os << mag << '*';
      os << var;
      std::string e;
      if (halves && k % 2 != 0) e = std::to_string(k) + "/2";
      else e = std::to_string(halves ? k / 2 : k);
      if (e != "1") os << '^' << e;
    }
    return os.str();
  }

 private:
  Terms terms_;
};

}  // namespace kwg
