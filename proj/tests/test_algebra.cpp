#include <gtest/gtest.h>

#include <sstream>

#include "kwgauge/algebra.hpp"

using namespace kwg;

namespace {

double residual(const Mat& a, const Mat& b) { return (a - b).norm(); }

}  // namespace

TEST(Algebra, BracketOfElementWithItselfVanishes) {
  const auto x = random_element(LieAlgebraSpec(3), 11);
  EXPECT_EQ(bracket(x, x).norm(), 0.0);
}

TEST(Algebra, JacobiIdentity) {
  for (int n = 2; n <= 6; ++n) {
    const LieAlgebraSpec spec(n);
    const auto x = random_element(spec, 1), y = random_element(spec, 2), z = random_element(spec, 3);
    const auto jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    EXPECT_LE(jac.norm(), 1e-12) << "N=" << n;
    EXPECT_TRUE(is_lie(bracket(x, y).matrix()));
  }
}

TEST(Algebra, BracketRejectsDimensionMismatch) {
  EXPECT_THROW(bracket(random_element(LieAlgebraSpec(2), 1), random_element(LieAlgebraSpec(3), 1)), Error);
  EXPECT_THROW(trace_form(random_element(LieAlgebraSpec(2), 1), random_element(LieAlgebraSpec(3), 1)), Error);
}

TEST(Algebra, TraceFormConventions) {
  const auto t = principal_triple(LieAlgebraSpec(2));
  // t3 = -(i/2) sigma_3: t3^2 = -1/4 * identity, trace -1/2.
  EXPECT_NEAR(trace_form(t.t3, t.t3), -0.5, 1e-15);
  const auto x = random_element(LieAlgebraSpec(4), 5), y = random_element(LieAlgebraSpec(4), 6);
  EXPECT_DOUBLE_EQ(trace_form(x, y), trace_form(y, x));
}

TEST(Algebra, TraceFormIsNegativeDefinite) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = random_element(LieAlgebraSpec(2 + seed % 5), seed);
    EXPECT_LE(trace_form(x, x), -1e-12 * x.norm() * x.norm());
  }
}

TEST(Algebra, SU2TripleIsPauliBasis) {
  const auto t = principal_triple(LieAlgebraSpec(2));
  const cplx i(0, 1);
  Mat s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  EXPECT_LE(residual(t.t1.matrix(), -0.5 * i * s1), 1e-15);
  EXPECT_LE(residual(t.t2.matrix(), -0.5 * i * s2), 1e-15);
  EXPECT_LE(residual(t.t3.matrix(), -0.5 * i * s3), 1e-15);
}

TEST(Algebra, PrincipalTripleRelationsAndCasimir) {
  for (int n = 2; n <= 6; ++n) {
    const auto t = principal_triple(LieAlgebraSpec(n));
    EXPECT_LE(residual(bracket(t.t1, t.t2).matrix(), t.t3.matrix()), 1e-12) << n;
    EXPECT_LE(residual(bracket(t.t2, t.t3).matrix(), t.t1.matrix()), 1e-12) << n;
    EXPECT_LE(residual(bracket(t.t3, t.t1).matrix(), t.t2.matrix()), 1e-12) << n;
    for (int a = 0; a < 3; ++a) EXPECT_TRUE(is_lie(t[a].matrix())) << n;
    const Mat casimir = t.t1.matrix() * t.t1.matrix() + t.t2.matrix() * t.t2.matrix() + t.t3.matrix() * t.t3.matrix();
    EXPECT_LE(residual(casimir, -(n * n - 1) / 4.0 * identity_mat(n)), 1e-12) << n;
  }
}

TEST(Algebra, RandomElementDeterminism) {
  const LieAlgebraSpec spec(3);
  const auto a = random_element(spec, 42), b = random_element(spec, 42), c = random_element(spec, 43);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_LE(lie_defect(a.matrix()), 1e-15);
}

TEST(Algebra, LieElementValidatesInvariants) {
  Mat m = identity_mat(2);
  EXPECT_THROW(LieElement{m}, Error);
  EXPECT_THROW(LieAlgebraSpec(1), Error);
}

TEST(Algebra, BasisCoefficientsReconstruct) {
  for (int n = 2; n <= 5; ++n) {
    const auto x = random_element(LieAlgebraSpec(n), 9).matrix();
    const auto coeff = basis_coefficients(x);
    const auto basis = su_basis(n);
    ASSERT_EQ(coeff.size(), static_cast<std::size_t>(n * n - 1));
    Mat back = zero_mat(n);
    for (std::size_t a = 0; a < basis.size(); ++a) back += coeff[a] * basis[a];
    EXPECT_LE(residual(back, x), 1e-13);
  }
  const auto t = principal_triple(LieAlgebraSpec(2));
  const auto c = basis_coefficients(t.t2.matrix());
  EXPECT_NEAR(c[0], 0.0, 1e-15);
  EXPECT_NEAR(c[1], 1.0, 1e-15);
  EXPECT_NEAR(c[2], 0.0, 1e-15);
}

TEST(Algebra, MatrixFixtureRoundTripIsBitExact) {
  const auto x = random_element(LieAlgebraSpec(4), 77).matrix();
  std::stringstream ss;
  write_lie(ss, x);
  EXPECT_EQ(ss.str().rfind("lie N=4\n", 0), 0u);
  const Mat y = read_lie(ss);
  EXPECT_TRUE(x == y);
}

TEST(Algebra, MatrixFixtureRejectsGarbage) {
  std::stringstream ss("lie N=2\n(1,0) (0,0) (oops,0) (1,0)\n");
  EXPECT_THROW(read_lie(ss), Error);
  std::stringstream ss2("matrix N=2");
  EXPECT_THROW(read_lie(ss2), Error);
}
