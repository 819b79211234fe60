#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mubex/matrix.hpp"
#include "mubex/mub.hpp"
#include "test_util.hpp"

using namespace mubex;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt5 = std::sqrt(5.0);

ComplexMatrix qutrit_letter0() {
  return ComplexMatrix(3, {4.0 / 6, 0, 0, 0, 1.0 / 6, 3.0 / 6, 0, 3.0 / 6, 1.0 / 6});
}

ComplexMatrix qutrit_letter1() {
  const Complex w{-0.25, kSqrt3 / 4};
  return ComplexMatrix(3, {1.0 / 6, 0, 0, 0, 2.0 / 3, w, 0, std::conj(w), 1.0 / 6});
}

}  // namespace

TEST(Trace, Examples) {
  EXPECT_EQ(trace(ComplexMatrix::identity(3)), Complex(3.0, 0.0));
  EXPECT_EQ(trace(ComplexMatrix(4)), Complex(0.0, 0.0));
  EXPECT_NEAR(std::abs(trace(qutrit_letter0()) - 1.0), 0.0, 1e-15);
}

TEST(FrobeniusInner, Examples) {
  EXPECT_EQ(frobenius_inner(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), Complex(2.0, 0.0));
  const auto mubs = build_mub_set(5);
  for (std::size_t k = 0; k < mubs.basis_count(); ++k) {
    const auto pk = mubs.projector(k, 1);
    EXPECT_NEAR(std::abs(frobenius_inner(pk, pk) - 1.0), 0.0, 1e-12);
    for (std::size_t m = 0; m < mubs.basis_count(); ++m) {
      if (m == k) continue;
      const auto g = frobenius_inner(pk, mubs.projector(m, 3));
      EXPECT_NEAR(g.real(), 0.2, 1e-12);
      EXPECT_LT(std::abs(g.imag()), 1e-12);
    }
  }
  EXPECT_THROW(frobenius_inner(ComplexMatrix(2), ComplexMatrix(3)), Error);
}

TEST(Hermitian, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::identity(2);
  m(0, 1) = {0.0, 1.0};
  try {
    HermitianOperator h(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotHermitian);
  }
  m(1, 0) = {0.0, -1.0};
  EXPECT_NO_THROW(HermitianOperator h(m));
}

TEST(Eigen, Identity) {
  const auto s = hermitian_eigen(HermitianOperator(ComplexMatrix::identity(4)));
  for (double v : s.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Eigen, QutritOperators) {
  auto s = hermitian_eigen(HermitianOperator(qutrit_letter0()));
  EXPECT_NEAR(s.values[0], -1.0 / 3, 1e-12);
  EXPECT_NEAR(s.values[1], 2.0 / 3, 1e-12);
  EXPECT_NEAR(s.values[2], 2.0 / 3, 1e-12);
  s = hermitian_eigen(HermitianOperator(qutrit_letter1()));
  EXPECT_NEAR(s.values[0], (5 - 3 * kSqrt5) / 12, 1e-12);
  EXPECT_NEAR(s.values[1], 1.0 / 6, 1e-12);
  EXPECT_NEAR(s.values[2], (5 + 3 * kSqrt5) / 12, 1e-12);
}

TEST(Eigen, MatchesCharacteristicPolynomialRoots) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto h2 = testutil::random_hermitian(2, rng);
    const auto e2 = testutil::eig2(h2);
    const auto s2 = hermitian_eigen(HermitianOperator(h2));
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(s2.values[i], e2[i], 1e-10);
    const auto h3 = testutil::random_hermitian(3, rng);
    const auto e3 = testutil::eig3(h3);
    const auto s3 = hermitian_eigen(HermitianOperator(h3));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(s3.values[i], e3[i], 1e-10);
  }
}

TEST(Eigen, VectorsReconstruct) {
  std::mt19937_64 rng(12);
  for (std::size_t n : {2u, 4u, 7u, 9u, 16u}) {
    const auto h = testutil::random_hermitian(n, rng);
    const auto s = hermitian_eigen(HermitianOperator(h), EigenOptions{.want_vectors = true});
    ASSERT_TRUE(s.vectors.has_value());
    const auto& v = *s.vectors;
    ComplexMatrix lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = s.values[i];
    EXPECT_LT(max_abs_diff(v * lambda * v.adjoint(), h), 1e-9);
    EXPECT_LT(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(n)), 1e-10);
  }
}

TEST(Eigen, TraceAndUnitaryInvariance) {
  std::mt19937_64 rng(13);
  for (auto n : {3, 4, 5, 8, 9}) {
    const auto mubs = build_mub_set(n);
    const auto h = testutil::random_hermitian(static_cast<std::size_t>(n), rng);
    const auto s = hermitian_eigen(HermitianOperator(h));
    double sum = 0.0;
    for (double v : s.values) sum += v;
    EXPECT_NEAR(sum, trace(h).real(), 1e-10);
    for (std::size_t k = 1; k < mubs.basis_count(); ++k) {
      const auto& u = mubs.basis(k);
      const auto rotated = HermitianOperator::hermitian_part(u.adjoint() * h * u);
      const auto sr = hermitian_eigen(rotated);
      for (std::size_t i = 0; i < s.values.size(); ++i) EXPECT_NEAR(sr.values[i], s.values[i], 1e-9);
    }
  }
}

TEST(Eigen, SweepCapReportsNoConvergence) {
  std::mt19937_64 rng(14);
  const auto h = testutil::random_hermitian(8, rng);
  try {
    hermitian_eigen(HermitianOperator(h), EigenOptions{.tol = 1e-12, .max_sweeps = 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoConvergence);
  }
}

TEST(Decompose, Examples) {
  std::mt19937_64 rng(15);
  const auto h = testutil::random_hermitian(3, rng);
  auto [plus, minus] = hermitian_decompose(h);
  EXPECT_LT(max_abs_diff(plus.matrix(), h * Complex{2.0, 0.0}), 1e-15);
  EXPECT_LT(frobenius_norm(minus.matrix()), 1e-15);

  const auto i1 = ComplexMatrix::identity(2) * Complex{0.0, 1.0};
  auto [p2, m2] = hermitian_decompose(i1);
  EXPECT_LT(frobenius_norm(p2.matrix()), 1e-15);
  EXPECT_LT(max_abs_diff(m2.matrix(), ComplexMatrix::identity(2) * Complex{-2.0, 0.0}), 1e-15);

  for (int t = 0; t < 50; ++t) {
    const auto o = testutil::random_complex(4, rng);
    auto [a, b] = hermitian_decompose(o);
    const auto back = (a.matrix() - b.matrix() * Complex{0.0, 1.0}) * Complex{0.5, 0.0};
    EXPECT_LT(max_abs_diff(back, o), 1e-15);
  }
}

TEST(Products, OuterAndInner) {
  const ComplexVector a{{1, 0}, {0, 1}};
  const ComplexVector b{{0, 1}, {2, 0}};
  EXPECT_EQ(inner(a, b), testutil::dot(a, b));
  const auto o = ComplexMatrix::outer(a, b);
  EXPECT_EQ(o(1, 0), a[1] * std::conj(b[0]));
  EXPECT_EQ(expectation(ComplexMatrix::identity(2), a), Complex(2.0, 0.0));
}
