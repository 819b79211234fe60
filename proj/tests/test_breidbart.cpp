#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mubex/breidbart.hpp"
#include "test_util.hpp"

using namespace mubex;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt5 = std::sqrt(5.0);

std::vector<std::vector<ComplexVector>> vectors_of(const MubSet& mubs) {
  std::vector<std::vector<ComplexVector>> out(mubs.basis_count());
  for (std::size_t k = 0; k < mubs.basis_count(); ++k)
    for (std::size_t l = 0; l < mubs.dim(); ++l) out[k].push_back(mubs.vector(k, l));
  return out;
}

}  // namespace

TEST(Weights, XValues) {
  EXPECT_NEAR(x_value(2), 0.5 + 1.0 / std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(x_value(2), 0.7886751, 1e-7);
  EXPECT_NEAR(x_value(3), 2.0 / 3, 1e-15);
  EXPECT_NEAR(x_value(4), (kSqrt5 + 3) / (4 * kSqrt5), 1e-15);
  EXPECT_NEAR(x_value(4), 0.25 + 3 / std::sqrt(80.0), 1e-15);
}

TEST(Weights, XRejectsUnsupported) {
  for (std::int64_t n : {0, 1, 6, 12}) {
    try {
      x_value(n);
      FAIL() << n;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::UnsupportedDimension);
    }
  }
}

TEST(Weights, YValues) {
  EXPECT_NEAR(y_value(2, x_value(2)), 0.2113249, 1e-7);
  EXPECT_NEAR(x_value(2) + y_value(2, x_value(2)), 1.0, 1e-15);
  EXPECT_NEAR(y_value(3, x_value(3)), 1.0 / 6, 1e-15);
  for (std::int64_t n : {2, 5, 9}) EXPECT_EQ(y_value(n, 1.0), 0.0);
}

TEST(Weights, OrderingAndUnitTraceIdentity) {
  for (std::int64_t n : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81}) {
    const double x = x_value(n), y = y_value(n, x);
    EXPECT_GT(x, y);
    EXPECT_GT(y, 0.0);
    const double dn = static_cast<double>(n);
    EXPECT_NEAR((dn + 1) * (x + (dn - 1) * y) - dn, 1.0, 1e-14 * dn);
  }
}

TEST(Intermediate, QubitOperatorsExact) {
  const auto mubs = build_mub_set(2, Labeling::Frobenius);
  const auto sol = solve_breidbart(mubs);
  const double s = 1.0 / (2 * kSqrt3);
  const ComplexMatrix e0(2, {s * (kSqrt3 + 1), s * Complex{1, 1}, s * Complex{1, -1}, s * (kSqrt3 - 1)});
  const ComplexMatrix e1(2, {s * (kSqrt3 - 1), s * Complex{-1, -1}, s * Complex{-1, 1}, s * (kSqrt3 + 1)});
  EXPECT_LT(max_abs_diff(sol.operators[0].matrix(), e0), 1e-12);
  EXPECT_LT(max_abs_diff(sol.operators[1].matrix(), e1), 1e-12);
}

TEST(Intermediate, QubitStandardLabelingIsConjugate) {
  const auto std_sol = solve_breidbart(build_mub_set(2));
  const auto frob_sol = solve_breidbart(build_mub_set(2, Labeling::Frobenius));
  for (std::size_t n = 0; n < 2; ++n) {
    const auto& a = std_sol.operators[n].matrix();
    const auto& b = frob_sol.operators[n].matrix();
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) EXPECT_LT(std::abs(a(r, c) - std::conj(b(r, c))), 1e-12);
  }
}

TEST(Intermediate, QubitOperatorsAreProjectors) {
  for (auto lab : {Labeling::Standard, Labeling::Frobenius}) {
    const auto sol = solve_breidbart(build_mub_set(2, lab));
    EXPECT_TRUE(sol.physical);
    for (std::size_t n = 0; n < 2; ++n) {
      const auto& r = sol.operators[n].matrix();
      EXPECT_LT(max_abs_diff(r * r, r), 1e-10);
      EXPECT_NEAR(sol.spectra[n].values[0], 0.0, 1e-10);
      EXPECT_NEAR(sol.spectra[n].values[1], 1.0, 1e-10);
    }
  }
}

TEST(Intermediate, QutritOperatorsExact) {
  const auto sol = solve_breidbart(build_mub_set(3, Labeling::Frobenius));
  const Complex w{-0.25, kSqrt3 / 4};
  const ComplexMatrix e0(3, {4.0 / 6, 0, 0, 0, 1.0 / 6, 3.0 / 6, 0, 3.0 / 6, 1.0 / 6});
  const ComplexMatrix e1(3, {1.0 / 6, 0, 0, 0, 2.0 / 3, w, 0, std::conj(w), 1.0 / 6});
  const ComplexMatrix e2(3, {1.0 / 6, 0, 0, 0, 1.0 / 6, std::conj(w), 0, w, 2.0 / 3});
  EXPECT_LT(max_abs_diff(sol.operators[0].matrix(), e0), 1e-12);
  EXPECT_LT(max_abs_diff(sol.operators[1].matrix(), e1), 1e-12);
  EXPECT_LT(max_abs_diff(sol.operators[2].matrix(), e2), 1e-12);
}

TEST(Intermediate, QutritSpectra) {
  for (auto lab : {Labeling::Standard, Labeling::Frobenius}) {
    const auto mubs = build_mub_set(3, lab);
    const auto sol = solve_breidbart(mubs);
    EXPECT_FALSE(sol.physical);
    const auto& s0 = sol.spectra[0].values;
    EXPECT_NEAR(s0[0], -1.0 / 3, 1e-9);
    EXPECT_NEAR(s0[1], 2.0 / 3, 1e-9);
    EXPECT_NEAR(s0[2], 2.0 / 3, 1e-9);
    for (std::size_t n : {1u, 2u}) {
      const auto& s = sol.spectra[n].values;
      EXPECT_NEAR(s[0], (5 - 3 * kSqrt5) / 12, 1e-9);
      EXPECT_NEAR(s[1], 1.0 / 6, 1e-9);
      EXPECT_NEAR(s[2], (5 + 3 * kSqrt5) / 12, 1e-9);
    }
    EXPECT_TRUE(verify_properties(sol, mubs, 1e-10).passed());
  }
}

TEST(Intermediate, QuquartLetterZeroExact) {
  const auto sol = solve_breidbart(build_mub_set(4, Labeling::Frobenius));
  const double s = 1.0 / (2 * kSqrt5);
  const double a = (kSqrt5 + 3) / 2, b = (kSqrt5 - 1) / 2;
  const Complex i{0, 1};
  const ComplexMatrix e0(4, {a, i, 1.0 + i, 0,            //
                             -i, b, 1.0 - i, 0,           //
                             1.0 - i, 1.0 + i, b, 1.0,    //
                             0, 0, 1.0, b});
  EXPECT_LT(max_abs_diff(sol.operators[0].matrix(), e0 * Complex{s, 0}), 1e-12);
  EXPECT_NEAR(sol.operators[0].matrix()(0, 0).real(), x_value(4), 1e-12);
}

TEST(Intermediate, TraceIsOneForAllDimensions) {
  for (auto n : {2, 3, 4, 5, 7, 8, 9}) {
    const auto mubs = build_mub_set(n);
    for (std::size_t l = 0; l < mubs.dim(); ++l)
      EXPECT_NEAR(std::abs(trace(build_intermediate(l, mubs).matrix()) - 1.0), 0.0, 1e-12);
  }
}

TEST(Intermediate, OrderIndependent) {
  std::mt19937_64 rng(41);
  for (auto n : {3, 4, 5, 8}) {
    const auto mubs = build_mub_set(n);
    std::vector<std::size_t> order(mubs.basis_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int t = 0; t < 5; ++t) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t l = 0; l < mubs.dim(); ++l)
        EXPECT_LT(max_abs_diff(build_intermediate(l, mubs, order).matrix(), build_intermediate(l, mubs).matrix()),
                  1e-10);
    }
  }
}

TEST(Intermediate, LetterOutOfRange) {
  const auto mubs = build_mub_set(3);
  try {
    build_intermediate(3, mubs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IndexOutOfRange);
  }
}

TEST(Properties, HoldInEveryDimension) {
  for (auto lab : {Labeling::Standard, Labeling::Frobenius}) {
    for (auto n : {2, 3, 4, 5, 7, 8, 9}) {
      const auto mubs = build_mub_set(n, lab);
      const auto sol = solve_breidbart(mubs);
      const auto rep = verify_properties(sol, mubs, 1e-10);
      EXPECT_TRUE(rep.passed()) << n << " weight=" << rep.correct_weight_dev << " off=" << rep.off_letter_dev
                                << " trace=" << rep.unit_trace_dev << " gram=" << rep.orthonormality_dev;
    }
  }
}

TEST(Properties, PerturbationDetected) {
  const auto mubs = build_mub_set(3);
  auto sol = solve_breidbart(mubs);
  ComplexMatrix m = sol.operators[1].matrix();
  m(0, 0) += 0.01;
  sol.operators[1] = HermitianOperator(m);
  const auto rep = verify_properties(sol, mubs, 1e-10);
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.unit_trace_ok());
}

TEST(Verdict, NegativeEigenvalueCounts) {
  EXPECT_TRUE(physicality_verdict(solve_breidbart(build_mub_set(2))).physical);
  const auto v3 = physicality_verdict(solve_breidbart(build_mub_set(3)));
  EXPECT_FALSE(v3.physical);
  EXPECT_EQ(v3.negative_counts, (std::vector<int>{1, 1, 1}));
  const auto v4 = physicality_verdict(solve_breidbart(build_mub_set(4, Labeling::Frobenius)));
  EXPECT_FALSE(v4.physical);
  EXPECT_EQ(v4.negative_counts, (std::vector<int>{1, 1, 1, 1}));
  for (const auto& s : v4.spectra) {
    EXPECT_EQ(std::count_if(s.values.begin(), s.values.end(), [](double e) { return e < -1e-6; }), 1);
  }
  // the spectra depend on the labeling; the standard labeling gives two
  // negative eigenvalues for letters 1 and 3
  const auto v4s = physicality_verdict(solve_breidbart(build_mub_set(4)));
  EXPECT_FALSE(v4s.physical);
  EXPECT_EQ(v4s.negative_counts, (std::vector<int>{1, 2, 1, 2}));
}

TEST(Guess, Probabilities) {
  const auto g2 = guess_probabilities(2);
  EXPECT_NEAR(g2.breidbart, 0.78868, 1e-5);
  EXPECT_NEAR(g2.intercept_resend, 2.0 / 3, 1e-12);
  EXPECT_NEAR(guess_probabilities(3).intercept_resend, 0.5, 1e-15);
  // 1/25 + sqrt(1/625 + 22/650) evaluated by hand
  EXPECT_NEAR(guess_probabilities(25).breidbart, 0.2282715, 1e-7);
  for (std::int64_t n : {25, 49, 81}) {
    const double r = 1.0 / std::sqrt(static_cast<double>(n));
    EXPECT_GT(guess_probabilities(n).breidbart, r);
    EXPECT_LT(guess_probabilities(n).breidbart, r + 1.0 / n);
  }
  for (std::int64_t n : {2, 3, 4, 5, 7, 8, 9, 16, 25, 27})
    EXPECT_GT(guess_probabilities(n).breidbart, guess_probabilities(n).intercept_resend) << n;
  EXPECT_THROW(guess_probabilities(6), Error);
}

TEST(Guess, InterceptResendMatchesSimulation) {
  for (std::int64_t n : {2, 3}) {
    const auto mubs = build_mub_set(n);
    const double mc = testutil::intercept_resend_monte_carlo(vectors_of(mubs), 1'000'000, 42 + n);
    // binomial standard error at 1e6 trials is below 5e-4
    EXPECT_NEAR(mc, guess_probabilities(n).intercept_resend, 2.5e-3) << n;
  }
}

TEST(Scan, Verdicts) {
  const std::vector<std::int64_t> dims{2, 3, 4};
  const auto rows = conjecture_scan(dims);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].physical);
  EXPECT_FALSE(rows[1].physical);
  EXPECT_FALSE(rows[2].physical);
  const std::vector<std::int64_t> bad{2, 6};
  EXPECT_THROW(conjecture_scan(bad), Error);
}
