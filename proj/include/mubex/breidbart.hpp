#pragma once

// Intermediate (Breidbart) measurement operators for an N-letter, N+1
// basis key distribution protocol. Operator n weights letter n of every
// basis by x and every other letter by y:
//     varrho_n = sum_k ( x rho_kn + y sum_{l != n} rho_kl ) - 1,
// with y = (1 - x)/(N - 1) from unit trace and
//     x = 1/N + sqrt(1/N^2 + (N - 3)/(N (N + 1)))
// from pairwise orthonormality. The operators always satisfy the weight,
// trace and orthonormality conditions; whether they are positive (and so
// a physical measurement) has to be checked from their spectra.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "mubex/error.hpp"
#include "mubex/field.hpp"
#include "mubex/matrix.hpp"
#include "mubex/mub.hpp"

namespace mubex {

inline constexpr double kPhysicalityThreshold = -1e-10;

namespace detail {

inline void require_prime_power(std::int64_t n) {
  try {
    (void)parse_prime_power(n);
  } catch (const Error& e) {
    throw Error(Errc::UnsupportedDimension, e.what());
  }
}

}  // namespace detail

inline double x_value(std::int64_t n) {
  detail::require_prime_power(n);
  const auto dn = static_cast<double>(n);
  return 1.0 / dn + std::sqrt(1.0 / (dn * dn) + (dn - 3.0) / (dn * (dn + 1.0)));
}

inline double y_value(std::int64_t n, double x) {
  if (n < 2) throw Error(Errc::UnsupportedDimension, "dimension must be at least 2");
  if (!(x > 0.0 && x <= 1.0)) throw Error(Errc::InvalidArgument, "x must lie in (0, 1]");
  return (1.0 - x) / static_cast<double>(n - 1);
}

/// Builds varrho_letter, accumulating bases in the given order.
inline HermitianOperator build_intermediate(std::size_t letter, const MubSet& mubs,
                                            std::span<const std::size_t> basis_order) {
  mubs.check_letter(letter);
  if (basis_order.size() != mubs.basis_count()) {
    throw Error(Errc::InvalidArgument, "basis order must list every basis once");
  }
  const auto n = static_cast<std::int64_t>(mubs.dim());
  const double x = x_value(n);
  const double y = y_value(n, x);
  ComplexMatrix out = ComplexMatrix::identity(mubs.dim()) * Complex{-1.0, 0.0};
  for (std::size_t k : basis_order) {
    for (std::size_t l = 0; l < mubs.dim(); ++l) out.add_scaled(l == letter ? x : y, mubs.projector(k, l));
  }
  return HermitianOperator::hermitian_part(out);
}

inline HermitianOperator build_intermediate(std::size_t letter, const MubSet& mubs) {
  std::vector<std::size_t> order(mubs.basis_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return build_intermediate(letter, mubs, order);
}

struct BreidbartSolution {
  std::size_t dim = 0;
  double x = 0.0;
  double y = 0.0;
  std::vector<HermitianOperator> operators;
  std::vector<Spectrum> spectra;
  bool physical = false;
};

inline BreidbartSolution solve_breidbart(const MubSet& mubs) {
  BreidbartSolution sol;
  sol.dim = mubs.dim();
  sol.x = x_value(static_cast<std::int64_t>(sol.dim));
  sol.y = y_value(static_cast<std::int64_t>(sol.dim), sol.x);
  sol.physical = true;
  for (std::size_t n = 0; n < sol.dim; ++n) {
    sol.operators.push_back(build_intermediate(n, mubs));
    sol.spectra.push_back(hermitian_eigen(sol.operators.back()));
    sol.physical = sol.physical && sol.spectra.back().values.front() >= kPhysicalityThreshold;
  }
  return sol;
}

/// Maximum deviations for the four defining conditions:
///   correct_weight  Tr{varrho_n rho_kn} = x for every basis k
///   off_letter      Tr{varrho_n rho_kl} = y for every k and l != n
///   unit_trace      Tr{varrho_n} = 1
///   orthonormality  Tr{varrho_l varrho_n} = delta_ln
struct PropertyReport {
  double correct_weight_dev = 0.0;
  double off_letter_dev = 0.0;
  double unit_trace_dev = 0.0;
  double orthonormality_dev = 0.0;
  double tol = 0.0;

  bool correct_weight_ok() const { return correct_weight_dev < tol; }
  bool off_letter_ok() const { return off_letter_dev < tol; }
  bool unit_trace_ok() const { return unit_trace_dev < tol; }
  bool orthonormality_ok() const { return orthonormality_dev < tol; }
  bool passed() const {
    return correct_weight_ok() && off_letter_ok() && unit_trace_ok() && orthonormality_ok();
  }
};

inline PropertyReport verify_properties(const BreidbartSolution& sol, const MubSet& mubs,
                                        double tol = 1e-10) {
  if (sol.operators.size() != mubs.dim()) {
    throw Error(Errc::DimensionMismatch, "solution and basis set dimensions differ");
  }
  PropertyReport rep;
  rep.tol = tol;
  for (std::size_t n = 0; n < sol.operators.size(); ++n) {
    const auto& op = sol.operators[n].matrix();
    for (std::size_t k = 0; k < mubs.basis_count(); ++k) {
      for (std::size_t l = 0; l < mubs.dim(); ++l) {
        const Complex w = expectation(op, mubs.vector(k, l));
        const double target = l == n ? sol.x : sol.y;
        const double dev = std::abs(w - target);
        if (l == n)
          rep.correct_weight_dev = std::max(rep.correct_weight_dev, dev);
        else
          rep.off_letter_dev = std::max(rep.off_letter_dev, dev);
      }
    }
    rep.unit_trace_dev = std::max(rep.unit_trace_dev, std::abs(trace(op) - 1.0));
    for (std::size_t m = 0; m < sol.operators.size(); ++m) {
      const Complex g = frobenius_inner(op, sol.operators[m].matrix());
      rep.orthonormality_dev = std::max(rep.orthonormality_dev, std::abs(g - (m == n ? 1.0 : 0.0)));
    }
  }
  return rep;
}

struct Verdict {
  bool physical = false;
  double min_eigenvalue = 0.0;
  std::vector<int> negative_counts;  // eigenvalues below the threshold, per operator
  std::vector<Spectrum> spectra;
};

inline Verdict physicality_verdict(const BreidbartSolution& sol, double threshold = kPhysicalityThreshold) {
  Verdict v;
  v.physical = true;
  v.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& op : sol.operators) {
    auto spec = hermitian_eigen(op);
    const auto negatives = std::count_if(spec.values.begin(), spec.values.end(),
                                         [&](double e) { return e < threshold; });
    v.negative_counts.push_back(static_cast<int>(negatives));
    v.min_eigenvalue = std::min(v.min_eigenvalue, spec.values.front());
    v.physical = v.physical && negatives == 0;
    v.spectra.push_back(std::move(spec));
  }
  return v;
}

struct GuessProbabilities {
  double breidbart = 0.0;
  double intercept_resend = 0.0;
};

/// Probability that the eavesdropper names the sent letter: x for the
/// intermediate measurement; 1/(N+1) * 1 + N/(N+1) * 1/N = 2/(N+1) for
/// measuring in a random protocol basis.
inline GuessProbabilities guess_probabilities(std::int64_t n) {
  return {x_value(n), 2.0 / static_cast<double>(n + 1)};
}

struct ScanRow {
  std::int64_t dim = 0;
  double x = 0.0;
  double min_eigenvalue = 0.0;
  int max_negative_count = 0;
  bool physical = false;
};

inline std::vector<ScanRow> conjecture_scan(std::span<const std::int64_t> dims,
                                            Labeling labeling = Labeling::Standard) {
  std::vector<ScanRow> rows;
  for (std::int64_t n : dims) {
    detail::require_prime_power(n);
    const auto mubs = build_mub_set(n, labeling);
    const auto sol = solve_breidbart(mubs);
    const auto verdict = physicality_verdict(sol);
    ScanRow row;
    row.dim = n;
    row.x = sol.x;
    row.min_eigenvalue = verdict.min_eigenvalue;
    row.max_negative_count = *std::max_element(verdict.negative_counts.begin(), verdict.negative_counts.end());
    row.physical = verdict.physical;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mubex
