#pragma once

// Sub-ensemble state tomography: M copies are split evenly across the N+1
// complementary measurements, the frequencies estimate the expansion
// coefficients and the expansion is summed back into an operator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mubex/error.hpp"
#include "mubex/expansion.hpp"
#include "mubex/matrix.hpp"
#include "mubex/mub.hpp"

namespace mubex {

inline constexpr double kStateTraceTolerance = 1e-12;
inline constexpr double kStatePositivityTolerance = -1e-10;

/// Name recorded in output metadata. Each basis draws from its own
/// mt19937_64 stream seeded with splitmix64(seed ^ splitmix64(k)); uniforms
/// are the top 53 bits scaled to [0, 1) and outcomes use the inverse CDF.
inline constexpr std::string_view kSamplerName = "mt19937_64/splitmix64-substream/inverse-cdf";

class DensityOperator {
 public:
  explicit DensityOperator(HermitianOperator op) : op_(std::move(op)) {
    const Complex tr = trace(op_.matrix());
    if (std::abs(tr - 1.0) > kStateTraceTolerance) {
      throw Error(Errc::NotAState, "trace " + std::to_string(tr.real()) + " differs from 1");
    }
    const double lo = hermitian_eigen(op_).values.front();
    if (lo < kStatePositivityTolerance) {
      throw Error(Errc::NotAState, "negative eigenvalue " + std::to_string(lo));
    }
  }
  explicit DensityOperator(const ComplexMatrix& m) : DensityOperator(HermitianOperator(m)) {}

  static DensityOperator pure(std::span<const Complex> psi) {
    double norm2 = 0.0;
    for (const auto& c : psi) norm2 += std::norm(c);
    if (norm2 == 0.0) throw Error(Errc::NotAState, "zero state vector");
    ComplexMatrix p = ComplexMatrix::projector(psi);
    p *= Complex{1.0 / norm2, 0.0};
    return DensityOperator(HermitianOperator::hermitian_part(p));
  }

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  std::size_t dim() const { return op_.dim(); }

 private:
  HermitianOperator op_;
};

struct MeasurementRecord {
  std::size_t basis = 0;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t seed = 0;

  bool operator==(const MeasurementRecord&) const = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64(seed ^ splitmix64(k));
}

}  // namespace detail

/// Born probabilities Tr{rho_kl rho} for one basis, clamped at zero and
/// normalised.
inline std::vector<double> outcome_probabilities(const DensityOperator& state, const MubSet& mubs,
                                                 std::size_t k) {
  std::vector<double> probs(mubs.dim());
  double total = 0.0;
  for (std::size_t l = 0; l < mubs.dim(); ++l) {
    probs[l] = std::max(0.0, expectation(state.matrix(), mubs.vector(k, l)).real());
    total += probs[l];
  }
  for (auto& p : probs) p /= total;
  return probs;
}

inline std::vector<MeasurementRecord> simulate_measurements(const DensityOperator& state, const MubSet& mubs,
                                                            std::uint64_t total_shots, std::uint64_t seed) {
  detail::require_dims(state.dim(), mubs);
  const std::uint64_t bases = mubs.basis_count();
  if (total_shots < bases) {
    throw Error(Errc::InvalidArgument, "need at least " + std::to_string(bases) + " shots, got " +
                                           std::to_string(total_shots));
  }
  const std::uint64_t share = total_shots / bases;
  const std::uint64_t extra = total_shots % bases;
  std::vector<MeasurementRecord> records;
  records.reserve(bases);
  for (std::uint64_t k = 0; k < bases; ++k) {
    MeasurementRecord rec;
    rec.basis = k;
    rec.shots = share + (k < extra ? 1 : 0);
    rec.seed = seed;
    rec.counts.assign(mubs.dim(), 0);

    const auto probs = outcome_probabilities(state, mubs, k);
    std::vector<double> cdf(probs.size());
    double run = 0.0;
    for (std::size_t l = 0; l < probs.size(); ++l) cdf[l] = run += probs[l];
    cdf.back() = 1.0;

    std::mt19937_64 rng(detail::substream_seed(seed, k));
    for (std::uint64_t s = 0; s < rec.shots; ++s) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      ++rec.counts[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                                     static_cast<std::ptrdiff_t>(cdf.size()) - 1))];
    }
    records.push_back(std::move(rec));
  }
  return records;
}

/// Frequency table of the records; exactly one record per basis is required.
inline CoefficientTable frequency_table(std::span<const MeasurementRecord> records, const MubSet& mubs) {
  std::vector<const MeasurementRecord*> by_basis(mubs.basis_count(), nullptr);
  for (const auto& rec : records) {
    mubs.check_basis(rec.basis);
    if (rec.counts.size() != mubs.dim()) {
      throw Error(Errc::DimensionMismatch, "record for basis " + std::to_string(rec.basis) + " has " +
                                               std::to_string(rec.counts.size()) + " outcomes");
    }
    if (by_basis[rec.basis] != nullptr) {
      throw Error(Errc::InvalidArgument, "duplicate record for basis " + std::to_string(rec.basis));
    }
    std::uint64_t sum = 0;
    for (auto c : rec.counts) sum += c;
    if (sum != rec.shots || rec.shots == 0) {
      throw Error(Errc::InvalidArgument, "record for basis " + std::to_string(rec.basis) +
                                             " has counts inconsistent with its shot number");
    }
    by_basis[rec.basis] = &rec;
  }
  CoefficientTable table(mubs.dim(), 1.0);
  for (std::size_t k = 0; k < by_basis.size(); ++k) {
    if (by_basis[k] == nullptr) throw Error(Errc::MissingBasis, "no record for basis " + std::to_string(k));
    const auto shots = static_cast<double>(by_basis[k]->shots);
    for (std::size_t l = 0; l < mubs.dim(); ++l) table(k, l) = static_cast<double>(by_basis[k]->counts[l]) / shots;
  }
  return table;
}

/// sum_kl f_kl rho_kl - 1 with f_kl the observed frequencies. Hermitian with
/// unit trace; positivity is not enforced.
inline HermitianOperator estimate_state(std::span<const MeasurementRecord> records, const MubSet& mubs) {
  return reconstruct(frequency_table(records, mubs), mubs);
}

/// Post-processing: drop negative eigenvalues and renormalise the trace.
inline DensityOperator clip_to_state(const HermitianOperator& estimate) {
  const auto spec = hermitian_eigen(estimate, EigenOptions{.want_vectors = true});
  const auto& vecs = *spec.vectors;
  double total = 0.0;
  for (double e : spec.values) total += std::max(0.0, e);
  if (total <= 0.0) throw Error(Errc::NotAState, "estimate has no positive part");
  ComplexMatrix out(estimate.dim());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double w = std::max(0.0, spec.values[i]) / total;
    if (w > 0.0) out.add_scaled(w, ComplexMatrix::projector(vecs.column(i)));
  }
  return DensityOperator(HermitianOperator::hermitian_part(out));
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return frobenius_norm(a - b);
}

struct ScalingPoint {
  std::uint64_t shots = 0;
  double mean_error = 0.0;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double slope = 0.0;  // least-squares slope of log(error) against log(shots)
};

/// Mean Frobenius error over `repetitions` runs per shot number; run r uses
/// seed + r.
inline ScalingReport error_scaling(const DensityOperator& state, const MubSet& mubs,
                                   std::span<const std::uint64_t> shot_list, std::uint64_t seed,
                                   std::size_t repetitions) {
  if (shot_list.size() < 2 || repetitions == 0) {
    throw Error(Errc::InvalidArgument, "need at least two shot numbers and one repetition");
  }
  ScalingReport rep;
  for (auto m : shot_list) {
    double sum = 0.0;
    for (std::size_t r = 0; r < repetitions; ++r) {
      const auto recs = simulate_measurements(state, mubs, m, seed + r);
      sum += frobenius_distance(estimate_state(recs, mubs).matrix(), state.matrix());
    }
    rep.points.push_back({m, sum / static_cast<double>(repetitions)});
  }
  double mx = 0.0, my = 0.0;
  for (const auto& p : rep.points) {
    mx += std::log(static_cast<double>(p.shots));
    my += std::log(p.mean_error);
  }
  mx /= static_cast<double>(rep.points.size());
  my /= static_cast<double>(rep.points.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : rep.points) {
    const double dx = std::log(static_cast<double>(p.shots)) - mx;
    sxy += dx * (std::log(p.mean_error) - my);
    sxx += dx * dx;
  }
  rep.slope = sxy / sxx;
  return rep;
}

}  // namespace mubex
