#pragma once

// Complete sets of N + 1 mutually unbiased (complementary) bases for
// prime-power N.
//
// Basis 0 is the standard basis. Basis k >= 1 is labelled by the field
// element of value k - 1 and its letter l (0-based) by the element of value
// l. For odd p the component at coordinate u is
//     N^{-1/2} exp(+-2 pi i / p * (u^T (k.alpha) u + l^T u)),
// and for p = 2 the quadratic part is lifted to Z4:
//     N^{-1/2} i^{+-(u^T (k.alpha) u + 2 l^T u)}   (exponent mod 4).
// The Z4 lift is a valid quadratic form on GF(2)^m, and because every
// nonzero k.alpha is a nonsingular symmetric matrix the bases are pairwise
// unbiased.
//
// Two labelings are provided:
//   standard  positive phases, coordinate u is the element whose value is u
//             (most significant digit first); for N = 2 the vectors are
//             exactly (1, +-1)/sqrt2 and (1, +-i)/sqrt2 in that order.
//   frobenius negative phases, coordinate u is the element whose digits
//             read least significant first, and in bases labelled by an
//             element outside the prime subfield the letters are relabelled
//             through the Frobenius map l -> l^p.
// Both are complete MUB sets; they differ only in phases and labels, which
// matters for letter-grouping constructions such as the Breidbart operators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "mubex/error.hpp"
#include "mubex/field.hpp"
#include "mubex/matrix.hpp"

namespace mubex {

enum class Labeling { Standard, Frobenius };

inline std::string_view labeling_name(Labeling l) {
  return l == Labeling::Standard ? "standard" : "frobenius";
}

inline Labeling parse_labeling(std::string_view name) {
  if (name == "standard") return Labeling::Standard;
  if (name == "frobenius") return Labeling::Frobenius;
  throw Error(Errc::InvalidArgument, "unknown labeling convention '" + std::string(name) +
                                         "' (expected 'standard' or 'frobenius')");
}

/// N + 1 bases of H_N. Each basis is stored as a unitary whose columns are
/// the basis vectors |psi_kl>. Construction does not verify the
/// complementarity invariants; use verify_complementarity for that.
class MubSet {
 public:
  MubSet(PrimePower pp, std::vector<ComplexMatrix> bases, std::string convention)
      : pp_(pp), bases_(std::move(bases)), convention_(std::move(convention)) {
    const auto n = static_cast<std::size_t>(pp_.n);
    if (bases_.size() != n + 1) {
      throw Error(Errc::DimensionMismatch, "expected " + std::to_string(n + 1) + " bases, got " +
                                               std::to_string(bases_.size()));
    }
    for (const auto& b : bases_) {
      if (b.dim() != n) throw Error(Errc::DimensionMismatch, "basis dimension does not match N");
    }
  }

  const PrimePower& prime_power() const { return pp_; }
  std::size_t dim() const { return static_cast<std::size_t>(pp_.n); }
  std::size_t basis_count() const { return bases_.size(); }
  const std::string& convention() const { return convention_; }

  const ComplexMatrix& basis(std::size_t k) const {
    check_basis(k);
    return bases_[k];
  }

  ComplexVector vector(std::size_t k, std::size_t l) const {
    check_basis(k);
    check_letter(l);
    return bases_[k].column(l);
  }

  ComplexMatrix projector(std::size_t k, std::size_t l) const {
    const auto v = vector(k, l);
    return ComplexMatrix::projector(v);
  }

  void check_basis(std::size_t k) const {
    if (k >= bases_.size()) {
      throw Error(Errc::IndexOutOfRange, "basis index " + std::to_string(k) + " outside [0, " +
                                             std::to_string(bases_.size() - 1) + "]");
    }
  }

  void check_letter(std::size_t l) const {
    if (l >= dim()) {
      throw Error(Errc::IndexOutOfRange, "letter index " + std::to_string(l) + " outside [0, " +
                                             std::to_string(dim() - 1) + "]");
    }
  }

 private:
  PrimePower pp_;
  std::vector<ComplexMatrix> bases_;
  std::string convention_;
};

/// The three qubit bases written out explicitly: standard basis, then
/// (|0> +- |1>)/sqrt2, then (|0> +- i|1>)/sqrt2.
inline MubSet build_qubit_mubs() {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  std::vector<ComplexMatrix> bases;
  bases.push_back(ComplexMatrix::identity(2));
  bases.emplace_back(2, std::vector<Complex>{h, h, h, -h});
  bases.emplace_back(2, std::vector<Complex>{h, h, h * i, -h * i});
  return MubSet(PrimePower{2, 1, 2}, std::move(bases), "explicit-qubit");
}

namespace detail {

inline FieldElement coordinate_element(int position, const GaloisField& field, Labeling labeling) {
  auto e = field.element(position);
  if (labeling == Labeling::Frobenius) std::reverse(e.digits.begin(), e.digits.end());
  return e;
}

inline Complex quarter_turn(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

inline MubSet build_mub_set(const GaloisField& field, Labeling labeling = Labeling::Standard) {
  const PrimePower& pp = field.prime_power();
  const auto n = static_cast<std::size_t>(pp.n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(pp.n));
  const int sign = labeling == Labeling::Standard ? 1 : -1;
  const auto& alpha = field.alpha();

  std::vector<FieldElement> coords;
  coords.reserve(n);
  for (int u = 0; u < pp.n; ++u) coords.push_back(detail::coordinate_element(u, field, labeling));

  std::vector<ComplexMatrix> bases;
  bases.reserve(n + 1);
  bases.push_back(ComplexMatrix::identity(n));
  for (int kv = 0; kv < pp.n; ++kv) {
    const auto k = field.element(kv);
    const auto kk = alpha.contract(k);
    const bool twist = labeling == Labeling::Frobenius && pp.m > 1 && !(field.frobenius(k) == k);
    ComplexMatrix basis(n);
    for (int lv = 0; lv < pp.n; ++lv) {
      const auto l = twist ? field.frobenius(field.element(lv)) : field.element(lv);
      for (std::size_t pos = 0; pos < n; ++pos) {
        const auto& u = coords[pos];
        const std::int64_t quad = alpha.bilinear(u, kk, u);
        const std::int64_t lin = digit_dot(l, u);
        Complex z;
        if (pp.p == 2) {
          z = detail::quarter_turn(sign * detail::mod(quad + 2 * lin, 4));
        } else {
          const int e = detail::mod(quad + lin, pp.p);
          z = std::polar(1.0, sign * 2.0 * std::numbers::pi * e / pp.p);
        }
        basis(pos, static_cast<std::size_t>(lv)) = amp * z;
      }
    }
    bases.push_back(std::move(basis));
  }
  return MubSet(pp, std::move(bases), std::string(labeling_name(labeling)));
}

inline MubSet build_mub_set(const PrimePower& pp, Labeling labeling = Labeling::Standard) {
  return build_mub_set(GaloisField(pp), labeling);
}

inline MubSet build_mub_set(std::int64_t n, Labeling labeling = Labeling::Standard) {
  return build_mub_set(parse_prime_power(n), labeling);
}

struct ComplementarityReport {
  double max_same_basis_dev = 0.0;   // max |<psi_kl|psi_kn> - delta_ln|
  double max_cross_basis_dev = 0.0;  // max ||<psi_kl|psi_mn>|^2 - 1/N|, k != m
  double tol = 0.0;

  bool passed() const { return max_same_basis_dev < tol && max_cross_basis_dev < tol; }
};

inline ComplementarityReport verify_complementarity(const MubSet& mubs, double tol) {
  ComplementarityReport rep;
  rep.tol = tol;
  const std::size_t n = mubs.dim();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < mubs.basis_count(); ++a) {
    const auto ua = mubs.basis(a).adjoint();
    for (std::size_t b = a; b < mubs.basis_count(); ++b) {
      const auto gram = ua * mubs.basis(b);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          if (a == b) {
            const double target = r == c ? 1.0 : 0.0;
            rep.max_same_basis_dev = std::max(rep.max_same_basis_dev, std::abs(gram(r, c) - target));
          } else {
            rep.max_cross_basis_dev = std::max(rep.max_cross_basis_dev, std::abs(std::norm(gram(r, c)) - inv_n));
          }
        }
      }
    }
  }
  return rep;
}

/// sum_{k != m} sum_l <psi_mu|psi_kl><psi_kl|psi_mq><psi_mn|psi_kl><psi_kl|psi_mv>
inline Complex overlap_sum(const MubSet& mubs, std::size_t m, std::size_t u, std::size_t q,
                           std::size_t n, std::size_t v) {
  mubs.check_basis(m);
  for (std::size_t idx : {u, q, n, v}) mubs.check_letter(idx);
  const auto psi_u = mubs.vector(m, u);
  const auto psi_q = mubs.vector(m, q);
  const auto psi_n = mubs.vector(m, n);
  const auto psi_v = mubs.vector(m, v);
  Complex total{};
  for (std::size_t k = 0; k < mubs.basis_count(); ++k) {
    if (k == m) continue;
    for (std::size_t l = 0; l < mubs.dim(); ++l) {
      const auto psi = mubs.vector(k, l);
      total += inner(psi_u, psi) * inner(psi, psi_q) * inner(psi_n, psi) * inner(psi, psi_v);
    }
  }
  return total;
}

/// max over bases of |U^dagger U - 1|.
inline double unitarity_defect(const MubSet& mubs) {
  double worst = 0.0;
  const auto id = ComplexMatrix::identity(mubs.dim());
  for (std::size_t k = 0; k < mubs.basis_count(); ++k) {
    const auto& u = mubs.basis(k);
    worst = std::max(worst, max_abs_diff(u.adjoint() * u, id));
  }
  return worst;
}

}  // namespace mubex
