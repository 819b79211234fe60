#pragma once

// Expectation-value expansion of operators over a complete MUB set:
//     O = sum_{k=0}^{N} sum_l Tr{rho_kl O} rho_kl - Tr{O} 1.
// For Hermitian O every coefficient is real.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mubex/error.hpp"
#include "mubex/matrix.hpp"
#include "mubex/mub.hpp"

namespace mubex {

inline constexpr double kImaginaryResidueTolerance = 1e-12;
inline constexpr double kRowConsistencyTolerance = 1e-8;

/// (N+1) x N real coefficients c_kl = Tr{rho_kl O} and Tr{O}.
class CoefficientTable {
 public:
  CoefficientTable() = default;
  CoefficientTable(std::size_t dim, double trace)
      : dim_(dim), trace_(trace), values_((dim + 1) * dim, 0.0) {}
  CoefficientTable(std::size_t dim, double trace, std::vector<double> row_major)
      : dim_(dim), trace_(trace), values_(std::move(row_major)) {
    if (values_.size() != (dim_ + 1) * dim_) {
      throw Error(Errc::DimensionMismatch, "coefficient table needs (N+1)*N entries");
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ + 1; }
  double trace() const { return trace_; }
  void set_trace(double t) { trace_ = t; }

  double& operator()(std::size_t k, std::size_t l) { return values_[k * dim_ + l]; }
  double operator()(std::size_t k, std::size_t l) const { return values_[k * dim_ + l]; }

  double row_sum(std::size_t k) const {
    double s = 0.0;
    for (std::size_t l = 0; l < dim_; ++l) s += (*this)(k, l);
    return s;
  }

  /// max_k |sum_l c_kl - trace|
  double row_sum_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < rows(); ++k) worst = std::max(worst, std::abs(row_sum(k) - trace_));
    return worst;
  }

  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t dim_ = 0;
  double trace_ = 0.0;
  std::vector<double> values_;
};

/// Complex coefficients of a general (non-Hermitian) operator.
class GeneralCoefficientTable {
 public:
  GeneralCoefficientTable() = default;
  GeneralCoefficientTable(std::size_t dim, Complex trace)
      : dim_(dim), trace_(trace), values_((dim + 1) * dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ + 1; }
  Complex trace() const { return trace_; }
  void set_trace(Complex t) { trace_ = t; }

  Complex& operator()(std::size_t k, std::size_t l) { return values_[k * dim_ + l]; }
  Complex operator()(std::size_t k, std::size_t l) const { return values_[k * dim_ + l]; }

 private:
  std::size_t dim_ = 0;
  Complex trace_{};
  std::vector<Complex> values_;
};

namespace detail {

inline void require_dims(std::size_t op_dim, const MubSet& mubs) {
  if (op_dim != mubs.dim()) {
    throw Error(Errc::DimensionMismatch, "operator dimension " + std::to_string(op_dim) +
                                             " does not match basis set dimension " +
                                             std::to_string(mubs.dim()));
  }
}

}  // namespace detail

inline CoefficientTable expand(const HermitianOperator& op, const MubSet& mubs) {
  detail::require_dims(op.dim(), mubs);
  const double scale = std::max(1.0, frobenius_norm(op.matrix()));
  CoefficientTable table(mubs.dim(), trace(op.matrix()).real());
  for (std::size_t k = 0; k < mubs.basis_count(); ++k) {
    for (std::size_t l = 0; l < mubs.dim(); ++l) {
      const Complex c = expectation(op.matrix(), mubs.vector(k, l));
      if (std::abs(c.imag()) >= kImaginaryResidueTolerance * scale) {
        throw Error(Errc::NotHermitian, "coefficient has imaginary residue " + std::to_string(c.imag()));
      }
      table(k, l) = c.real();
    }
  }
  return table;
}

inline CoefficientTable expand(const ComplexMatrix& op, const MubSet& mubs) {
  return expand(HermitianOperator(op), mubs);
}

/// sum_kl c_kl rho_kl - trace * 1. Throws InconsistentRows when some row sum
/// differs from the trace by more than 1e-8.
inline HermitianOperator reconstruct(const CoefficientTable& table, const MubSet& mubs) {
  detail::require_dims(table.dim(), mubs);
  const double defect = table.row_sum_defect();
  if (defect > kRowConsistencyTolerance) {
    throw Error(Errc::InconsistentRows, "coefficient rows do not sum to the trace (max defect " +
                                            std::to_string(defect) + ")");
  }
  ComplexMatrix out = ComplexMatrix::identity(mubs.dim()) * Complex{-table.trace(), 0.0};
  for (std::size_t k = 0; k < mubs.basis_count(); ++k)
    for (std::size_t l = 0; l < mubs.dim(); ++l) out.add_scaled(table(k, l), mubs.projector(k, l));
  return HermitianOperator::hermitian_part(out);
}

inline GeneralCoefficientTable expand_general(const ComplexMatrix& op, const MubSet& mubs) {
  detail::require_dims(op.dim(), mubs);
  GeneralCoefficientTable table(mubs.dim(), trace(op));
  for (std::size_t k = 0; k < mubs.basis_count(); ++k)
    for (std::size_t l = 0; l < mubs.dim(); ++l) table(k, l) = expectation(op, mubs.vector(k, l));
  return table;
}

inline ComplexMatrix reconstruct_general(const GeneralCoefficientTable& table, const MubSet& mubs) {
  detail::require_dims(table.dim(), mubs);
  ComplexMatrix out = ComplexMatrix::identity(mubs.dim()) * (-table.trace());
  for (std::size_t k = 0; k < mubs.basis_count(); ++k)
    for (std::size_t l = 0; l < mubs.dim(); ++l) out.add_scaled(table(k, l), mubs.projector(k, l));
  return out;
}

/// The N^2 numbers that determine a table: row 0 in full, then the first
/// N - 1 entries of every other row.
inline std::vector<double> minimal_parameters(const CoefficientTable& table) {
  const double defect = table.row_sum_defect();
  if (defect > kRowConsistencyTolerance) {
    throw Error(Errc::InconsistentRows, "cannot deflate an inconsistent table");
  }
  const std::size_t n = table.dim();
  std::vector<double> params;
  params.reserve(n * n);
  for (std::size_t l = 0; l < n; ++l) params.push_back(table(0, l));
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t l = 0; l + 1 < n; ++l) params.push_back(table(k, l));
  return params;
}

/// Inverse of minimal_parameters; the trace is the sum of row 0 and every
/// dropped entry is restored from its row sum.
inline CoefficientTable inflate(std::span<const double> params, std::size_t dim) {
  if (params.size() != dim * dim) {
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(dim * dim) + " parameters, got " +
                                             std::to_string(params.size()));
  }
  double tr = 0.0;
  for (std::size_t l = 0; l < dim; ++l) tr += params[l];
  CoefficientTable table(dim, tr);
  for (std::size_t l = 0; l < dim; ++l) table(0, l) = params[l];
  std::size_t pos = dim;
  for (std::size_t k = 1; k <= dim; ++k) {
    double partial = 0.0;
    for (std::size_t l = 0; l + 1 < dim; ++l) {
      table(k, l) = params[pos++];
      partial += table(k, l);
    }
    table(k, dim - 1) = tr - partial;
  }
  return table;
}

/// sum_{q,n} <psi_mq|O|psi_mn> |psi_mq><psi_mn|, the single-basis expansion.
inline ComplexMatrix standard_expansion(const ComplexMatrix& op, const MubSet& mubs, std::size_t m) {
  detail::require_dims(op.dim(), mubs);
  ComplexMatrix out(mubs.dim());
  for (std::size_t q = 0; q < mubs.dim(); ++q) {
    const auto psi_q = mubs.vector(m, q);
    for (std::size_t n = 0; n < mubs.dim(); ++n) {
      const auto psi_n = mubs.vector(m, n);
      const Complex o_qn = inner(psi_q, op * std::span<const Complex>(psi_n));
      out.add_scaled(o_qn, ComplexMatrix::outer(psi_q, psi_n));
    }
  }
  return out;
}

}  // namespace mubex
