#pragma once

// Small dense complex linear algebra: enough for operators on H_N with
// N up to a few dozen. Row-major storage, value semantics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mubex/error.hpp"

namespace mubex {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kHermiticityTolerance = 1e-12;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  ComplexMatrix(std::size_t dim, std::vector<Complex> row_major)
      : dim_(dim), data_(std::move(row_major)) {
    if (data_.size() != dim_ * dim_) {
      throw Error(Errc::DimensionMismatch, "matrix data has " + std::to_string(data_.size()) +
                                               " entries, expected " + std::to_string(dim_ * dim_));
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  /// |a><b|
  static ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "outer product of unequal vectors");
    ComplexMatrix m(a.size());
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t c = 0; c < b.size(); ++c) m(r, c) = a[r] * std::conj(b[c]);
    return m;
  }

  static ComplexMatrix projector(std::span<const Complex> v) { return outer(v, v); }

  std::size_t dim() const { return dim_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  std::span<const Complex> data() const { return data_; }

  ComplexVector column(std::size_t c) const {
    ComplexVector v(dim_);
    for (std::size_t r = 0; r < dim_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  void set_column(std::size_t c, std::span<const Complex> v) {
    if (v.size() != dim_) throw Error(Errc::DimensionMismatch, "column length mismatch");
    for (std::size_t r = 0; r < dim_; ++r) (*this)(r, c) = v[r];
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  bool is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  /// this += s * o, without a temporary.
  void add_scaled(Complex s, const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    const std::size_t n = a.dim_;
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        const Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < n; ++c) m(r, c) += ark * b(k, c);
      }
    return m;
  }

 private:
  void require_same_dim(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) {
      throw Error(Errc::DimensionMismatch, "matrix dimensions " + std::to_string(dim_) + " and " +
                                               std::to_string(o.dim_) + " differ");
    }
  }

  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

inline ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (v.size() != a.dim()) throw Error(Errc::DimensionMismatch, "matrix-vector size mismatch");
  ComplexVector out(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) out[r] += a(r, c) * v[c];
  return out;
}

/// <a|b>
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "inner product of unequal vectors");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// <v|A|v>
inline Complex expectation(const ComplexMatrix& a, std::span<const Complex> v) {
  const auto av = a * v;
  return inner(v, av);
}

inline Complex trace(const ComplexMatrix& a) {
  Complex s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += a(i, i);
  return s;
}

/// Tr{A^dagger B}
inline Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(Errc::DimensionMismatch, "frobenius_inner dimension mismatch");
  const auto x = a.data();
  const auto y = b.data();
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double frobenius_norm(const ComplexMatrix& a) { return std::sqrt(frobenius_inner(a, a).real()); }

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(Errc::DimensionMismatch, "max_abs_diff dimension mismatch");
  double m = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = r; c < a.dim(); ++c) m = std::max(m, std::abs(a(r, c) - std::conj(a(c, r))));
  return m;
}

/// A square matrix known to be Hermitian within kHermiticityTolerance.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  explicit HermitianOperator(ComplexMatrix m, double tol = kHermiticityTolerance) : m_(std::move(m)) {
    if (!m_.is_finite()) throw Error(Errc::NotHermitian, "matrix has non-finite entries");
    const double defect = hermiticity_defect(m_);
    if (!(defect < tol)) {
      throw Error(Errc::NotHermitian, "matrix is not Hermitian: max |A - A^dagger| = " +
                                          std::to_string(defect));
    }
  }

  /// (A + A^dagger) / 2, for results that are Hermitian by construction up
  /// to rounding.
  static HermitianOperator hermitian_part(const ComplexMatrix& a) {
    ComplexMatrix h = a;
    for (std::size_t r = 0; r < a.dim(); ++r) {
      h(r, r) = a(r, r).real();
      for (std::size_t c = r + 1; c < a.dim(); ++c) {
        const Complex z = 0.5 * (a(r, c) + std::conj(a(c, r)));
        h(r, c) = z;
        h(c, r) = std::conj(z);
      }
    }
    return HermitianOperator(std::move(h));
  }

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

 private:
  ComplexMatrix m_;
};

struct Spectrum {
  std::vector<double> values;             // ascending
  std::optional<ComplexMatrix> vectors;   // column i pairs with values[i]
  double residual = 0.0;                  // off-diagonal Frobenius norm at exit
  int sweeps = 0;
};

struct EigenOptions {
  double tol = 1e-12;       // off-diagonal threshold, relative to max(1, ||H||_F)
  int max_sweeps = 100;
  bool want_vectors = false;
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Each rotation
/// zeroes one off-diagonal pair (p, q) with J = diag(1, e^{-i phi}) R(theta).
inline Spectrum hermitian_eigen(const HermitianOperator& h, const EigenOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw Error(Errc::InvalidArgument, "eigen tolerance must be positive");
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = opts.tol * std::max(1.0, frobenius_norm(a));

  Spectrum out;
  double off = detail::off_diagonal_norm(a);
  while (off > threshold) {
    if (out.sweeps >= opts.max_sweeps) {
      throw Error(Errc::NoConvergence, "Jacobi eigensolver did not converge in " +
                                           std::to_string(opts.max_sweeps) + " sweeps");
    }
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double mag = std::abs(b);
        if (mag < 1e-300) continue;
        const Complex phase = b / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);
        for (std::size_t r = 0; r < n; ++r) {  // A <- A J
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = arp * jpp + arq * jqp;
          a(r, q) = arp * jpq + arq * jqq;
        }
        for (std::size_t col = 0; col < n; ++col) {  // A <- J^dagger A
          const Complex apc = a(p, col);
          const Complex aqc = a(q, col);
          a(p, col) = std::conj(jpp) * apc + std::conj(jqp) * aqc;
          a(q, col) = std::conj(jpq) * apc + std::conj(jqq) * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (opts.want_vectors) {
          for (std::size_t r = 0; r < n; ++r) {  // V <- V J
            const Complex vrp = v(r, p);
            const Complex vrq = v(r, q);
            v(r, p) = vrp * jpp + vrq * jqp;
            v(r, q) = vrp * jpq + vrq * jqq;
          }
        }
      }
    }
    off = detail::off_diagonal_norm(a);
  }
  out.residual = off;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  out.values.reserve(n);
  for (std::size_t i : order) out.values.push_back(a(i, i).real());
  if (opts.want_vectors) {
    ComplexMatrix sorted(n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) sorted(r, c) = v(r, order[c]);
    out.vectors = std::move(sorted);
  }
  return out;
}

/// O = (H_plus - i H_minus) / 2 with H_plus = O + O^dagger and
/// H_minus = i (O - O^dagger), both Hermitian.
inline std::pair<HermitianOperator, HermitianOperator> hermitian_decompose(const ComplexMatrix& o) {
  const ComplexMatrix od = o.adjoint();
  ComplexMatrix plus = o + od;
  ComplexMatrix minus = (o - od) * Complex{0.0, 1.0};
  return {HermitianOperator(std::move(plus)), HermitianOperator(std::move(minus))};
}

}  // namespace mubex
