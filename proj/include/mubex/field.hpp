#pragma once

// Galois field GF(p^m) arithmetic over digit vectors, plus the symmetric
// multiplication tensor that the complementary-basis phases are built from.
//
// Element conventions used throughout mubex:
//   * an element is a length-m digit vector over GF(p), most significant
//     digit first; digit i is the coefficient of x^(m-1-i) in the
//     polynomial representation modulo the field's irreducible polynomial;
//   * the "value" of an element is the base-p number spelled by its digits,
//     in [0, N);
//   * the "index" of an element runs over [1, N] with index N naming the
//     zero element (value = index mod N).
// Addition is digit-wise mod p, without carries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mubex/error.hpp"

namespace mubex {

struct PrimePower {
  int p = 2;
  int m = 1;
  int n = 2;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

namespace detail {

inline std::string factorization_string(std::int64_t n) {
  std::ostringstream os;
  os << n << " = ";
  bool first = true;
  std::int64_t rest = n;
  for (std::int64_t f = 2; f * f <= rest; ++f) {
    int power = 0;
    while (rest % f == 0) {
      rest /= f;
      ++power;
    }
    if (power == 0) continue;
    if (!first) os << "·";
    os << f;
    if (power > 1) os << '^' << power;
    first = false;
  }
  if (rest > 1) {
    if (!first) os << "·";
    os << rest;
  }
  return os.str();
}

inline int mod(std::int64_t a, int p) {
  const auto r = static_cast<int>(a % p);
  return r < 0 ? r + p : r;
}

}  // namespace detail

/// Factor N = p^m. Throws CompositeDimension when N has two distinct prime
/// factors and UnsupportedDimension when N < 2 or does not fit an int.
inline PrimePower parse_prime_power(std::int64_t n) {
  if (n < 2) {
    throw Error(Errc::UnsupportedDimension,
                "dimension must be at least 2, got " + std::to_string(n));
  }
  if (n > std::numeric_limits<int>::max()) {
    throw Error(Errc::UnsupportedDimension,
                "dimension " + std::to_string(n) + " is too large");
  }
  std::int64_t p = n;
  for (std::int64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      p = f;
      break;
    }
  }
  std::int64_t rest = n;
  int m = 0;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) {
    throw Error(Errc::CompositeDimension,
                detail::factorization_string(n) + " is not a prime power");
  }
  return PrimePower{static_cast<int>(p), m, static_cast<int>(n)};
}

struct FieldElement {
  std::vector<int> digits;  // most significant first, each in [0, p)

  bool is_zero() const {
    for (int d : digits)
      if (d != 0) return false;
    return true;
  }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

inline FieldElement value_to_element(std::int64_t value, const PrimePower& pp) {
  if (value < 0 || value >= pp.n) {
    throw Error(Errc::IndexOutOfRange, "element value " + std::to_string(value) +
                                           " outside [0, " + std::to_string(pp.n) + ")");
  }
  FieldElement e{std::vector<int>(static_cast<std::size_t>(pp.m), 0)};
  for (int i = pp.m - 1; i >= 0; --i) {
    e.digits[static_cast<std::size_t>(i)] = static_cast<int>(value % pp.p);
    value /= pp.p;
  }
  return e;
}

inline int element_value(const FieldElement& e, const PrimePower& pp) {
  if (static_cast<int>(e.digits.size()) != pp.m) {
    throw Error(Errc::DimensionMismatch, "element has " + std::to_string(e.digits.size()) +
                                             " digits, field degree is " + std::to_string(pp.m));
  }
  int v = 0;
  for (int d : e.digits) {
    if (d < 0 || d >= pp.p) throw Error(Errc::InvalidArgument, "digit outside [0, p)");
    v = v * pp.p + d;
  }
  return v;
}

/// Index in [1, N] to digits; index N is the zero element.
inline FieldElement index_to_digits(std::int64_t index, const PrimePower& pp) {
  if (index < 1 || index > pp.n) {
    throw Error(Errc::IndexOutOfRange, "element index " + std::to_string(index) +
                                           " outside [1, " + std::to_string(pp.n) + "]");
  }
  return value_to_element(index % pp.n, pp);
}

inline std::int64_t digits_to_index(const FieldElement& e, const PrimePower& pp) {
  const int v = element_value(e, pp);
  return v == 0 ? pp.n : v;
}

inline FieldElement field_add(const FieldElement& a, const FieldElement& b, const PrimePower& pp) {
  FieldElement r = a;
  for (std::size_t i = 0; i < r.digits.size(); ++i) r.digits[i] = (a.digits[i] + b.digits[i]) % pp.p;
  return r;
}

inline FieldElement field_sub(const FieldElement& a, const FieldElement& b, const PrimePower& pp) {
  FieldElement r = a;
  for (std::size_t i = 0; i < r.digits.size(); ++i)
    r.digits[i] = detail::mod(a.digits[i] - b.digits[i], pp.p);
  return r;
}

/// Monic irreducible polynomial of degree m over GF(p), coefficients stored
/// lowest degree first (coefficients().back() == 1).
class IrreduciblePoly {
 public:
  IrreduciblePoly(const PrimePower& pp, std::vector<int> coefficients)
      : p_(pp.p), coefficients_(std::move(coefficients)) {
    if (static_cast<int>(coefficients_.size()) != pp.m + 1 || coefficients_.back() != 1) {
      throw Error(Errc::InvalidArgument, "modulus must be monic of degree " + std::to_string(pp.m));
    }
    for (int c : coefficients_) {
      if (c < 0 || c >= p_) throw Error(Errc::InvalidArgument, "coefficient outside [0, p)");
    }
    if (!is_irreducible(coefficients_, p_)) {
      throw Error(Errc::InvalidArgument, "polynomial " + to_string() + " is reducible over GF(" +
                                             std::to_string(p_) + ")");
    }
  }

  /// The lexicographically smallest monic irreducible polynomial of degree
  /// m, comparing the non-leading coefficients from x^(m-1) down to x^0.
  static IrreduciblePoly smallest(const PrimePower& pp) {
    for (std::int64_t t = 0; t < pp.n; ++t) {
      std::vector<int> c(static_cast<std::size_t>(pp.m + 1), 0);
      c.back() = 1;
      std::int64_t rest = t;
      for (int i = 0; i < pp.m; ++i) {
        c[static_cast<std::size_t>(i)] = static_cast<int>(rest % pp.p);
        rest /= pp.p;
      }
      if (is_irreducible(c, pp.p)) return IrreduciblePoly(pp, std::move(c));
    }
    // every finite field exists, so the loop always returns
    throw Error(Errc::InvalidArgument, "no irreducible polynomial found");
  }

  const std::vector<int>& coefficients() const { return coefficients_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const int c = coefficients_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (c != 1 || i == 0) os << c;
      if (i >= 1) os << 'x';
      if (i > 1) os << '^' << i;
    }
    return os.str();
  }

  /// Remainder of `a` (lowest degree first) modulo a monic polynomial.
  static std::vector<int> remainder(std::vector<int> a, const std::vector<int>& modulus, int p) {
    const std::size_t dm = modulus.size() - 1;
    for (std::size_t deg = a.size(); deg-- > dm;) {
      const int c = a[deg];
      if (c == 0) continue;
      for (std::size_t i = 0; i <= dm; ++i) {
        auto& slot = a[deg - dm + i];
        slot = detail::mod(slot - c * modulus[i], p);
      }
    }
    a.resize(dm, 0);
    return a;
  }

 private:
  static bool is_irreducible(const std::vector<int>& f, int p) {
    const int m = static_cast<int>(f.size()) - 1;
    for (int d = 1; 2 * d <= m; ++d) {
      std::int64_t count = 1;
      for (int i = 0; i < d; ++i) count *= p;
      for (std::int64_t t = 0; t < count; ++t) {
        std::vector<int> g(static_cast<std::size_t>(d + 1), 0);
        g.back() = 1;
        std::int64_t rest = t;
        for (int i = 0; i < d; ++i) {
          g[static_cast<std::size_t>(i)] = static_cast<int>(rest % p);
          rest /= p;
        }
        const auto r = remainder(f, g, p);
        bool zero = true;
        for (int c : r) zero = zero && c == 0;
        if (zero) return false;
      }
    }
    return true;
  }

  int p_;
  std::vector<int> coefficients_;
};

/// Product of two field elements: polynomial product reduced mod the
/// modulus and mod p.
inline FieldElement field_mul(const FieldElement& a, const FieldElement& b, const PrimePower& pp,
                              const IrreduciblePoly& poly) {
  const auto m = static_cast<std::size_t>(pp.m);
  if (a.digits.size() != m || b.digits.size() != m) {
    throw Error(Errc::DimensionMismatch, "element degree does not match field");
  }
  std::vector<int> prod(2 * m - 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const int ai = a.digits[m - 1 - i];
    if (ai == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      prod[i + j] = (prod[i + j] + ai * b.digits[m - 1 - j]) % pp.p;
    }
  }
  const auto r = IrreduciblePoly::remainder(std::move(prod), poly.coefficients(), pp.p);
  FieldElement out{std::vector<int>(m, 0)};
  for (std::size_t i = 0; i < m; ++i) out.digits[m - 1 - i] = r[i];
  return out;
}

/// m symmetric m-by-m matrices over GF(p); entry (a, b) of matrix j is the
/// j-th digit of e_a * e_b, where e_a is the element whose only nonzero
/// digit is a 1 at position a.
class AlphaTensor {
 public:
  AlphaTensor(int p, int m, std::vector<int> entries)
      : p_(p), m_(m), entries_(std::move(entries)) {}

  int characteristic() const { return p_; }
  int degree() const { return m_; }

  int at(int j, int a, int b) const {
    return entries_[static_cast<std::size_t>((j * m_ + a) * m_ + b)];
  }

  /// sum_j k_j alpha_j with integer (unreduced) entries, row-major m*m.
  std::vector<std::int64_t> contract(const FieldElement& k) const {
    std::vector<std::int64_t> out(static_cast<std::size_t>(m_ * m_), 0);
    for (int j = 0; j < m_; ++j) {
      const int kj = k.digits[static_cast<std::size_t>(j)];
      if (kj == 0) continue;
      for (int a = 0; a < m_; ++a)
        for (int b = 0; b < m_; ++b) out[static_cast<std::size_t>(a * m_ + b)] += kj * at(j, a, b);
    }
    return out;
  }

  /// x^T K y over the integers, K as returned by contract().
  std::int64_t bilinear(const FieldElement& x, const std::vector<std::int64_t>& k,
                        const FieldElement& y) const {
    std::int64_t s = 0;
    for (int a = 0; a < m_; ++a) {
      const int xa = x.digits[static_cast<std::size_t>(a)];
      if (xa == 0) continue;
      for (int b = 0; b < m_; ++b)
        s += xa * k[static_cast<std::size_t>(a * m_ + b)] * y.digits[static_cast<std::size_t>(b)];
    }
    return s;
  }

 private:
  int p_;
  int m_;
  std::vector<int> entries_;
};

inline AlphaTensor alpha_tensor(const PrimePower& pp, const IrreduciblePoly& poly) {
  const int m = pp.m;
  std::vector<int> entries(static_cast<std::size_t>(m * m * m), 0);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      FieldElement ea{std::vector<int>(static_cast<std::size_t>(m), 0)};
      FieldElement eb = ea;
      ea.digits[static_cast<std::size_t>(a)] = 1;
      eb.digits[static_cast<std::size_t>(b)] = 1;
      const auto prod = field_mul(ea, eb, pp, poly);
      for (int j = 0; j < m; ++j)
        entries[static_cast<std::size_t>((j * m + a) * m + b)] = prod.digits[static_cast<std::size_t>(j)];
    }
  }
  return AlphaTensor(pp.p, m, std::move(entries));
}

inline std::int64_t digit_dot(const FieldElement& a, const FieldElement& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.digits.size(); ++i) s += a.digits[i] * b.digits[i];
  return s;
}

/// (u^T (k.alpha) u + l^T u) mod p.
inline int phase_exponent(const FieldElement& u, const FieldElement& k, const FieldElement& l,
                          const AlphaTensor& alpha) {
  const auto kk = alpha.contract(k);
  return detail::mod(alpha.bilinear(u, kk, u) + digit_dot(l, u), alpha.characteristic());
}

/// u^T (k.alpha) u mod 4 with the contraction taken over the integers. For
/// p = 2 this is a well-defined Z4-valued quadratic form on digit vectors.
inline int quadratic_form_z4(const FieldElement& u, const FieldElement& k, const AlphaTensor& alpha) {
  return detail::mod(alpha.bilinear(u, alpha.contract(k), u), 4);
}

/// (1/N) sum_k exp(i c d^T (k.alpha) s), c = 4 pi / p for odd p and pi for
/// p = 2. Vanishes for nonzero d and s.
inline std::complex<double> phase_sum(const FieldElement& d, const FieldElement& s,
                                      const PrimePower& pp, const AlphaTensor& alpha) {
  if (d.is_zero() || s.is_zero()) {
    throw Error(Errc::ZeroOperand, "phase sum needs nonzero operands");
  }
  std::complex<double> total{0.0, 0.0};
  for (int v = 0; v < pp.n; ++v) {
    const auto k = value_to_element(v, pp);
    const auto e = detail::mod(alpha.bilinear(d, alpha.contract(k), s), pp.p);
    // exponents reduced mod p before exponentiation
    const double angle = pp.p == 2
                             ? std::numbers::pi * e
                             : 2.0 * std::numbers::pi * detail::mod(2 * e, pp.p) / pp.p;
    total += std::polar(1.0, angle);
  }
  return total / static_cast<double>(pp.n);
}

struct DigitSumRow {
  std::int64_t k = 0;            // element index in [1, N]
  FieldElement k_digits;
  std::vector<int> products;     // k_j r_j mod p, per digit
  int sum = 0;                   // sum_j k_j r_j mod p
};

/// One row per k in [1, N] with the digit-wise products against r and
/// their sum mod p.
inline std::vector<DigitSumRow> digit_sum_table(std::int64_t r_index, const PrimePower& pp) {
  const auto r = index_to_digits(r_index, pp);
  std::vector<DigitSumRow> rows;
  rows.reserve(static_cast<std::size_t>(pp.n));
  for (std::int64_t k = 1; k <= pp.n; ++k) {
    DigitSumRow row;
    row.k = k;
    row.k_digits = index_to_digits(k, pp);
    int sum = 0;
    for (std::size_t j = 0; j < r.digits.size(); ++j) {
      const int prod = row.k_digits.digits[j] * r.digits[j] % pp.p;
      row.products.push_back(prod);
      sum += prod;
    }
    row.sum = sum % pp.p;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Bundles a prime power, its modulus and the alpha tensor. Immutable.
class GaloisField {
 public:
  explicit GaloisField(const PrimePower& pp)
      : GaloisField(pp, IrreduciblePoly::smallest(pp)) {}

  GaloisField(const PrimePower& pp, IrreduciblePoly poly)
      : pp_(pp), poly_(std::move(poly)), alpha_(alpha_tensor(pp_, poly_)) {}

  const PrimePower& prime_power() const { return pp_; }
  int size() const { return pp_.n; }
  int characteristic() const { return pp_.p; }
  int degree() const { return pp_.m; }
  const IrreduciblePoly& modulus() const { return poly_; }
  const AlphaTensor& alpha() const { return alpha_; }

  FieldElement zero() const { return value_to_element(0, pp_); }
  FieldElement one() const { return value_to_element(1, pp_); }
  FieldElement element(std::int64_t value) const { return value_to_element(value, pp_); }
  int value(const FieldElement& e) const { return element_value(e, pp_); }

  FieldElement add(const FieldElement& a, const FieldElement& b) const { return field_add(a, b, pp_); }
  FieldElement sub(const FieldElement& a, const FieldElement& b) const { return field_sub(a, b, pp_); }
  FieldElement mul(const FieldElement& a, const FieldElement& b) const {
    return field_mul(a, b, pp_, poly_);
  }

  FieldElement pow(FieldElement a, std::int64_t e) const {
    FieldElement r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  FieldElement inverse(const FieldElement& a) const {
    if (a.is_zero()) throw Error(Errc::ZeroOperand, "zero has no inverse");
    return pow(a, pp_.n - 2);
  }

  /// Frobenius automorphism a -> a^p.
  FieldElement frobenius(const FieldElement& a) const { return pow(a, pp_.p); }

  int phase_exponent(const FieldElement& u, const FieldElement& k, const FieldElement& l) const {
    return mubex::phase_exponent(u, k, l, alpha_);
  }

  std::complex<double> phase_sum(const FieldElement& d, const FieldElement& s) const {
    return mubex::phase_sum(d, s, pp_, alpha_);
  }

 private:
  PrimePower pp_;
  IrreduciblePoly poly_;
  AlphaTensor alpha_;
};

}  // namespace mubex
