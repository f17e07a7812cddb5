#pragma once

#include "gcdlcm/arith.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcdlcm {

/// Square matrix of exact rationals, row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  explicit ExactMatrix(std::size_t n) : n_(n), a_(n * n) {}

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static ExactMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    ExactMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw std::invalid_argument("ExactMatrix::from_rows: not square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  bool is_integral() const {
    for (const auto& q : a_)
      if (!gcdlcm::is_integral(q)) return false;
    return true;
  }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("ExactMatrix: dimension mismatch");
    ExactMatrix c(a.n_);
    Rational acc;
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) {
        acc = 0;
        for (std::size_t k = 0; k < a.n_; ++k) {
          const Rational& x = a(i, k);
          if (sgn(x) == 0) continue;
          acc += x * b(k, j);
        }
        c(i, j) = acc;
      }
    return c;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  std::vector<std::vector<std::string>> to_strings() const {
    std::vector<std::vector<std::string>> out(n_, std::vector<std::string>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j).get_str();
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

namespace detail {

// Integer matrix obtained by clearing all denominators with their lcm.
inline std::vector<Integer> scaled_integer_rows(const ExactMatrix& m, Integer& scale) {
  const std::size_t n = m.dim();
  scale = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = lcm(scale, m(i, j).get_den());
  std::vector<Integer> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& q = m(i, j);
      a[i * n + j] = q.get_num() * (scale / q.get_den());
    }
  return a;
}

inline void exact_div(Integer& x, const Integer& d) {
  Integer r;
  mpz_tdiv_qr(x.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  if (r != 0) throw InternalError("fraction-free elimination: inexact division");
}

}  // namespace detail

/// Determinant by Bareiss fraction-free elimination on the denominator-cleared
/// matrix.
inline Rational determinant(const ExactMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) return 1;
  Integer scale;
  auto a = detail::scaled_integer_rows(m, scale);
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a[k * n + k] * a[i * n + j] - a[i * n + k] * a[k * n + j];
        detail::exact_div(v, prev);
        a[i * n + j] = std::move(v);
      }
      a[i * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  Rational det(a[(n - 1) * n + (n - 1)] * sign);
  det /= Rational(pow(scale, n));
  det.canonicalize();
  return det;
}

/// Exact inverse by fraction-free Gauss-Jordan elimination on [A | I]. Every
/// intermediate stays integral; after the last step the left block is det(A)*I
/// and the right block is adj(A). Returns nullopt for a singular matrix.
inline std::optional<ExactMatrix> invert_generic(const ExactMatrix& m) {
  const std::size_t n = m.dim();
  const std::size_t w = 2 * n;
  Integer scale;
  const auto base = detail::scaled_integer_rows(m, scale);
  std::vector<Integer> a(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * w + j] = base[i * n + j];
    a[i * w + n + i] = 1;
  }
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k * w + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * w + k] == 0) ++p;
      if (p == n) return std::nullopt;
      for (std::size_t j = 0; j < w; ++j) std::swap(a[k * w + j], a[p * w + j]);
    }
    const Integer pivot = a[k * w + k];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Integer factor = a[i * w + k];
      for (std::size_t j = 0; j < w; ++j) {
        if (j == k) continue;
        Integer v = pivot * a[i * w + j] - factor * a[k * w + j];
        detail::exact_div(v, prev);
        a[i * w + j] = std::move(v);
      }
      a[i * w + k] = 0;
    }
    prev = pivot;
  }
  // Rows other than the last pivot row still carry the previous-step scale;
  // each diagonal entry a[i][i] equals the final pivot (the determinant).
  ExactMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Integer& d = a[i * w + i];
    for (std::size_t j = 0; j < n; ++j) {
      Rational q(a[i * w + n + j] * scale, d);
      q.canonicalize();
      inv(i, j) = std::move(q);
    }
  }
  return inv;
}

}  // namespace gcdlcm
