#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gltower/errors.hpp"
#include "gltower/exact/scalar.hpp"

namespace gltower {

template <class T>
concept ExactField = requires(const T& a) {
  { inverse(a) } -> std::convertible_to<T>;
  { zero_like(a) } -> std::convertible_to<T>;
  { one_like(a) } -> std::convertible_to<T>;
};

/// Dense row-major matrix over one exact scalar domain. The domain sample
/// `zero_` carries runtime parameters (the prime of F_p or of Z[zeta_p]).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& zero)
      : rows_(rows), cols_(cols), zero_(zero_like(zero)), data_(rows * cols, zero_like(zero)) {}

  static Matrix identity(std::size_t n, const T& sample) {
    Matrix m(n, n, sample);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one_like(sample);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, const T& sample) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(r, c, sample);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& zero() const { return zero_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool is_zero_matrix() const {
    for (const auto& x : data_) {
      if (!is_zero(x)) return false;
    }
    return true;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator+(const Matrix& o) const {
    check_shape(o);
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    check_shape(o);
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) {
      throw DimensionMismatch("cannot multiply " + shape() + " by " + o.shape());
    }
    Matrix r(rows_, o.cols_, zero_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const T& b = o(k, j);
          if (is_zero(b)) continue;
          r(i, j) += a * b;
        }
      }
    }
    return r;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void check_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionMismatch("shape " + shape() + " vs " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  T zero_{};
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b;
}

template <class T>
Matrix<T> matrix_power(const Matrix<T>& a, unsigned k) {
  if (a.rows() != a.cols()) throw DimensionMismatch("power of non-square matrix " + a.shape());
  Matrix<T> r = Matrix<T>::identity(a.rows(), a.zero());
  for (unsigned i = 0; i < k; ++i) r = r * a;
  return r;
}

/// Reduced row echelon form together with the pivot columns.
template <ExactField T>
struct Echelon {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;
};

template <ExactField T>
Echelon<T> row_reduce(Matrix<T> m) {
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t piv = lead;
    while (piv < m.rows() && is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != lead) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(lead, j));
    }
    const T inv = inverse(m(lead, c));
    for (std::size_t j = c; j < m.cols(); ++j) {
      if (!is_zero(m(lead, j))) m(lead, j) *= inv;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == lead || is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!is_zero(m(lead, j))) m(i, j) -= f * m(lead, j);
      }
    }
    pivots.push_back(c);
    ++lead;
  }
  return {std::move(m), std::move(pivots)};
}

template <ExactField T>
std::size_t rank(const Matrix<T>& m) {
  return row_reduce(m).pivots.size();
}

/// Basis of the right null space {x : m x = 0}; one vector per free column.
template <ExactField T>
std::vector<std::vector<T>> kernel_basis(const Matrix<T>& m) {
  const auto [red, pivots] = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(m.cols(), zero_like(m.zero()));
    v[free] = one_like(m.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -red(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <ExactField T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix " + m.shape());
  const std::size_t n = m.rows();
  Matrix<T> aug(n, 2 * n, m.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = one_like(m.zero());
  }
  auto [red, pivots] = row_reduce(std::move(aug));
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw DomainError("matrix is singular");
  Matrix<T> inv(n, n, m.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red(i, n + j);
  return inv;
}

/// Deterministic invertible rational matrix with entries in {-2, ..., 2}.
RationalMatrix random_invertible(std::size_t n, std::uint64_t seed);

RationalMatrix rational_matrix(const std::vector<std::vector<long>>& rows);

/// Matrix with runtime-selected scalar domain. Rank and kernel are only
/// defined when the domain is a field.
using ExactMatrix = std::variant<Matrix<Rational>, Matrix<ModP>, Matrix<CyclotomicInteger>>;

std::size_t rank(const ExactMatrix& m);
std::vector<ExactMatrix> kernel_basis(const ExactMatrix& m);

}  // namespace gltower
