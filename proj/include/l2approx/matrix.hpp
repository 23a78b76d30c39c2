#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "l2approx/scalar.hpp"

namespace l2approx {

// Row-major dense matrix over any coefficient domain.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& like = T{}) {
    Matrix m(n, n, scalar_traits<T>::zero(like));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::from_int(1, like);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  const T zero = a.empty() ? T{} : scalar_traits<T>::zero(a(0, 0));
  Matrix<T> r(a.rows(), b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (scalar_traits<T>::is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

// Conjugate transpose (plain transpose for real and modular domains).
template <class T>
Matrix<T> adjoint(const Matrix<T>& a) {
  Matrix<T> r(a.cols(), a.rows(), a.empty() ? T{} : scalar_traits<T>::zero(a(0, 0)));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = scalar_traits<T>::conj(a(i, j));
  return r;
}

template <class T>
bool is_zero_matrix(const Matrix<T>& a) {
  for (const auto& x : a.data())
    if (!scalar_traits<T>::is_zero(x)) return false;
  return true;
}

template <class T>
ComplexMatrix to_complex(const Matrix<T>& a) {
  ComplexMatrix r(a.rows(), a.cols(), Complex(0.0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = scalar_traits<T>::to_complex(a(i, j));
  return r;
}

// Gauss-Jordan inverse over a field. Floating domains pivot on the largest
// modulus; exact domains on the first nonzero entry. Throws std::domain_error
// when singular.
template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  using tr = scalar_traits<T>;
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse: matrix not square");
  if (n == 0) return a;
  Matrix<T> m = a;
  Matrix<T> r = Matrix<T>::identity(n, a(0, 0));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    if constexpr (tr::exact) {
      for (std::size_t i = c; i < n; ++i)
        if (!tr::is_zero(m(i, c))) {
          piv = i;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t i = c; i < n; ++i)
        if (std::abs(m(i, c)) > best) {
          best = std::abs(m(i, c));
          piv = i;
        }
    }
    if (piv == n) throw std::domain_error("inverse: singular matrix");
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(c, j));
        std::swap(r(piv, j), r(c, j));
      }
    const T s = tr::inverse(m(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) = m(c, j) * s;
      r(c, j) = r(c, j) * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || tr::is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = m(i, j) - f * m(c, j);
        r(i, j) = r(i, j) - f * r(c, j);
      }
    }
  }
  return r;
}

// Block diagonal sum.
template <class T>
Matrix<T> direct_sum(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  Matrix<T> r(a.rows() + b.rows(), a.cols() + b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
  return r;
}

}  // namespace l2approx
