#pragma once

// Exact ranks, Betti numbers and characteristic polynomials over Z, Q, F_p
// and cyclotomic fields, plus the Newton-identity machinery behind the
// coefficient bound for matrices with bounded power traces.

#include <cstddef>
#include <utility>
#include <vector>

#include "l2approx/errors.hpp"
#include "l2approx/matrix.hpp"
#include "l2approx/scalar.hpp"

namespace l2approx {

// Fraction-free elimination over Z; first nonzero pivot in every column.
std::size_t rank_bareiss(Matrix<Integer> m);

template <class T>
std::size_t rank(const Matrix<T>& a) {
  static_assert(scalar_traits<T>::exact, "rank is exact-only; use the spectral module for floats");
  if constexpr (std::is_same_v<T, Integer>) {
    return rank_bareiss(a);
  } else {
    using tr = scalar_traits<T>;
    Matrix<T> m = a;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
      std::size_t piv = m.rows();
      for (std::size_t i = r; i < m.rows(); ++i)
        if (!tr::is_zero(m(i, c))) {
          piv = i;
          break;
        }
      if (piv == m.rows()) continue;
      if (piv != r)
        for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
      const T inv = tr::inverse(m(r, c));
      for (std::size_t i = r + 1; i < m.rows(); ++i) {
        if (tr::is_zero(m(i, c))) continue;
        const T f = m(i, c) * inv;
        for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
      }
      ++r;
    }
    return r;
  }
}

// Dimension of the kernel acting on column vectors: cols - rank.
template <class T>
std::size_t nullity(const Matrix<T>& a) {
  return a.cols() - rank(a);
}

// Entrywise image of an integer matrix in another domain.
template <class T>
Matrix<T> convert(const Matrix<Integer>& a, const T& like) {
  Matrix<T> r(a.rows(), a.cols(), scalar_traits<T>::zero(like));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = from_integer<T>(a(i, j), like);
  return r;
}

// Number of cells in degree i of a complex given by boundaries (row-vector
// convention: boundaries[j] is d_{j+1} with #(j+1)-cells rows, #j-cells cols).
template <class T>
std::size_t chain_dimension(const std::vector<Matrix<T>>& boundaries, std::size_t i) {
  if (i < boundaries.size()) return boundaries[i].cols();
  if (i == boundaries.size() && !boundaries.empty()) return boundaries.back().rows();
  return 0;
}

// Throws NotAComplex when a consecutive product d_{j+1} d_j is nonzero or the
// shapes do not chain.
template <class T>
void check_complex(const std::vector<Matrix<T>>& b) {
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    if (b[j + 1].cols() != b[j].rows())
      throw NotAComplex("boundary shapes do not chain at degree " + std::to_string(j + 1));
    if (!is_zero_matrix(multiply(b[j + 1], b[j])))
      throw NotAComplex("d_" + std::to_string(j + 2) + " d_" + std::to_string(j + 1) + " != 0");
  }
}

// dim ker d_i - rank d_{i+1}.
template <class T>
std::size_t betti(const std::vector<Matrix<T>>& boundaries, std::size_t i) {
  check_complex(boundaries);
  const std::size_t dim = chain_dimension(boundaries, i);
  const std::size_t rank_out = (i >= 1 && i - 1 < boundaries.size()) ? rank(boundaries[i - 1]) : 0;
  const std::size_t rank_in = i < boundaries.size() ? rank(boundaries[i]) : 0;
  return dim - rank_out - rank_in;
}

template <class T>
struct CharPolyReport {
  // Monic coefficients c_0..c_n of det(t - m) = sum c_k t^k.
  std::vector<T> coefficients;
  // Elementary symmetric functions s_1..s_n of the eigenvalues.
  std::vector<T> symmetric;
  std::size_t nullity = 0;  // multiplicity of t as a factor
  T tail{};                 // lowest nonzero coefficient, i.e. qbar(0)
};

// Berkowitz's division-free algorithm; valid over any commutative ring, so
// integer input yields integer coefficients without fractions.
template <class T>
CharPolyReport<T> char_poly(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InvalidArgument("char_poly needs a square matrix");
  const T like = n == 0 ? T{} : a(0, 0);
  const T zero = scalar_traits<T>::zero(like), one = scalar_traits<T>::from_int(1, like);
  // vect holds det(t - A_r) for the leading r x r block, highest degree first.
  std::vector<T> vect{one};
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<T> c(r + 2, zero);
    c[0] = one;
    c[1] = -a(r, r);
    std::vector<T> x(r);
    for (std::size_t i = 0; i < r; ++i) x[i] = a(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      T dot = zero;
      for (std::size_t i = 0; i < r; ++i) dot += a(r, i) * x[i];
      c[k + 2] = -dot;
      std::vector<T> nx(r, zero);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) nx[i] += a(i, j) * x[j];
      x = std::move(nx);
    }
    std::vector<T> next(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] += c[i - j] * vect[j];
    vect = std::move(next);
  }
  CharPolyReport<T> rep;
  rep.coefficients.assign(vect.rbegin(), vect.rend());
  // det(t - A) = sum_r (-1)^r s_r t^{n-r}
  for (std::size_t r = 1; r <= n; ++r) rep.symmetric.push_back(r % 2 ? -vect[r] : vect[r]);
  while (rep.nullity < n && scalar_traits<T>::is_zero(rep.coefficients[rep.nullity])) ++rep.nullity;
  rep.tail = rep.coefficients[rep.nullity];
  return rep;
}

// Power sums p_1..p_k to elementary symmetric functions s_1..s_k through
// r s_r = sum_{i=1..r} (-1)^{i-1} s_{r-i} p_i. Needs division by r, so the
// domain must be a field of characteristic 0 or larger than k.
template <class T>
std::vector<T> newton_from_traces(const std::vector<T>& p, std::size_t k) {
  if (p.size() < k) throw InvalidArgument("newton_from_traces: fewer traces than requested coefficients");
  if (k == 0) return {};
  const T like = p[0];
  std::vector<T> s{scalar_traits<T>::from_int(1, like)};
  for (std::size_t r = 1; r <= k; ++r) {
    T acc = scalar_traits<T>::zero(like);
    for (std::size_t i = 1; i <= r; ++i) {
      const T term = s[r - i] * p[i - 1];
      if (i % 2) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    const T rr = scalar_traits<T>::from_int(static_cast<long long>(r), like);
    if (scalar_traits<T>::is_zero(rr)) throw InvalidArgument("newton_from_traces: r vanishes in the domain");
    s.push_back(acc * scalar_traits<T>::inverse(rr));
  }
  s.erase(s.begin());
  return s;
}

// C (C+1) ... (C+r-1) / r! * K^r for r = 1..k.
std::vector<double> lemma_b_bound(double C, double K, std::size_t k);

// Both sides of (C/r) (sum_{j=1}^{r-1} binom(C+j-1, j) + 1) = binom(C+r-1, r)
// in exact arithmetic.
std::pair<Rational, Rational> lemma_b_identity(long C, long r);

Integer binomial(long n, long k);

}  // namespace l2approx
