#include "l2approx/exact_linalg.hpp"

#include <cmath>

namespace l2approx {

std::size_t rank_bareiss(Matrix<Integer> m) {
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = m.rows();
    for (std::size_t i = r; i < m.rows(); ++i)
      if (sgn(m(i, c)) != 0) {
        piv = i;
        break;
      }
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        Integer v = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = std::move(v);
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

std::vector<double> lemma_b_bound(double C, double K, std::size_t k) {
  if (!(C > 0.0)) throw InvalidArgument("lemma_b_bound needs C > 0");
  if (!(K >= 1.0)) throw InvalidArgument("lemma_b_bound needs K >= 1");
  std::vector<double> out;
  double coeff = 1.0;
  for (std::size_t r = 1; r <= k; ++r) {
    coeff *= (C + static_cast<double>(r) - 1.0) / static_cast<double>(r);
    out.push_back(coeff * std::pow(K, static_cast<double>(r)));
  }
  return out;
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

std::pair<Rational, Rational> lemma_b_identity(long C, long r) {
  if (C < 1 || r < 1) throw InvalidArgument("lemma_b_identity needs C, r >= 1");
  Integer sum = 1;
  for (long j = 1; j <= r - 1; ++j) sum += binomial(C + j - 1, j);
  Rational factor(C, r);
  factor.canonicalize();
  const Rational lhs = factor * Rational(sum);
  return {lhs, Rational(binomial(C + r - 1, r))};
}

}  // namespace l2approx
