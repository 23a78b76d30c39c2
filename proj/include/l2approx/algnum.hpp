#pragma once

// Algebraic numbers given by an integer minimal polynomial, a chosen root and
// a rational polynomial expression in that root.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/errors.hpp"
#include "l2approx/scalar.hpp"

namespace l2approx {

// Coefficients c_0..c_n.
using IntPoly = std::vector<Integer>;
using RatPoly = std::vector<Rational>;

struct CertifiedRoot {
  Complex value;
  double radius = 0.0;  // a true root lies within this distance
};

// Companion-matrix eigenvalues polished by Newton steps in long double. The
// radius is deg * |f(z) / f'(z)|, which always encloses a root. Throws
// DegreeCap past `cap`.
std::vector<CertifiedRoot> poly_roots(const IntPoly& f, std::size_t cap = 8);

// Trial factorisation over the complex roots: tries every root subset as a
// candidate factor and confirms candidates by exact division.
bool is_irreducible(const IntPoly& f, std::size_t cap = 8);

// Content removed, positive leading coefficient.
IntPoly primitive_part(IntPoly f);

class AlgebraicNumber {
 public:
  AlgebraicNumber() = default;
  // The root of `minpoly` nearest to `hint`. Checks irreducibility unless
  // declared.
  AlgebraicNumber(IntPoly minpoly, Complex hint, bool declared_irreducible = false, std::size_t cap = 8);
  static AlgebraicNumber rational_integer(long v);

  const IntPoly& minpoly() const noexcept { return f_; }
  std::size_t degree() const noexcept { return f_.size() - 1; }
  std::size_t root_index() const noexcept { return index_; }
  // Polynomial in the defining root representing this number.
  const RatPoly& expression() const noexcept { return expr_; }

  Complex value() const;
  double radius() const;

  // Same field, new expression p(theta) reduced mod the minimal polynomial.
  AlgebraicNumber with_expression(RatPoly p) const;
  AlgebraicNumber power(long n) const;

  // sigma_j(this) for every embedding of Q(theta), in root order.
  std::vector<CertifiedRoot> conjugates() const;

  bool is_algebraic_integer() const;

 private:
  IntPoly f_{0, 1};
  std::vector<CertifiedRoot> roots_{{Complex(0.0), 0.0}};
  std::vector<std::complex<long double>> polished_{0.0L};  // roots_ before rounding to double
  std::size_t index_ = 0;
  RatPoly expr_{0, 1};
};

std::vector<CertifiedRoot> conjugates(const AlgebraicNumber& a);

struct LemmaAReport {
  double min_modulus = 0.0;
  double max_modulus = 0.0;
  double bound = 0.0;  // R^{1-h}
  std::size_t h = 0;
  Complex norm;
  double norm_distance = 0.0;  // distance from the nearest integer
  bool norm_integral = false;
  bool pass = false;
};

// Requires every conjugate to have modulus <= R (else HypothesisFailed).
LemmaAReport lemma_a_check(const AlgebraicNumber& a, double R, double tol = 1e-8);

struct UnitCircleReport {
  bool result = false;
  std::optional<Complex> evidence;  // the conjugate off the unit circle
  std::string reason;
};

UnitCircleReport unit_circle_but_not_root_of_unity(const AlgebraicNumber& a, double tol = 1e-8);

// phi_n as an IntPoly, or nullopt when primitive_part(f) is not cyclotomic.
std::optional<unsigned> cyclotomic_index(const IntPoly& f);

struct ArithmeticProfile {
  std::size_t h = 1;
  Integer M = 1;
  std::map<std::string, double> N;  // majorant N(g) keyed by word text
  double L = 1.0;

  // Spot check N(gg') <= N(g) N(g') on every pair whose product is listed.
  // `product` joins two keys into the key of their product.
  bool submultiplicative(const std::function<std::string(const std::string&, const std::string&)>& product) const;
};

struct ConditionFEntry {
  std::string g;
  std::size_t level = 0;
  double bound = 0.0;
  double max_modulus = 0.0;
  std::size_t worst_embedding = 0;
  Complex worst_value;
  bool pass = true;
};

struct ConditionFReport {
  std::vector<ConditionFEntry> entries;
  bool pass = true;
  // True when every embedding preserved the modulus of every value.
  bool galois_unitary = true;
};

// values[g][k] is the character value at g on level k.
ConditionFReport condition_f_check(const ArithmeticProfile& profile,
                                   const std::map<std::string, std::vector<AlgebraicNumber>>& values);

// z^4 - z^3 - z^2 - z + 1.
AlgebraicNumber quartic_unit(bool upper_half = true);
AlgebraicNumber quartic_real_root_small();

struct QuarticFactorCheck {
  std::vector<Rational> product_rational;  // coefficients in Q
  std::vector<Rational> product_sqrt13;    // coefficients of sqrt(13); must vanish
  bool exact = false;
};

// Multiplies (z^2 - ((1+s)/2) z + 1)(z^2 - ((1-s)/2) z + 1) with s^2 = 13 in
// Q(sqrt 13) arithmetic and compares with the quartic.
QuarticFactorCheck quartic_factorization();

}  // namespace l2approx
