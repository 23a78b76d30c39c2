#pragma once

// Coefficient domains. The set is closed: exact integers and rationals (GMP),
// prime fields F_p, cyclotomic fields Q(zeta_n) and complex doubles. Values of
// the parameterised domains (F_p, Q(zeta_n)) carry their parameter, so a
// matrix over F_7 never needs a side channel to know its modulus.

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

namespace l2approx {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

class Fp {
 public:
  Fp() = default;
  Fp(std::int64_t value, std::uint64_t modulus);

  std::uint64_t value() const noexcept { return v_; }
  std::uint64_t modulus() const noexcept { return p_; }

  Fp& operator+=(const Fp& o);
  Fp& operator-=(const Fp& o);
  Fp& operator*=(const Fp& o);
  Fp operator-() const { return Fp(v_ == 0 ? 0 : static_cast<std::int64_t>(p_ - v_), p_); }
  Fp inverse() const;

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_ && a.p_ == b.p_; }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

 private:
  std::uint64_t v_ = 0;
  std::uint64_t p_ = 0;
};

// Shared description of Q(zeta_n): the order n and the integer coefficients of
// Phi_n (low degree first, monic).
struct CyclotomicContext {
  unsigned order = 1;
  std::vector<Integer> phi;
  std::size_t degree() const { return phi.size() - 1; }
};

std::vector<Integer> cyclotomic_polynomial(unsigned n);
std::shared_ptr<const CyclotomicContext> cyclotomic_context(unsigned n);

// Element of Q(zeta_n) as a polynomial in zeta of degree < phi(n).
class Cyclotomic {
 public:
  Cyclotomic() = default;
  explicit Cyclotomic(std::shared_ptr<const CyclotomicContext> ctx);
  Cyclotomic(std::shared_ptr<const CyclotomicContext> ctx, const Rational& scalar);

  // zeta_n^k for any integer k.
  static Cyclotomic root_of_unity(unsigned n, long k);

  const std::shared_ptr<const CyclotomicContext>& context() const { return ctx_; }
  unsigned order() const { return ctx_ ? ctx_->order : 1; }
  const std::vector<Rational>& coefficients() const { return c_; }

  bool is_zero() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic operator-() const;
  Cyclotomic inverse() const;
  // Complex conjugation zeta -> zeta^{-1}.
  Cyclotomic conj() const;
  // Image under the embedding zeta -> exp(2 pi i k / n), gcd(k, n) = 1.
  Complex embed(unsigned k = 1) const;

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  std::string to_string() const;

 private:
  void align(const Cyclotomic& o);
  std::shared_ptr<const CyclotomicContext> ctx_;
  std::vector<Rational> c_;
};

// Uniform access to the domain operations the generic algorithms need. The
// `like` argument supplies the domain parameter (modulus, cyclotomic order).
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Integer> {
  static constexpr bool exact = true;
  static constexpr bool field = false;
  static Integer zero(const Integer&) { return 0; }
  static Integer from_int(long long v, const Integer&) { return Integer(std::to_string(v)); }
  static bool is_zero(const Integer& x) { return sgn(x) == 0; }
  static Integer conj(const Integer& x) { return x; }
  static Complex to_complex(const Integer& x) { return {x.get_d(), 0.0}; }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool field = true;
  static Rational zero(const Rational&) { return 0; }
  static Rational from_int(long long v, const Rational&) { return Rational(Integer(std::to_string(v))); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational conj(const Rational& x) { return x; }
  static Rational inverse(const Rational& x) { return 1 / x; }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
};

template <>
struct scalar_traits<Fp> {
  static constexpr bool exact = true;
  static constexpr bool field = true;
  static Fp zero(const Fp& like) { return Fp(0, like.modulus()); }
  static Fp from_int(long long v, const Fp& like) { return Fp(v, like.modulus()); }
  static bool is_zero(const Fp& x) { return x.value() == 0; }
  static Fp conj(const Fp& x) { return x; }
  static Fp inverse(const Fp& x) { return x.inverse(); }
};

template <>
struct scalar_traits<Cyclotomic> {
  static constexpr bool exact = true;
  static constexpr bool field = true;
  static Cyclotomic zero(const Cyclotomic& like) { return Cyclotomic(like.context()); }
  static Cyclotomic from_int(long long v, const Cyclotomic& like) {
    return Cyclotomic(like.context(), Rational(Integer(std::to_string(v))));
  }
  static bool is_zero(const Cyclotomic& x) { return x.is_zero(); }
  static Cyclotomic conj(const Cyclotomic& x) { return x.conj(); }
  static Cyclotomic inverse(const Cyclotomic& x) { return x.inverse(); }
  static Complex to_complex(const Cyclotomic& x) { return x.embed(1); }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr bool field = true;
  static Complex zero(const Complex&) { return 0.0; }
  static Complex from_int(long long v, const Complex&) { return static_cast<double>(v); }
  static bool is_zero(const Complex& x) { return x == Complex(0.0); }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static Complex inverse(const Complex& x) { return 1.0 / x; }
  static Complex to_complex(const Complex& x) { return x; }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr bool field = true;
  static double zero(const double&) { return 0.0; }
  static double from_int(long long v, const double&) { return static_cast<double>(v); }
  static bool is_zero(const double& x) { return x == 0.0; }
  static double conj(const double& x) { return x; }
  static double inverse(const double& x) { return 1.0 / x; }
  static Complex to_complex(const double& x) { return {x, 0.0}; }
};

// Converts an integer coefficient into the domain of `like`.
template <class T>
T from_integer(const Integer& v, const T& like) {
  if constexpr (std::is_same_v<T, Integer>) {
    return v;
  } else if constexpr (std::is_same_v<T, Rational>) {
    return Rational(v);
  } else if constexpr (std::is_same_v<T, Fp>) {
    Integer r = v % Integer(std::to_string(like.modulus()));
    return Fp(r.get_si(), like.modulus());
  } else if constexpr (std::is_same_v<T, Cyclotomic>) {
    return Cyclotomic(like.context(), Rational(v));
  } else {
    return T(v.get_d());
  }
}

std::string to_string(const Integer& v);
std::string to_string(const Rational& v);

}  // namespace l2approx
