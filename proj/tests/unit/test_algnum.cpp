#include <random>

#include "doctest.h"
#include "l2approx/algnum.hpp"

using namespace l2approx;

namespace {

IntPoly poly(std::initializer_list<long> c) {
  IntPoly p;
  for (long v : c) p.emplace_back(v);
  return p;
}

constexpr double kDeg = M_PI / 180.0;

}  // namespace

TEST_CASE("roots of cyclotomic and quadratic polynomials") {
  const auto r = poly_roots(poly({1, 1, 1}));
  REQUIRE(r.size() == 2);
  for (const auto& z : r) {
    CHECK(std::abs(std::abs(z.value) - 1.0) < 1e-15);
    CHECK(std::abs(z.value.real() + 0.5) < 1e-15);
    CHECK(z.radius < 1e-12);
  }
  const auto s = poly_roots(poly({-2, 0, 1}));
  CHECK(s[0].value.real() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s[1].value.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(poly_roots(poly({1, 0, 0, 0, 0, 0, 0, 0, 0, 1})), DegreeCap);
  CHECK(poly_roots(poly({1, 0, 0, 0, 0, 0, 0, 0, 0, 1}), 9).size() == 9);
}

TEST_CASE("irreducibility by root-subset trial factors") {
  CHECK(is_irreducible(poly({1, 1, 1})));
  CHECK(is_irreducible(poly({1, -1, -1, -1, 1})));
  CHECK_FALSE(is_irreducible(poly({-1, 0, 1})));
  CHECK_FALSE(is_irreducible(poly({1, 0, 2, 0, 1})));         // (z^2+1)^2
  CHECK_FALSE(is_irreducible(poly({-2, 1, 0, 0, -2, 1})));    // (z-2)(z^4+1)
  CHECK_FALSE(is_irreducible(poly({1, 0, 0, 0, 0, 0, 1})));   // phi_4 phi_12
  CHECK_FALSE(is_irreducible(poly({-1, 1, 1, 2})));           // (2z-1)(z^2+z+1)
  CHECK(is_irreducible(poly({-1, 0, 2})));
}

TEST_CASE("the quartic unit: factorisation, roots and the real root") {
  const auto fc = quartic_factorization();
  CHECK(fc.exact);
  for (const auto& c : fc.product_sqrt13) CHECK(c == 0);
  const AlgebraicNumber t = quartic_unit();
  CHECK(t.degree() == 4);
  CHECK(std::abs(std::abs(t.value()) - 1.0) < 1e-14);
  CHECK(std::arg(t.value()) / kDeg == doctest::Approx(130.6463).epsilon(1e-6));
  const AlgebraicNumber r = quartic_real_root_small();
  CHECK(r.value().real() == doctest::Approx(0.5807).epsilon(1e-4));
  // the other real root is 1/r
  double moduli[4];
  const auto c = t.conjugates();
  for (int i = 0; i < 4; ++i) moduli[i] = std::abs(c[i].value);
  std::sort(moduli, moduli + 4);
  CHECK(moduli[0] * moduli[3] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(moduli[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(moduli[2] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(quartic_unit(false).value() - std::conj(t.value())) < 1e-14);
}

TEST_CASE("arithmetic in Q(theta)") {
  const AlgebraicNumber t = quartic_unit();
  for (long n : {0L, 1L, 5L, 17L, 40L}) {
    const auto p = t.power(n);
    CHECK(p.expression().size() <= 4);
    // The certified radius must cover the direct power.
    CHECK(std::abs(p.value() - std::pow(t.value(), static_cast<double>(n))) <= p.radius() + 1e-13);
    CHECK(p.radius() < 1e-6);
    CHECK(p.is_algebraic_integer());
  }
  const auto half = t.with_expression({Rational(1, 2)});
  CHECK_FALSE(half.is_algebraic_integer());
  CHECK(AlgebraicNumber::rational_integer(3).value() == Complex(3.0));
  CHECK_THROWS_AS(AlgebraicNumber(poly({-1, 0, 1}), Complex(1.0)), InvalidArgument);
}

TEST_CASE("Liouville-type lower bound") {
  const AlgebraicNumber r = quartic_real_root_small();
  const double R = 1.0 / r.value().real();
  const auto rep = lemma_a_check(r, R + 1e-12);
  CHECK(rep.h == 4);
  CHECK(rep.bound == doctest::Approx(0.196).epsilon(2e-3));
  CHECK(rep.min_modulus == doctest::Approx(r.value().real()));
  CHECK(rep.norm_integral);
  CHECK(rep.pass);
  const auto two = lemma_a_check(AlgebraicNumber::rational_integer(2), 2.0);
  CHECK(two.pass);
  CHECK(two.bound == 1.0);
  CHECK_THROWS_AS(lemma_a_check(r, 1.0), HypothesisFailed);
}

TEST_CASE("norms of random algebraic integers are integers") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> c(-5, 5);
  int tried = 0;
  while (tried < 30) {
    const std::size_t deg = rng() % 2 ? 2 : 4;
    IntPoly f;
    for (std::size_t i = 0; i < deg; ++i) f.emplace_back(c(rng));
    f.emplace_back(1);
    if (f[0] == 0 || !is_irreducible(f)) continue;
    ++tried;
    const AlgebraicNumber a(f, Complex(0.0), true);
    double R = 0;
    for (const auto& z : a.conjugates()) R = std::max(R, std::abs(z.value));
    const auto rep = lemma_a_check(a, R);
    CHECK(rep.norm_integral);
    CHECK(std::abs(rep.norm.real() - f[0].get_d()) < 1e-8 * std::max(1.0, std::abs(f[0].get_d())));
    CHECK(rep.pass);
  }
}

TEST_CASE("unit circle but not a root of unity") {
  const auto q = unit_circle_but_not_root_of_unity(quartic_unit());
  CHECK(q.result);
  REQUIRE(q.evidence.has_value());
  CHECK(std::abs(*q.evidence) == doctest::Approx(0.5807).epsilon(1e-3));
  const AlgebraicNumber z8(cyclotomic_polynomial(8), std::polar(1.0, M_PI / 4));
  CHECK_FALSE(unit_circle_but_not_root_of_unity(z8).result);
  CHECK_FALSE(unit_circle_but_not_root_of_unity(AlgebraicNumber::rational_integer(1)).result);
  CHECK_THROWS_AS(unit_circle_but_not_root_of_unity(AlgebraicNumber::rational_integer(2)), InvalidArgument);
  CHECK(cyclotomic_index(cyclotomic_polynomial(12)) == 12u);
  CHECK(cyclotomic_index(poly({1, -1, -1, -1, 1})) == std::nullopt);
}

TEST_CASE("condition F on character sequences") {
  ArithmeticProfile prof;
  prof.N = {{"x", 1.0}, {"y", 1.0}, {"xy", 1.0}};
  const AlgebraicNumber z5(cyclotomic_polynomial(5), std::polar(1.0, 2 * M_PI / 5));
  std::map<std::string, std::vector<AlgebraicNumber>> cyc;
  for (long n = 0; n < 10; ++n) cyc["x"].push_back(z5.power(n));
  const auto ok = condition_f_check(prof, cyc);
  CHECK(ok.pass);
  CHECK(ok.galois_unitary);
  // e^{i n alpha}: Galois conjugates blow up like r^{-n}
  prof.N["x"] = 1000.0;
  std::map<std::string, std::vector<AlgebraicNumber>> bad;
  const AlgebraicNumber t = quartic_unit();
  for (long n = 0; n <= 20; ++n) bad["x"].push_back(t.power(n));
  const auto fail = condition_f_check(prof, bad);
  CHECK_FALSE(fail.pass);
  CHECK_FALSE(fail.galois_unitary);
  CHECK(fail.entries.back().max_modulus > 1000.0);
  CHECK(fail.entries.front().pass);
  std::map<std::string, std::vector<AlgebraicNumber>> zero{{"y", {AlgebraicNumber::rational_integer(0)}}};
  CHECK(condition_f_check(prof, zero).pass);
  std::map<std::string, std::vector<AlgebraicNumber>> missing{{"z", {AlgebraicNumber::rational_integer(0)}}};
  CHECK_THROWS_AS(condition_f_check(prof, missing), ProfileMissing);
}

TEST_CASE("profile submultiplicativity") {
  ArithmeticProfile prof;
  prof.N = {{"x", 2.0}, {"y", 3.0}, {"xy", 6.0}, {"xx", 4.0}};
  auto join = [](const std::string& a, const std::string& b) { return a + b; };
  CHECK(prof.submultiplicative(join));
  prof.N["xy"] = 7.0;
  CHECK_FALSE(prof.submultiplicative(join));
}
