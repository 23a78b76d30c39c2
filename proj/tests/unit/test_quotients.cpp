#include <random>

#include "doctest.h"
#include "l2approx/fox.hpp"
#include "l2approx/quotients.hpp"

using namespace l2approx;

namespace {

const Word x = Word::generator(0);
const Word y = Word::generator(1);

Presentation circle() { return {{"x"}, {}}; }
Presentation figure_eight() { return {{"x", "y"}, {}}; }
Presentation s3_presentation() {
  // <a, b | a^2, b^3, (ab)^2>
  Presentation p{{"a", "b"}, {}};
  p.relators = {parse_word("a^2", p.generators), parse_word("b^3", p.generators),
                parse_word("a b a b", p.generators)};
  return p;
}

Rational ratio(std::size_t a, std::size_t b) {
  Rational r(static_cast<long>(a), static_cast<long>(b));
  r.canonicalize();
  return r;
}

std::size_t count_fixed(const Permutation& p) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) n += p[i] == i;
  return n;
}

}  // namespace

TEST_CASE("Todd-Coxeter on cyclic covers of the circle") {
  const CosetTable t = todd_coxeter(circle(), {x.power(3)}, 100);
  CHECK(t.index() == 3);
  CHECK(t.action()[0] == Permutation{1, 2, 0});
  CHECK(todd_coxeter(circle(), {x}, 10).index() == 1);
  CHECK_THROWS_AS(todd_coxeter(circle(), {x.power(50)}, 10), EnumerationOverflow);
}

TEST_CASE("Todd-Coxeter index-2 kernel on the figure-eight") {
  // kernel of x -> 1, y -> 0 mod 2 is generated by x^2, y, x y x^-1
  const CosetTable t = todd_coxeter(figure_eight(), {x * x, y, x * y * x.inverse()}, 100);
  CHECK(t.index() == 2);
  CHECK(t == standardize(cyclic_table(figure_eight(), {1, 0}, 2)));
  CHECK(todd_coxeter(figure_eight(), {x, y}, 5).index() == 1);
}

TEST_CASE("Todd-Coxeter with relators and coincidences") {
  const Presentation s3 = s3_presentation();
  CHECK(todd_coxeter(s3, {}, 1000).index() == 6);
  const CosetTable t = todd_coxeter(s3, {Word::generator(0)}, 1000);
  CHECK(t.index() == 3);
  CHECK_FALSE(t.is_normal());
  CHECK(todd_coxeter(s3, {Word::generator(1)}, 1000).is_normal());
  // Z/2 x Z/3 via torus relator: subgroup <x^2, y^3> has index 6
  Presentation torus{{"x", "y"}, {Word({1, 2, -1, -2})}};
  const CosetTable tt = todd_coxeter(torus, {x * x, y.power(3)}, 1000);
  CHECK(tt.index() == 6);
  CHECK(tt.is_normal());
  // deterministic numbering
  CHECK(tt == todd_coxeter(torus, {x * x, y.power(3)}, 1000));
}

TEST_CASE("coset table validation") {
  CHECK_THROWS_AS(CosetTable(2, {{0, 0}}), InvalidTower);
  const CosetTable intransitive(2, {{0, 1}});
  CHECK_THROWS_AS(intransitive.validate(circle()), InvalidTower);
  const CosetTable bad(3, {{1, 0, 2}, {0, 1, 2}});
  Presentation torus{{"x", "y"}, {Word({1, 2, -1, -2})}};
  CHECK_THROWS_AS(bad.validate(torus), InvalidTower);
  CHECK_THROWS_AS(cyclic_table(Presentation{{"x"}, {x.power(2)}}, {1}, 3), InvalidTower);
}

TEST_CASE("permutation character") {
  const CosetTable t = cyclic_table(circle(), {1}, 4);
  CHECK(permutation_character(t, Word{}) == 1);
  for (long m = -9; m <= 9; ++m) CHECK(permutation_character(t, x.power(m)) == (m % 4 == 0 ? 1 : 0));
  const CosetTable one = cyclic_table(figure_eight(), {1, 1}, 1);
  CHECK(permutation_character(one, x * y) == 1);
}

TEST_CASE("permutation character is a class function") {
  const Presentation s3 = s3_presentation();
  const CosetTable t = todd_coxeter(s3, {Word::generator(0)}, 100);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> l(-2, 2);
  for (int k = 0; k < 100; ++k) {
    std::vector<Letter> a, b;
    for (int i = 0; i < 5; ++i) {
      int v = l(rng);
      a.push_back(v == 0 ? 1 : v);
      v = l(rng);
      b.push_back(v == 0 ? -1 : v);
    }
    const Word g(a), h(b);
    CHECK(permutation_character(t, h * g * h.inverse()) == permutation_character(t, g));
  }
}

TEST_CASE("conjugate subgroup statistics") {
  const CosetTable circ = cyclic_table(circle(), {1}, 5);
  auto s = conjugate_subgroup_stats(circ, x);
  CHECK(s.n_total == 1);
  CHECK(s.n_of_g == 0);
  s = conjugate_subgroup_stats(circ, x.power(5));
  CHECK(s.n_of_g == 1);

  const Presentation s3 = s3_presentation();
  const CosetTable t = todd_coxeter(s3, {Word::generator(0)}, 100);
  CHECK(t.index() == 3);
  const Word transposition = Word::generator(0);
  s = conjugate_subgroup_stats(t, transposition);
  CHECK(s.image_order == 6);
  CHECK(s.n_total == 3);
  CHECK(s.n_of_g == 1);
  s = conjugate_subgroup_stats(t, Word{});
  CHECK(s.n_of_g == s.n_total);
  CHECK_THROWS_AS(conjugate_subgroup_stats(t, transposition, 3), ImageTooLarge);
}

TEST_CASE("conjugate fraction equals the permutation character on non-normal examples") {
  // Non-normal subgroups of free groups. The last table is the dihedral group
  // on a square, where opposite corners share a stabiliser (n_total = 2).
  std::vector<CosetTable> tables{
      CosetTable(3, {{1, 0, 2}, {0, 2, 1}}),      // S3 on 3 points
      CosetTable(4, {{1, 2, 3, 0}, {1, 0, 2, 3}}),  // S4 on 4 points
      CosetTable(4, {{1, 0, 3, 2}, {0, 2, 1, 3}}),
  };
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> l(-2, 2);
  for (const auto& t : tables) {
    for (int k = 0; k < 60; ++k) {
      std::vector<Letter> a;
      for (int i = 0; i < 6; ++i) {
        int v = l(rng);
        if (v != 0) a.push_back(v);
      }
      const Word g(a);
      const auto s = conjugate_subgroup_stats(t, g);
      CHECK(ratio(s.n_of_g, s.n_total) == permutation_character(t, g));
      CHECK(ratio(count_fixed(t.permutation(g)), t.index()) == permutation_character(t, g));
    }
  }
  CHECK(conjugate_subgroup_stats(tables[2], Word{}).n_total == 2);
}

TEST_CASE("normality detection") {
  CHECK(cyclic_table(figure_eight(), {1, 2}, 7).is_normal());
  CHECK_FALSE(CosetTable(3, {{1, 0, 2}, {0, 2, 1}}).is_normal());
}

TEST_CASE("tower validation") {
  Tower tw;
  tw.levels = {cyclic_table(circle(), {1}, 2), cyclic_table(circle(), {1}, 4)};
  CHECK_NOTHROW(tw.validate(circle()));
  CHECK(tw.normal == std::vector<bool>{true, true});
  Tower bad;
  bad.levels = {cyclic_table(circle(), {1}, 4), cyclic_table(circle(), {1}, 2)};
  CHECK_THROWS_AS(bad.validate(circle()), InvalidTower);
}

TEST_CASE("specialisation through coset tables") {
  const GroupComplex c = presentation_complex(circle());
  IntMatrix d(1, 1);
  d.set(0, 0, IntElement::monomial(Word{}, Integer(1)) - IntElement::monomial(x, Integer(1)));
  const CosetTable t = cyclic_table(circle(), {1}, 3);
  const Matrix<Rational> m = specialize(d, t, Rational(0));
  CHECK(m.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(m(i, j) == (i == j ? 1 : 0) - (j == (i + 1) % 3 ? 1 : 0));

  // trivial rep kills 1 - t
  const auto triv = make_rep(circle(), std::vector<Matrix<Rational>>{Matrix<Rational>(1, 1, Rational(1))});
  CHECK(specialize(d, triv)(0, 0) == 0);
  CHECK(triv.unitary);

  // figure-eight d1 through index 2 is 4 x 2
  const CosetTable t2 = cyclic_table(figure_eight(), {1, 0}, 2);
  const Matrix<Rational> d1 = specialize(presentation_complex(figure_eight()).boundaries[0], t2, Rational(0));
  CHECK(d1.rows() == 4);
  CHECK(d1.cols() == 2);
}

TEST_CASE("permutation representation matches table specialisation") {
  const CosetTable t = cyclic_table(figure_eight(), {1, 2}, 5);
  const auto rep = permutation_rep(t, Rational(0));
  const IntMatrix d = presentation_complex(figure_eight()).boundaries[0];
  CHECK(specialize(d, rep) == specialize(d, t, Rational(0)));
}

TEST_CASE("specialisation is functorial") {
  const Presentation p = figure_eight();
  const CosetTable t(3, {{1, 0, 2}, {0, 2, 1}});
  const auto rep = permutation_rep(t, Rational(0));
  const IntMatrix d = presentation_complex(p).boundaries[0];
  const IntMatrix h = half_laplacian(d);
  CHECK(specialize(h, rep) == multiply(specialize(d, rep), adjoint(specialize(d, rep))));
  const IntMatrix h2 = multiply(h, h);
  CHECK(specialize(h2, t, Rational(0)) == multiply(specialize(h, t, Rational(0)), specialize(h, t, Rational(0))));
}

TEST_CASE("representations check relators and unitarity") {
  Presentation torus{{"x", "y"}, {Word({1, 2, -1, -2})}};
  const Matrix<Rational> a(1, 1, Rational(2));
  const auto rep = make_rep(torus, std::vector<Matrix<Rational>>{a, a});
  CHECK_FALSE(rep.unitary);
  Matrix<Rational> sw(2, 2, Rational(0)), dg(2, 2, Rational(0));
  sw(0, 1) = sw(1, 0) = 1;
  dg(0, 0) = 1;
  dg(1, 1) = 2;
  CHECK_THROWS_AS(make_rep(torus, std::vector<Matrix<Rational>>{sw, dg}), InvalidArgument);
  const auto lb = line_bundle(torus, {1, 0}, std::polar(1.0, 0.3));
  CHECK(lb.unitary);
  const auto ex = line_bundle_exact(torus, {1, 1}, 6, 1);
  CHECK(ex.unitary);
  const auto sum = direct_sum(ex, line_bundle_exact(torus, {1, 1}, 6, -1));
  CHECK(sum.dimension == 2);
  CHECK(sum.unitary);
}

TEST_CASE("induced characters") {
  const CosetTable t = cyclic_table(circle(), {1}, 2);
  const Complex xi = std::polar(1.0, 0.7);
  // chi on <t^2>: t^{2m} -> xi^m
  const ClassFunction chi = [&](const Word& w) {
    const long e = w.exponent_sums(1)[0];
    REQUIRE(e % 2 == 0);
    return std::pow(xi, static_cast<double>(e / 2));
  };
  CHECK(std::abs(induced_character(t, chi, x)) == 0.0);
  CHECK(std::abs(induced_character(t, chi, Word{}) - 2.0) < 1e-14);
  // explicit induced matrix for t: [[0, 1], [xi, 0]]
  Matrix<Complex> rho(2, 2, 0.0);
  rho(0, 1) = 1.0;
  rho(1, 0) = xi;
  const auto sq = multiply(rho, rho);
  const Complex trace = sq(0, 0) + sq(1, 1);
  CHECK(std::abs(induced_character(t, chi, x * x) - trace) < 1e-12);
  CHECK(std::abs(induced_character_normalized(t, chi, 1.0, x * x) - xi) < 1e-12);
  const auto cube = multiply(sq, sq);
  CHECK(std::abs(induced_character(t, chi, x.power(4)) - (cube(0, 0) + cube(1, 1))) < 1e-12);

  const CosetTable nn(3, {{1, 0, 2}, {0, 2, 1}});
  CHECK_THROWS_AS(induced_character(nn, chi, x), NotNormal);
}

TEST_CASE("tensor power characters") {
  const ClassFunction zero = [](const Word&) { return Complex(0.0); };
  CHECK(tensor_power_character(zero, 3, x) == Complex(0.0));
  const ClassFunction c = [](const Word&) { return Complex(1.5, 0.5); };
  CHECK(tensor_power_character(c, 1, x) == Complex(1.5, 0.5));
  double prev = 1.0;
  for (std::size_t k = 1; k < 30; ++k) {
    const double v = std::abs(tensor_power_character(c, k, x)) / std::pow(2.0, static_cast<double>(k));
    CHECK(v < prev);
    prev = v;
  }
}
