#include <numeric>
#include <random>

#include "doctest.h"
#include "l2approx/io.hpp"

using namespace l2approx;

namespace {

template <class F>
void check_position(F&& f, std::size_t line, std::size_t column) {
  try {
    f();
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK(e.error_class() == ErrorClass::input);
  }
}

Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
  std::vector<Letter> letters;
  std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, rank - 1);
  std::bernoulli_distribution inv(0.5);
  for (std::size_t k = len(rng); k > 0; --k) letters.push_back(letter(gen(rng), inv(rng) ? -1 : 1));
  return Word(letters);
}

Presentation random_presentation(std::mt19937_64& rng) {
  const std::vector<std::vector<std::string>> names{{"x"}, {"x", "y"}, {"a", "b", "c"}, {"s1", "s2"}};
  Presentation p;
  p.generators = names[rng() % names.size()];
  for (std::size_t r = rng() % 3; r > 0; --r) {
    Word w = random_word(rng, p.rank(), 6);
    while (w.cyclically_reduced().is_identity()) w = random_word(rng, p.rank(), 6);
    p.relators.push_back(w.cyclically_reduced());
  }
  return p;
}

double random_double(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> e(-30, 30);
  return std::ldexp(u(rng), e(rng));
}

}  // namespace

TEST_CASE("statement layer") {
  const auto sts = parse_statements(
      "a = 1; b: [1, [2, 3]]   # comment\n"
      "c ≈ (1.5, -2)\n"
      "m = [[1, 2],\n"
      "     [3, 4]]\n"
      "x y^-1, 0.5, 0\n"
      "N(x y) = polar(1, 0.5)\n"
      "s = \"a b\"\n");
  REQUIRE(sts.size() == 7);
  CHECK(sts[0].key == "a");
  CHECK(sts[1].op == ":");
  CHECK(sts[1].single().as_list()[1].as_list()[1].as_long() == 3);
  CHECK(sts[2].op == "~");
  CHECK(sts[2].single().as_complex() == Complex(1.5, -2));
  CHECK(sts[3].single().as_list().size() == 2);
  CHECK(sts[3].pos.line == 3);
  CHECK(sts[4].key.empty());
  CHECK(sts[4].values.size() == 3);
  CHECK(sts[4].values[0].as_text() == "x y^-1");
  CHECK(sts[5].key == "N(x y)");
  CHECK(std::abs(sts[5].single().as_complex() - std::polar(1.0, 0.5)) == 0);
  CHECK(sts[6].single().kind == Value::Kind::string);
  CHECK(sts[6].single().as_text() == "a b");
  CHECK(Value{Value::Kind::scalar, "-3/6", {}, {}}.as_rational() == Rational(-1, 2));
  CHECK(Value{Value::Kind::scalar, "0.25", {}, {}}.as_rational() == Rational(1, 4));
}

TEST_CASE("parse errors carry line and column") {
  check_position([] { parse_statements("a = [1, 2\nb = 3\n"); }, 1, 1);
  check_position([] { parse_statements("a = 1\nb = 2]\n"); }, 2, 6);
  check_position([] { parse_statements("a = 1\n  b = [1 2, 3] 4\n"); }, 2, 16);
  check_position([] { parse_statements("s = \"open\n"); }, 1, 1);
  check_position([] { parse_presentation("generators = [x, y]\nrelators = [x z]\n"); }, 2, 13);
  check_position([] { parse_presentation("generators = [x]\nfoo = 1\n"); }, 2, 1);
  check_position([] { parse_presentation("relators = []\n"); }, 1, 1);
  check_position([] { parse_coset_table("index = 3\nx = [0, 1, 7]\n"); }, 2, 12);
  check_position([] { parse_coset_table("index = 2\nx = (0 1)(1)\n"); }, 2, 5);
  check_position([] { parse_tower_spec("cyclic: 2\ncyclic: 9..3\n"); }, 2, 9);
  check_position([] { parse_profile("h = 1\nN = 0.5\n"); }, 2, 1);
  check_position([] { parse_bundle("weights = [1]\nxi = (1, 2, 3)\n"); }, 2, 6);
  check_position([] { parse_algebraic("minpoly = [1, 0, x]; root ~ 1\n"); }, 1, 18);
  // the same stream parsed through different readers reports the same place
  check_position([] { parse_complex("generators = [x]\nd1 = [1, 1]\n0, 4, [[1, \"x\"]]\n"); }, 3, 1);
}

TEST_CASE("presentation files") {
  const Presentation p = parse_presentation(
      "# trefoil\n"
      "generators = [x, y]\n"
      "relators = [x y x y^-1 x^-1 y^-1]\n");
  CHECK(p.rank() == 2);
  CHECK(p.relators[0] == parse_word("x y x y^-1 x^-1 y^-1", p.generators));
  CHECK(parse_presentation(serialize_presentation(p)) == p);
  // exponent tokens and the free group
  const Presentation q = parse_presentation("generators = [a]\nrelators = [a^5]\n");
  CHECK(q.relators[0].length() == 5);
  CHECK(parse_presentation("generators = [a, b]").relators.empty());
  CHECK_THROWS_AS(parse_presentation("generators = [x, x]"), ParseError);
  CHECK_THROWS_AS(parse_presentation("generators = [x]\nrelators = [x y]"), ParseError);
}

TEST_CASE("complexes with explicit boundary blocks") {
  const Presentation p = parse_presentation("generators = [x, y]\nrelators = [x y x^-1 y^-1]");
  const GroupComplex pc = presentation_complex(p);
  CHECK(parse_complex(serialize_presentation(p)) == pc);
  CHECK(parse_complex(serialize_complex(pc)) == pc);
  const GroupComplex c = parse_complex(
      "generators = [x]\n"
      "d1 = [1, 1]\n"
      "0, 0, [[1, \"x\"], [-1, \"\"]]\n");
  REQUIRE(c.boundaries.size() == 1);
  CHECK(c.boundaries[0].at(0, 0).terms().size() == 2);
  CHECK_THROWS_AS(parse_complex("generators = [x]\nd2 = [1, 1]\n"), ParseError);
  CHECK_THROWS_AS(parse_complex("generators = [x]\nd1 = [1, 2]\nd2 = [1, 3]\n"), ParseError);
}

TEST_CASE("coset tables in list and cycle notation") {
  const Presentation eight{{"x", "y"}, {}};
  const CosetTable a = parse_coset_table("index = 4\nx = [1, 2, 3, 0]\ny = (0 2)(1 3)\n", &eight);
  CHECK(a == cyclic_table(eight, {1, 2}, 4));
  CHECK(parse_coset_table("index = 3\nx = ()\ny = (0 1 2)\n").action()[0] == Permutation{0, 1, 2});
  CHECK(parse_coset_table(serialize_coset_table(a, eight.generators), &eight) == a);
  CHECK_THROWS_AS(parse_coset_table("index = 2\nx = [0, 1]\n", &eight), ParseError);
  CHECK_THROWS_AS(parse_coset_table("index = 2\nx = [1, 0]\nz = [0, 1]\n", &eight), ParseError);
  // x^2 must act trivially for <x | x^2>
  const Presentation c2{{"x"}, {parse_word("x^2", {"x"})}};
  CHECK_THROWS(parse_coset_table("index = 3\nx = (0 1 2)\n", &c2));
}

TEST_CASE("tower descriptors") {
  const TowerSpec t = parse_tower_spec(
      "weights = [1, 0]\n"
      "cyclic: 2..4\n"
      "kernel-mod: 3^1..2\n"
      "table: level.txt\n");
  REQUIRE(t.entries.size() == 6);
  CHECK(t.entries[2].k == 4);
  CHECK(t.entries[4].exponent == 2);
  CHECK(t.entries[5].path == "level.txt");
  CHECK(parse_tower_spec(serialize_tower_spec(t)) == t);

  const Presentation eight{{"x", "y"}, {}};
  const Tower built = build_tower(parse_tower_spec("weights = [1, 0]\ncyclic: 2\nkernel-mod: 2^2\n"), eight);
  REQUIRE(built.levels.size() == 2);
  CHECK(built.levels[1] == cyclic_table(eight, {1, 0}, 4));
  CHECK(built.labels[1] == "Z/2^2");
  CHECK_THROWS_AS(build_tower(parse_tower_spec("weights = [1]\ncyclic: 2\n"), eight), InvalidArgument);
  CHECK_THROWS_AS(parse_tower_spec("weights = [1]\n"), ParseError);
  CHECK_THROWS_AS(parse_tower_spec("kernel-mod: 8\n"), ParseError);
}

TEST_CASE("character tables, profiles and algebraic literals") {
  const Presentation eight{{"x", "y"}, {}};
  const auto chi = parse_character_table("\"\", 1, 0\nx y^-1, 0.5, -0.25\n", eight);
  CHECK(chi.size() == 2);
  CHECK(chi.at(Word{}) == Complex(1, 0));
  CHECK(parse_character_table(serialize_character_table(chi, eight), eight) == chi);
  CHECK_THROWS_AS(parse_character_table("x, 1, 0\nx, 2, 0\n", eight), ParseError);

  const ProfileSpec pr = parse_profile("h = 1; M = 1; N = 16; L = 1\nN(x) = 2\nN(y^-1) = 3\na = 2\n");
  CHECK(pr.bound.N == 16);
  CHECK(pr.table.at("y^-1") == 3);
  CHECK(pr.cells == std::size_t{2});
  CHECK(parse_profile(serialize_profile(pr)) == pr);
  CHECK(pr.arithmetic().N.size() == 2);

  const AlgebraicNumber a = parse_algebraic("minpoly = [1, -1, -1, -1, 1]; root ≈ (1.3, -0.5)\n");
  CHECK(a.degree() == 4);
  CHECK(same_algebraic(parse_algebraic(serialize_algebraic(a)), a));
  const AlgebraicNumber b = parse_algebraic("minpoly = [-2, 0, 1]\nroot ~ -1.4\nexpr = [1/2, 3]\n");
  CHECK(b.value().real() == doctest::Approx(0.5 - 3 * std::sqrt(2.0)));
  CHECK(same_algebraic(parse_algebraic(serialize_algebraic(b)), b));
  CHECK_THROWS_AS(parse_algebraic("root ~ 1"), ParseError);
}

TEST_CASE("bundle sequences") {
  const Presentation eight{{"x", "y"}, {}};
  const BundleSpec b = parse_bundle(
      "weights = [1, 1]\n"
      "conjugate_pair = true\n"
      "xi = polar(1, 0.5)\n"
      "images = [[[(0, 1)]], [[2]]]\n"
      "zero_tol = 1e-14\n");
  REQUIRE(b.levels.size() == 2);
  CHECK(b.levels[1].images[1](0, 0) == Complex(2, 0));
  CHECK(parse_bundle(serialize_bundle(b)) == b);
  const auto reps = b.build(eight);
  CHECK(reps[0].dimension == 2);
  CHECK(reps[1].images[0](1, 1) == Complex(0, -1));
  CHECK_THROWS_AS(parse_bundle("weights = [1]\n"), ParseError);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(20240611);
  for (int k = 0; k < 2000; ++k) {
    const double v = random_double(rng);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-0.0) == "0");
}

TEST_CASE("randomized serialise/parse round-trips") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Presentation p = random_presentation(rng);
    CHECK(parse_presentation(serialize_presentation(p)) == p);

    GroupComplex c;
    c.presentation = p;
    const std::size_t n0 = 1 + rng() % 2, n1 = 1 + rng() % 3, n2 = rng() % 3;
    IntMatrix d1(n1, n0), d2(n2, n1);
    for (IntMatrix* m : {&d1, &d2})
      for (std::size_t i = 0; i < m->rows(); ++i)
        for (std::size_t j = 0; j < m->cols(); ++j) {
          IntElement e;
          for (std::size_t t = rng() % 3; t > 0; --t)
            e.add_term(random_word(rng, p.rank(), 4), Integer(static_cast<long>(rng() % 7) - 3));
          m->set(i, j, e);
        }
    c.boundaries = {d1, d2};
    CHECK(parse_complex(serialize_complex(c)) == c);

    const std::size_t n = 1 + rng() % 7;
    std::vector<Permutation> act;
    for (std::size_t g = 0; g < p.rank(); ++g) {
      Permutation perm(n);
      std::iota(perm.begin(), perm.end(), 0u);
      std::shuffle(perm.begin(), perm.end(), rng);
      act.push_back(perm);
    }
    const CosetTable t(n, act);
    CHECK(parse_coset_table(serialize_coset_table(t, p.generators)) == t);

    TowerSpec ts;
    if (rng() % 2) ts.weights = std::vector<long>{static_cast<long>(rng() % 5) - 2, 1};
    for (std::size_t e = 1 + rng() % 4; e > 0; --e) {
      switch (rng() % 3) {
        case 0: ts.entries.push_back({TowerSpec::Entry::Kind::cyclic, 1 + rng() % 50, 0, ""}); break;
        case 1: ts.entries.push_back({TowerSpec::Entry::Kind::kernel_mod, 2 + rng() % 5, unsigned(rng() % 6), ""}); break;
        default: ts.entries.push_back({TowerSpec::Entry::Kind::table, 0, 0, "lvl" + std::to_string(rng() % 9) + ".txt"});
      }
    }
    CHECK(parse_tower_spec(serialize_tower_spec(ts)) == ts);

    std::map<Word, Complex> chi;
    for (std::size_t k = 1 + rng() % 5; k > 0; --k)
      chi[random_word(rng, p.rank(), 5)] = Complex(random_double(rng), random_double(rng));
    CHECK(parse_character_table(serialize_character_table(chi, p), p) == chi);

    ProfileSpec pr;
    pr.bound.h = 1 + rng() % 3;
    pr.bound.M = 1 + std::abs(random_double(rng));
    pr.bound.N = 1 + std::abs(random_double(rng));
    pr.bound.L = 1 + std::abs(random_double(rng));
    if (rng() % 2) pr.cells = 1 + rng() % 4;
    for (const auto& g : p.generators) pr.table[g] = 1 + std::abs(random_double(rng));
    CHECK(parse_profile(serialize_profile(pr)) == pr);

    BundleSpec bs;
    bs.weights = std::vector<long>(p.rank(), 1);
    bs.conjugate_pair = rng() % 2;
    if (rng() % 2) bs.mu = 1 + std::abs(random_double(rng));
    if (rng() % 2) bs.zero_tol = std::abs(random_double(rng));
    for (std::size_t l = 1 + rng() % 3; l > 0; --l) {
      BundleSpec::Level lv;
      if (rng() % 2) {
        lv.xi = Complex(random_double(rng), random_double(rng));
      } else {
        for (std::size_t g = 0; g < p.rank(); ++g) {
          ComplexMatrix m(2, 2, 0.0);
          for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
              m(i, j) = rng() % 2 ? Complex(random_double(rng), 0) : Complex(random_double(rng), random_double(rng));
          lv.images.push_back(m);
        }
      }
      bs.levels.push_back(lv);
    }
    CHECK(parse_bundle(serialize_bundle(bs)) == bs);
  }
}

TEST_CASE("randomized algebraic literals round-trip") {
  std::mt19937_64 rng(11);
  const std::vector<IntPoly> polys{{-2, 0, 1}, {1, 1, 1}, {1, -1, -1, -1, 1}, {-1, -1, 0, 1}, {1, 0, 0, 0, 1}};
  for (int trial = 0; trial < 40; ++trial) {
    const IntPoly& f = polys[rng() % polys.size()];
    const AlgebraicNumber base(f, Complex(0, 0));
    const auto roots = base.conjugates();
    const auto& r = roots[rng() % roots.size()];
    AlgebraicNumber a(f, r.value);
    RatPoly e;
    for (std::size_t k = 0; k < f.size() - 1; ++k) {
      Rational q(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 4));
      q.canonicalize();
      e.push_back(q);
    }
    if (rng() % 2) a = a.with_expression(e);
    const AlgebraicNumber back = parse_algebraic(serialize_algebraic(a));
    CHECK(same_algebraic(back, a));
  }
}
