// Acceptance run: one PASS/FAIL line per criterion, with the measured values.
// Exits 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "l2approx/algnum.hpp"
#include "l2approx/asymptotics.hpp"
#include "l2approx/char_moments.hpp"
#include "l2approx/char_p.hpp"
#include "l2approx/examples.hpp"
#include "l2approx/exact_linalg.hpp"
#include "l2approx/fixtures.hpp"
#include "l2approx/fox.hpp"
#include "l2approx/io.hpp"
#include "l2approx/spectral.hpp"

using namespace l2approx;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Accumulates sub-checks; the first few failures are kept in the detail.
class Checker {
 public:
  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass_ = false;
    if (++failures_ <= 3) failed_ += (failed_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Verdict verdict() const {
    std::string d = notes_;
    if (!pass_) d += (d.empty() ? "" : " | ") + std::string("failed: ") + failed_;
    if (failures_ > 3) d += " (+" + std::to_string(failures_ - 3) + " more)";
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string failed_, notes_;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

Tower fixture_tower(const std::string& name, const Presentation& p) {
  return build_tower(parse_tower_spec(fixture(name)), p);
}

GrowthProcess bundle_fixture(const std::string& name, const GroupComplex& c, std::size_t degree) {
  const BundleSpec b = parse_bundle(fixture(name));
  std::optional<std::vector<double>> mu;
  if (b.mu) mu = std::vector<double>(b.levels.size(), *b.mu);
  return bundle_process(c, b.build(c.presentation), degree, mu, b.zero_tol, name);
}

Word random_word(std::mt19937_64& rng, std::size_t gens, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, gens - 1);
  std::vector<Letter> l;
  for (std::size_t n = len(rng); n > 0; --n) l.push_back(letter(gen(rng), rng() % 2 ? 1 : -1));
  return Word(l);
}

IntElement random_element(std::mt19937_64& rng, std::size_t gens, std::size_t terms) {
  IntElement e;
  for (std::size_t i = 0; i < terms; ++i)
    e.add_term(random_word(rng, gens, 4), Integer(static_cast<long>(rng() % 7) - 3));
  return e;
}

// ---------------------------------------------------------------------------

Verdict figure_eight_tower() {
  Checker ck;
  const Presentation p = fixture_presentation("figure-eight.pres");
  const GroupComplex c = presentation_complex(p);
  const Tower t = fixture_tower("figure-eight-cyclic.tower", p);
  const auto proc = tower_process(c, t.levels, 1);
  for (const auto& l : proc.levels) {
    const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / l.mu));
    // Euler characteristic of the n-fold graph cover: 1 - b1 = n (1 - 2)
    ck.check(l.betti_exact && l.betti == n + 1, "b1 at n = " + std::to_string(n));
  }
  const auto rep = analyze(proc, LambdaGrid::standard(), LimitPolicy{});
  ck.check(proc.levels.size() == 63, "levels 2..64");
  ck.check(std::abs(rep.projdim.value - 1.0) <= 0.05, "projdim");
  ck.check(rep.tordim && *rep.tordim <= 0.02, "tordim");
  ck.note("projdim " + fmt(rep.projdim.value));
  ck.note("tordim " + (rep.tordim ? fmt(*rep.tordim) : std::string("n/a")));
  return ck.verdict();
}

Verdict circle_tower() {
  Checker ck;
  const Presentation p = fixture_presentation("circle.pres");
  const GroupComplex c = presentation_complex(p);
  const auto proc = tower_process(c, fixture_tower("circle-cyclic.tower", p).levels, 1);
  for (std::size_t k = 0; k < proc.levels.size(); ++k)
    ck.check(proc.levels[k].betti == 1 && std::abs(proc.levels[k].mu - 1.0 / (k + 1)) < 1e-15,
             "b1 at k = " + std::to_string(k + 1));
  ck.check(proc.levels.size() == 32, "levels 1..32");
  const double last = proc.levels.back().normalized_betti();
  ck.check(last <= 0.05, "estimate at k = 32");
  ck.note("normalized b1 at k = 32: " + fmt(last));
  return ck.verdict();
}

Verdict trefoil_jump() {
  Checker ck;
  const Json r = run_example("trefoil-jump").result;
  ck.check(r["off_root_all_zero"].get<bool>(), "dim H1 = 0 off the roots");
  std::string dims;
  for (const auto& e : r["exact_roots"]) {
    ck.check(e["dim_line"].get<std::size_t>() == 2,
             "dim H1(E_xi) = " + std::to_string(e["dim_line"].get<std::size_t>()) + " at " +
                 e["xi"].get<std::string>() + ", expected 2");
    dims += std::to_string(e["dim_line"].get<std::size_t>()) + "/" + std::to_string(e["dim_pair"].get<std::size_t>()) +
            " ";
  }
  ck.check(r["alexander_matches"].get<bool>(), "Alexander polynomial");
  ck.note("360 grid points zero: " + std::string(r["off_root_all_zero"].get<bool>() ? "yes" : "no"));
  ck.note("at roots line/rank-2 dims " + dims);
  ck.note("Alexander t^2 - t + 1: " + std::string(r["alexander_matches"].get<bool>() ? "yes" : "no"));
  return ck.verdict();
}

Verdict omega_dependence() {
  Checker ck;
  const GroupComplex c = presentation_complex(fixture_presentation("trefoil-surgery.pres"));
  const auto alt = bundle_fixture("trefoil-alternating.bundle", c, 1);
  const auto pd = projective_dimension(alt, LimitPolicy::parse("liminf"));
  ck.check(pd.liminf == 0.0 && pd.limsup == 2.0, "projective spread [0, 2]");
  for (const char* name : {"liminf", "limsup"}) {
    const auto d = dimension_decomposition(alt, std::nullopt, LambdaGrid::standard(), LimitPolicy::parse(name));
    ck.check(std::abs(d.sum - 2.0) <= 1e-9, std::string("sum under ") + name);
    ck.note(std::string(name) + " " + fmt(d.projective) + " + " + fmt(d.torsion) + " = " + fmt(d.sum, 12));
  }
  ck.note("spread [" + fmt(pd.liminf) + ", " + fmt(pd.limsup) + "]");
  return ck.verdict();
}

Verdict quartic() {
  Checker ck;
  const AlgebraicNumber u = parse_algebraic(fixture("quartic.alg"));
  const double r = quartic_real_root_small().value().real();
  const double alpha = std::arg(u.value()) * 180.0 / M_PI;
  ck.check(std::abs(r - 0.5807) <= 5e-4, "r");
  ck.check(std::abs(alpha - 130.6463) <= 5e-3, "alpha");
  const auto fac = quartic_factorization();
  ck.check(fac.exact, "factorization identity");
  const auto uc = unit_circle_but_not_root_of_unity(u);
  ck.check(uc.result, "unit circle but not root of unity");
  ck.check(uc.evidence && std::abs(*uc.evidence) < 0.6, "evidence |conjugate| < 0.6");
  ck.note("r " + fmt(r, 10) + ", alpha " + fmt(alpha, 10) + " deg");
  if (uc.evidence) ck.note("evidence " + fmt(std::abs(*uc.evidence), 6));
  return ck.verdict();
}

Verdict condition_f() {
  Checker ck;
  const ProfileSpec prof = parse_profile(fixture("circle-unit.profile"));
  const AlgebraicNumber u = parse_algebraic(fixture("quartic.alg"));
  std::map<std::string, std::vector<AlgebraicNumber>> values;
  for (long n = 0; n <= 20; ++n) values["x"].push_back(u.power(n));
  const auto f = condition_f_check(prof.arithmetic(), values);
  const ConditionFEntry* first = nullptr;
  for (const auto& e : f.entries)
    if (!e.pass) {
      first = &e;
      break;
    }
  ck.check(!f.pass, "condition F reported FAIL");
  ck.check(first && first->level <= 20, "bound exceeded by n = 20");
  ck.check(!f.entries.empty() && !f.entries.back().pass, "n = 20 exceeds the bound");
  if (first)
    ck.note("condition F FAIL at n = " + std::to_string(first->level) + ", embedding " +
            std::to_string(first->worst_embedding) + ", modulus " + fmt(first->max_modulus) + " > N = " +
            fmt(first->bound));
  return ck.verdict();
}

Verdict fp_towers() {
  Checker ck;
  struct Case {
    const char* pres;
    double b2;
  };
  for (const Case& k : {Case{"figure-eight.pres", 1.0}, Case{"torus.pres", 0.0}}) {
    const Presentation p = fixture_presentation(k.pres);
    const GroupComplex c = presentation_complex(p);
    for (std::uint64_t prime : {2u, 3u}) {
      const PTower t = PTower::cyclic(p, {1, 0}, prime, 0, 5);
      const auto seq = fp_betti_sequence(t, c, 1);
      const auto mono = monotonicity_check(t, c, 1, false);
      const std::size_t base = fp_betti(c, cyclic_table(p, {1, 0}, 1), prime, 1);
      const auto ineq = fp_l2_inequality(seq, k.b2, base);
      const std::string tag = std::string(k.pres) + " p=" + std::to_string(prime);
      ck.check(seq.index.size() == 6, tag + " depth 5");
      ck.check(mono.monotone, tag + " monotone");
      ck.check(mono.refined, tag + " refined to index-p steps");
      ck.check(ineq.pass, tag + " b2 <= estimate <= dim H(X, F_p)");
      ck.note(tag + " last " + seq.normalized.back().get_str());
    }
  }
  return ck.verdict();
}

Verdict lemma_b() {
  Checker ck;
  for (long C = 1; C <= 20; ++C)
    for (long r = 1; r <= 20; ++r) {
      const auto [lhs, rhs] = lemma_b_identity(C, r);
      ck.check(lhs == rhs, "identity C=" + std::to_string(C) + " r=" + std::to_string(r));
    }
  std::mt19937_64 rng(2001);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + rng() % 8;
    ComplexMatrix a(k, k, 0.0);
    for (auto& v : a.data()) v = Complex(nd(rng), nd(rng)) * 0.5;
    std::vector<Complex> p;
    ComplexMatrix pw = a;
    for (std::size_t r = 0; r < k; ++r) {
      Complex tr = 0.0;
      for (std::size_t i = 0; i < k; ++i) tr += pw(i, i);
      p.push_back(tr);
      pw = multiply(pw, a);
    }
    // measured constants: |p_r| <= C K^r
    double K = 1.0;
    for (std::size_t r = 0; r < k; ++r) K = std::max(K, std::pow(std::abs(p[r]), 1.0 / (r + 1.0)));
    double C = 1e-12;
    for (std::size_t r = 0; r < k; ++r) C = std::max(C, std::abs(p[r]) / std::pow(K, r + 1.0));
    const auto bound = lemma_b_bound(C, K, k);
    const auto s = char_poly(a).symmetric;
    for (std::size_t r = 0; r < k; ++r) {
      ck.check(std::abs(s[r]) <= bound[r] * (1 + 1e-9) + 1e-12, "bound on matrix " + std::to_string(t));
      worst = std::max(worst, std::abs(s[r]) / bound[r]);
    }
  }
  ck.note("identity 400 cases, bound 200 matrices, max |s_r|/bound " + fmt(worst, 4));
  return ck.verdict();
}

Verdict lemma_a() {
  Checker ck;
  const AlgebraicNumber r = quartic_real_root_small();
  const double R = 1.0 / r.value().real();
  const auto rep = lemma_a_check(r, R * (1 + 1e-12));
  ck.check(rep.min_modulus >= std::pow(R, -3.0) - 1e-8, "min conjugate modulus >= R^-3");
  ck.check(rep.pass && rep.norm_integral, "quartic norm integral");
  ck.note("min modulus " + fmt(rep.min_modulus) + " >= R^-3 = " + fmt(std::pow(R, -3.0)));
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<long> coeff(-6, 6);
  int tried = 0;
  while (tried < 50) {
    const std::size_t deg = tried % 2 ? 4 : 2;
    IntPoly f;
    for (std::size_t i = 0; i < deg; ++i) f.emplace_back(coeff(rng));
    f.emplace_back(1);
    if (f[0] == 0 || !is_irreducible(f)) continue;
    ++tried;
    const AlgebraicNumber a(f, Complex(0.0), true);
    double Rm = 0;
    for (const auto& z : a.conjugates()) Rm = std::max(Rm, std::abs(z.value));
    const auto q = lemma_a_check(a, Rm);
    ck.check(q.norm_integral && q.norm_distance <= 1e-8, "norm of degree-" + std::to_string(deg) + " integer");
    ck.check(q.pass, "lower bound on degree-" + std::to_string(deg) + " integer");
  }
  ck.note("50 random quadratic/quartic integers");
  return ck.verdict();
}

Verdict spectral_engine() {
  Checker ck;
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 200;
    RealMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = nd(rng);
    const auto ev = jacobi_eigenvalues(m);
    for (double lambda : {0.3, 1.1, 2.7}) {
      const auto expect =
          static_cast<std::size_t>(std::upper_bound(ev.begin(), ev.end(), lambda * lambda) - ev.begin());
      ck.check(count_below(m, lambda) == expect, "inertia count on matrix " + std::to_string(t));
    }
  }
  // specialised half-Laplacians of every built-in tower level stay below N
  double worst = -INFINITY;
  struct T {
    const char* pres;
    const char* tower;
  };
  for (const T& k : {T{"figure-eight.pres", "figure-eight-cyclic.tower"}, T{"circle.pres", "circle-cyclic.tower"},
                     T{"torus.pres", "torus-2.tower"}, T{"figure-eight.pres", "figure-eight-3.tower"}}) {
    const Presentation p = fixture_presentation(k.pres);
    const GroupComplex c = presentation_complex(p);
    const Tower t = fixture_tower(k.tower, p);
    for (std::size_t i = 0; i < c.boundaries.size(); ++i) {
      const double N = n_bound(half_laplacian(c.boundaries[i], c.ring_config()));
      const auto proc = tower_process(c, t.levels, i);
      for (const auto& l : proc.levels) {
        if (l.spectrum.eigenvalues.empty()) continue;
        ck.check(l.spectrum.eigenvalues.back() <= N + 1e-9, std::string(k.tower) + " level " + l.label);
        worst = std::max(worst, l.spectrum.eigenvalues.back() - N);
      }
    }
  }
  std::uniform_int_distribution<long> e(-3, 3);
  double rel = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t r = 2 + rng() % 7, c = 2 + rng() % 7;
    Matrix<Integer> b(r, c, Integer(0));
    for (auto& v : b.data()) v = e(rng);
    const Matrix<Integer> h = multiply(b, adjoint(b));
    const auto cp = char_poly(h);
    if (sgn(cp.tail) == 0) continue;
    const double exact = std::abs(cp.tail.get_d());
    auto s = eigenvalues_sym(to_real(h));
    apply_exact_nullity(s, cp.nullity);
    const double d = std::abs(std::exp(log_det_prime(s)) - exact) / exact;
    ck.check(d <= 1e-8, "log-det on fixture " + std::to_string(t));
    rel = std::max(rel, d);
  }
  ck.note("100 inertia matrices, max eigenvalue - N " + fmt(worst, 3) + ", log-det max rel err " + fmt(rel, 3));
  return ck.verdict();
}

Verdict character_moments() {
  Checker ck;
  const Presentation circle = fixture_presentation("circle.pres");
  const GroupComplex cc = presentation_complex(circle);
  const IntMatrix a = half_laplacian(cc.boundaries[0]);
  const auto ms = moments(a, Character::delta(circle), 64, cc.ring_config());
  // brute force: m_k = coefficient of 1 in (2 - t - 1/t)^k = binom(2k, k)
  for (std::size_t k = 1; k <= 10; ++k)
    ck.check(ms.power[k] == Complex(binomial(2 * static_cast<long>(k), static_cast<long>(k)).get_d()),
             "circle moment " + std::to_string(k));
  ck.note("m1 " + fmt(ms.power[1].real()) + ", m2 " + fmt(ms.power[2].real()));

  std::vector<double> lambdas;
  for (int k = 1; k <= 19; ++k) lambdas.push_back(0.1 * k);
  double prev = INFINITY;
  for (std::size_t M : {8u, 16u, 32u, 64u}) {
    const auto b = density_from_moments(moments(a, Character::delta(circle), M, cc.ring_config()), lambdas);
    double w = 0;
    for (std::size_t i = 0; i < b.lambda.size(); ++i) w += b.upper[i] - b.lower[i];
    ck.check(w < prev, "bracket width decreases at M = " + std::to_string(M));
    prev = w;
  }

  struct T {
    const char* pres;
    const char* tower;
  };
  std::size_t levels = 0;
  for (const T& k : {T{"figure-eight.pres", "figure-eight-cyclic.tower"}, T{"circle.pres", "circle-cyclic.tower"},
                     T{"torus.pres", "torus-2.tower"}, T{"figure-eight.pres", "figure-eight-3.tower"}}) {
    const Presentation p = fixture_presentation(k.pres);
    const GroupComplex c = presentation_complex(p);
    const Tower t = fixture_tower(k.tower, p);
    for (std::size_t i = 0; i < c.boundaries.size(); ++i) {
      const IntMatrix h = half_laplacian(c.boundaries[i], c.ring_config());
      for (std::size_t j = 0; j < t.levels.size(); ++j) {
        const auto rc = compare_routes(h, Character::level(t.levels[j]), lambdas, 16, c.ring_config());
        ck.check(rc.pass, std::string(k.tower) + " level " + t.labels[j] + " d" + std::to_string(i + 1));
        ++levels;
      }
    }
  }
  ck.note("brackets checked on " + std::to_string(levels) + " tower levels");
  return ck.verdict();
}

Verdict sandwich() {
  Checker ck;
  const Presentation p = fixture_presentation("circle.pres");
  std::vector<CosetTable> levels;
  for (std::size_t k = 1; k <= 64; ++k) levels.push_back(cyclic_table(p, {1}, k));
  const auto proc = tower_process(presentation_complex(p), levels, 0);
  const auto grid = LambdaGrid::geometric(2.0, 1.0 / 32, 0.5);
  const auto d = density_comparison(proc, arcsine_density, grid, LimitPolicy::parse("liminf"));
  ck.check(d.pass, "G <= F_ref <= G+ within 1e-6");
  ck.note("circle levels 1..64, liminf, " + std::to_string(d.lambda.size()) + " grid points down to lambda " +
          fmt(d.lambda.back()));
  return ck.verdict();
}

Verdict arithmetic_bound() {
  Checker ck;
  const Json r = run_example("arithmetic-bound").result;
  ck.check(r["integral_tower"]["pass"].get<bool>(), "integral tower satisfies the envelope");
  ck.check(!r["quartic_unit_bundles"]["pass"].get<bool>(), "quartic fixture violates the envelope");
  ck.note("integral " + std::string(r["integral_tower"]["pass"].get<bool>() ? "holds" : "violated"));
  ck.note("quartic fixture " + std::to_string(r["quartic_unit_bundles"]["violations"].size()) + " violations");
  return ck.verdict();
}

Verdict property_suites() {
  Checker ck;
  std::mt19937_64 rng(14);
  for (int t = 0; t < 300; ++t) {
    const Word r = random_word(rng, 3, 10);
    ck.check(fox_fundamental_lhs(r, 3) ==
                 IntElement::monomial(r, Integer(1)) - IntElement::monomial(Word{}, Integer(1)),
             "Fox identity");
  }
  for (int t = 0; t < 200; ++t) {
    const auto a = random_element(rng, 3, 4), b = random_element(rng, 3, 4);
    ck.check(involute(multiply(a, b)) == multiply(involute(b), involute(a)), "involution anti-automorphism");
    ck.check(involute(involute(a)) == a, "involution is an involution");
  }
  for (int t = 0; t < 100; ++t) {
    Presentation p{{"a", "b", "c"}, {}};
    for (int k = 0; k < 2; ++k) {
      const Word r = random_word(rng, 3, 8).cyclically_reduced();
      if (!r.is_identity()) p.relators.push_back(r);
    }
    const GroupComplex c = presentation_complex(p);
    bool ok = true;
    try {
      verify_complex(c);
    } catch (const Error&) {
      ok = false;
    }
    ck.check(ok, "d1 d2 = 0");
    ck.check(parse_presentation(serialize_presentation(p)).relators == p.relators, "presentation round trip");
    const std::string text = serialize_complex(c);
    ck.check(serialize_complex(parse_complex(text)) == text, "complex round trip");
  }
  for (int t = 0; t < 100; ++t) {
    const double limit = std::uniform_real_distribution<double>(-2, 2)(rng);
    const double amp = std::uniform_real_distribution<double>(0.1, 3)(rng);
    std::vector<double> seq;
    for (int n = 1; n <= 2000; ++n) seq.push_back(limit + amp * (n % 2 ? 1 : -1) / n);
    for (const char* name : {"liminf", "limsup", "tail-mean", "tail-mean:10"})
      ck.check(std::abs(apply_policy(LimitPolicy::parse(name), seq).value - limit) <= 1e-2,
               std::string("policy ") + name);
  }
  ck.note("seed 14: 300 Fox, 200 involution, 100 complexes and round trips, 100 policy sequences");
  return ck.verdict();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
    double budget_s;  // runtime limit, 0 when none is set
  };
  const std::vector<Criterion> criteria{
      {"figure-eight tower b1 = (n+1)/n, projdim 1, tordim 0", figure_eight_tower, 30},
      {"circle tower b1 = 1/k", circle_tower, 5},
      {"trefoil surgery jump of twisted H1", trefoil_jump, 10},
      {"limit-policy dependence with constant sum", omega_dependence, 0},
      {"quartic unit conjugates", quartic, 0},
      {"condition F negative test", condition_f, 0},
      {"F_p Betti monotonicity and inequality", fp_towers, 0},
      {"coefficient bound from power traces", lemma_b, 0},
      {"Liouville lower bound and norm integrality", lemma_a, 0},
      {"spectral engine", spectral_engine, 0},
      {"character-moment route", character_moments, 0},
      {"sandwich against the arcsine law", sandwich, 0},
      {"arithmetic envelope", arithmetic_bound, 0},
      {"property suites", property_suites, 0},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criteria[k].budget_s > 0 && secs > criteria[k].budget_s) {
      v.pass = false;
      v.detail += " | over the " + fmt(criteria[k].budget_s) + " s budget";
    }
    if (!v.pass) ++failed;
    std::printf("%s %2zu %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].name, secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
