#include "l2approx/examples.hpp"

#include <cmath>
#include <sstream>

#include "l2approx/algnum.hpp"
#include "l2approx/char_moments.hpp"
#include "l2approx/char_p.hpp"
#include "l2approx/fixtures.hpp"
#include "l2approx/io.hpp"

namespace l2approx {

Presentation fixture_presentation(const std::string& name) { return parse_presentation(fixture(name)); }

double arcsine_density(double lambda) {
  const double t = lambda * lambda;
  return t >= 4 ? 1.0 : std::acos(1.0 - t / 2.0) / M_PI;
}

namespace {

Tower fixture_tower(const std::string& name, const Presentation& p) {
  return build_tower(parse_tower_spec(fixture(name)), p);
}

GrowthProcess fixture_bundle_process(const std::string& name, const GroupComplex& c, std::size_t degree) {
  const BundleSpec b = parse_bundle(fixture(name));
  std::optional<std::vector<double>> mu;
  if (b.mu) mu = std::vector<double>(b.levels.size(), *b.mu);
  return bundle_process(c, b.build(c.presentation), degree, mu, b.zero_tol, name);
}

std::vector<long> cyclic_range(long a, long b) {
  std::vector<long> v;
  for (long k = a; k <= b; ++k) v.push_back(k);
  return v;
}

std::vector<CosetTable> cyclic_levels(const Presentation& p, const std::vector<long>& w, long a, long b) {
  std::vector<CosetTable> t;
  for (long k : cyclic_range(a, b)) t.push_back(cyclic_table(p, w, static_cast<std::size_t>(k)));
  return t;
}

Json poly_json(const TPoly& f) {
  Json a = Json::array();
  for (const auto& c : f) a.push_back(c.get_str());
  return a;
}

// ---------------------------------------------------------------------------

ExampleOutcome figure_eight_tower(const ExampleOptions& o) {
  const Presentation p = fixture_presentation("figure-eight.pres");
  const GroupComplex c = presentation_complex(p);
  const Tower t = fixture_tower("figure-eight-cyclic.tower", p);
  const auto proc = tower_process(c, t.levels, 1, "figure-eight Z/n");
  const auto rep = analyze(proc, o.grid.value_or(LambdaGrid::standard()), o.policy.value_or(LimitPolicy{}));
  bool exact = true;
  for (const auto& l : proc.levels) {
    const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / l.mu));
    exact = exact && l.betti_exact && l.betti == n + 1;
  }
  ExampleOutcome out;
  out.result = to_json(proc, rep);
  out.result["euler_characteristic_check"] = exact;
  out.as_expected = exact && std::abs(rep.projdim.value - 1.0) <= 0.05 && rep.tordim && *rep.tordim <= 0.02;
  out.csv = csv_levels(proc);
  return out;
}

ExampleOutcome circle_tower(const ExampleOptions& o) {
  const Presentation p = fixture_presentation("circle.pres");
  const GroupComplex c = presentation_complex(p);
  const Tower t = fixture_tower("circle-cyclic.tower", p);
  const auto proc = tower_process(c, t.levels, 1, "circle kZ");
  const auto rep = analyze(proc, o.grid.value_or(LambdaGrid::standard()), o.policy.value_or(LimitPolicy{}));
  bool exact = true;
  for (const auto& l : proc.levels) exact = exact && l.betti == 1;
  ExampleOutcome out;
  out.result = to_json(proc, rep);
  out.as_expected = exact && std::abs(proc.levels.back().normalized_betti()) <= 0.05 && rep.projdim.value <= 0.05;
  out.csv = csv_levels(proc);
  return out;
}

ExampleOutcome trefoil_jump(const ExampleOptions&) {
  const Presentation knot = fixture_presentation("trefoil.pres");
  const Presentation p = fixture_presentation("trefoil-surgery.pres");
  const GroupComplex c = presentation_complex(p);
  const std::vector<long> w{1, 1};

  std::vector<FiniteRep<Complex>> line, pair;
  std::vector<double> theta;
  // half-degree offsets keep xi = 1 (ordinary homology) and the roots off
  // the grid; both are evaluated separately below
  for (int j = 0; j < 360; ++j) {
    theta.push_back(2.0 * M_PI * (j + 0.5) / 360.0);
    const Complex xi = std::polar(1.0, theta.back());
    line.push_back(line_bundle(p, w, xi));
    pair.push_back(direct_sum(line.back(), line_bundle(p, w, std::conj(xi))));
  }
  const auto pl = bundle_process(c, line, 1, std::vector<double>(360, 1.0));
  const auto pp = bundle_process(c, pair, 1, std::vector<double>(360, 1.0));

  std::ostringstream csv;
  csv << "theta_deg,dim_line,dim_pair\n";
  Json rows = Json::array();
  bool off_root_zero = true;
  for (int j = 0; j < 360; ++j) {
    off_root_zero = off_root_zero && pl.levels[j].betti == 0 && pp.levels[j].betti == 0;
    csv << j + 0.5 << ',' << pl.levels[j].betti << ',' << pp.levels[j].betti << '\n';
    if (pl.levels[j].betti || pp.levels[j].betti)
      rows.push_back(Json{{"theta_deg", j + 0.5}, {"dim_line", pl.levels[j].betti}, {"dim_pair", pp.levels[j].betti}});
  }
  const std::size_t trivial = twisted_betti(c, line_bundle_exact(p, w, 6, 0), 1);

  // exact Q(zeta_6) at xi = zeta_6^{+-1}
  Json exact = Json::array();
  bool line_two = true, pair_two = true;
  for (long k : {1L, 5L}) {
    const auto l = line_bundle_exact(p, w, 6, k);
    const auto s = direct_sum(l, line_bundle_exact(p, w, 6, 6 - k));
    const std::size_t dl = twisted_betti(c, l, 1), ds = twisted_betti(c, s, 1);
    line_two = line_two && dl == 2;
    pair_two = pair_two && ds == 2;
    exact.push_back(Json{{"xi", k == 1 ? "exp(i pi/3)" : "exp(-i pi/3)"}, {"dim_line", dl}, {"dim_pair", ds}});
  }
  const TPoly alex = alexander_polynomial(knot, w);
  const TPoly alex_surgery = alexander_polynomial(p, w);
  const TPoly expected = normalize_up_to_units({1, -1, 1});
  ExampleOutcome out;
  out.result = Json{{"grid_points", 360},
                    {"nonzero_rows", rows},
                    {"trivial_bundle_dim", trivial},
                    {"off_root_all_zero", off_root_zero},
                    {"exact_roots", exact},
                    {"line_bundle_dim_two_at_roots", line_two},
                    {"rank_two_bundle_dim_two_at_roots", pair_two},
                    {"alexander_polynomial", poly_json(alex)},
                    {"alexander_polynomial_surgery", poly_json(alex_surgery)},
                    {"alexander_matches", alex == expected}};
  out.as_expected = off_root_zero && line_two && alex == expected;
  out.csv = csv.str();
  return out;
}

ExampleOutcome trefoil_omega(const ExampleOptions& o) {
  const GroupComplex c = presentation_complex(fixture_presentation("trefoil-surgery.pres"));
  const auto approach = fixture_bundle_process("trefoil-approach.bundle", c, 1);
  const auto alt = fixture_bundle_process("trefoil-alternating.bundle", c, 1);
  const LambdaGrid grid = o.grid.value_or(LambdaGrid::standard());
  ExampleOutcome out;
  Json per = Json::object();
  std::ostringstream csv;
  csv << "fixture,policy,projective,torsion,sum\n";
  bool ok = true;
  double lo = INFINITY, hi = -INFINITY;
  for (const char* name : {"liminf", "limsup"}) {
    const auto pol = LimitPolicy::parse(name);
    const auto da = dimension_decomposition(approach, std::nullopt, grid, pol);
    const auto dl = dimension_decomposition(alt, std::nullopt, grid, pol);
    per[name] = Json{{"approach", to_json(da)}, {"alternating", to_json(dl)}};
    ok = ok && std::abs(dl.sum - 2.0) <= 1e-9 && std::abs(da.sum - 2.0) <= 1e-9;
    lo = std::min(lo, dl.projective);
    hi = std::max(hi, dl.projective);
    csv << "approach," << name << ',' << csv_number(da.projective) << ',' << csv_number(da.torsion) << ','
        << csv_number(da.sum) << '\n';
    csv << "alternating," << name << ',' << csv_number(dl.projective) << ',' << csv_number(dl.torsion) << ','
        << csv_number(dl.sum) << '\n';
  }
  const auto pd = projective_dimension(alt, LimitPolicy::parse("liminf"));
  out.result = Json{{"policies", per}, {"projective_spread", Json::array({pd.liminf, pd.limsup})}};
  out.as_expected = ok && lo == 0.0 && hi == 2.0 && pd.liminf == 0.0 && pd.limsup == 2.0;
  (void)o;
  out.csv = csv.str();
  return out;
}

ExampleOutcome quartic(const ExampleOptions&) {
  const AlgebraicNumber u = parse_algebraic(fixture("quartic.alg"));
  const AlgebraicNumber small = quartic_real_root_small();
  Json roots = Json::array();
  std::ostringstream csv;
  csv << "re,im,modulus,arg_deg\n";
  for (const auto& r : u.conjugates()) {
    const double arg = std::arg(r.value) * 180.0 / M_PI;
    roots.push_back(Json{{"value", to_json(r.value)}, {"modulus", std::abs(r.value)}, {"arg_deg", arg},
                         {"radius", r.radius}});
    csv << csv_number(r.value.real()) << ',' << csv_number(r.value.imag()) << ',' << csv_number(std::abs(r.value))
        << ',' << csv_number(arg) << '\n';
  }
  const double r = small.value().real();
  const double alpha = std::arg(u.value()) * 180.0 / M_PI;
  const auto fac = quartic_factorization();
  const auto uc = unit_circle_but_not_root_of_unity(u);
  double max_mod = 0;
  for (const auto& c : u.conjugates()) max_mod = std::max(max_mod, std::abs(c.value));
  const auto la = lemma_a_check(u, max_mod);
  ExampleOutcome out;
  out.result = Json{{"minpoly", serialize_algebraic(u)},
                    {"conjugates", roots},
                    {"r", r},
                    {"alpha_deg", alpha},
                    {"factorization", to_json(fac)},
                    {"unit_circle_but_not_root_of_unity", to_json(uc)},
                    {"lemma_a", to_json(la)}};
  out.as_expected = std::abs(r - 0.5807) <= 5e-4 && std::abs(alpha - 130.6463) <= 5e-3 && fac.exact && uc.result &&
                    uc.evidence && std::abs(*uc.evidence) < 0.6 && la.pass;
  out.csv = csv.str();
  return out;
}

ExampleOutcome condition_f(const ExampleOptions& o) {
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
  // the same sequence fails the spectral envelope on the circle
  const GroupComplex c = presentation_complex(fixture_presentation("circle.pres"));
  const auto proc = fixture_bundle_process("circle-quartic.bundle", c, 0);
  const auto env = arithmetic_bound_check(proc, prof.bound, o.grid.value_or(LambdaGrid::standard()), c.cells(1));
  ExampleOutcome out;
  out.result = Json{{"condition_f", to_json(f)}, {"envelope", to_json(env)}};
  if (first) out.result["first_failure"] = Json{{"level", first->level}, {"embedding", first->worst_embedding},
                                                {"modulus", first->max_modulus}, {"bound", first->bound}};
  out.as_expected = !f.pass && !f.galois_unitary && first && f.entries.back().level == 20 && !f.entries.back().pass &&
                    !env.pass;
  std::ostringstream csv;
  csv << "level,bound,max_modulus,worst_embedding,pass\n";
  for (const auto& e : f.entries)
    csv << e.level << ',' << csv_number(e.bound) << ',' << csv_number(e.max_modulus) << ',' << e.worst_embedding << ','
        << (e.pass ? 1 : 0) << '\n';
  out.csv = csv.str();
  return out;
}

ExampleOutcome fp_towers(const ExampleOptions&) {
  struct Case {
    const char* pres;
    const char* tower;
    std::uint64_t p;
    double b2;
  };
  ExampleOutcome out;
  out.result = Json::array();
  std::ostringstream csv;
  csv << "complex,p,level,index,fp_betti,normalized\n";
  for (const Case& k : {Case{"torus.pres", "torus-2.tower", 2, 0.0}, Case{"figure-eight.pres", "figure-eight-3.tower", 3, 1.0}}) {
    const Presentation p = fixture_presentation(k.pres);
    const GroupComplex c = presentation_complex(p);
    const Tower t = fixture_tower(k.tower, p);
    const PTower pt = PTower::make(p, k.p, t.levels, t.labels);
    const auto seq = fp_betti_sequence(pt, c, 1);
    const auto mono = monotonicity_check(pt, c, 1, false);
    const std::size_t base = fp_betti(c, cyclic_table(p, std::vector<long>(p.rank(), 1), 1), k.p, 1);
    const auto ineq = fp_l2_inequality(seq, k.b2, base);
    out.result.push_back(Json{{"complex", k.pres},
                              {"sequence", to_json(seq)},
                              {"monotonicity", to_json(mono)},
                              {"inequality", to_json(ineq)}});
    out.as_expected = out.as_expected && mono.monotone && mono.refined && ineq.pass;
    for (std::size_t j = 0; j < seq.index.size(); ++j)
      csv << k.pres << ',' << k.p << ',' << j << ',' << seq.index[j] << ',' << seq.fp_betti[j] << ','
          << seq.normalized[j].get_str() << '\n';
  }
  out.csv = csv.str();
  return out;
}

ExampleOutcome sandwich(const ExampleOptions& o) {
  const Presentation p = fixture_presentation("circle.pres");
  const auto proc = tower_process(presentation_complex(p), cyclic_levels(p, {1}, 1, 64), 0, "circle kZ");
  const auto grid = o.grid.value_or(LambdaGrid::geometric(2.0, 1.0 / 32, 0.5));
  const auto d = density_comparison(proc, arcsine_density, grid, o.policy.value_or(LimitPolicy::parse("liminf")));
  ExampleOutcome out;
  out.result = to_json(d);
  out.as_expected = d.pass;
  std::ostringstream csv;
  csv << "lambda,G,reference,G_plus\n";
  for (std::size_t k = 0; k < d.lambda.size(); ++k)
    csv << csv_number(d.lambda[k]) << ',' << csv_number(d.G[k]) << ',' << csv_number(d.reference[k]) << ','
        << (k < d.G_plus.size() ? csv_number(d.G_plus[k]) : "") << '\n';
  out.csv = csv.str();
  return out;
}

ExampleOutcome arithmetic_bound(const ExampleOptions& o) {
  const Presentation p = fixture_presentation("figure-eight.pres");
  const GroupComplex c = presentation_complex(p);
  const auto grid = o.grid.value_or(LambdaGrid::standard());
  const auto proc = tower_process(c, cyclic_levels(p, {1, 2}, 1, 40), 0, "figure-eight Z/n (1,2)");
  const ProfileSpec integral = parse_profile(fixture("integral.profile"));
  const auto ok = arithmetic_bound_check(proc, integral.bound, grid, c.cells(1));
  const GroupComplex cc = presentation_complex(fixture_presentation("circle.pres"));
  const auto bad_proc = fixture_bundle_process("circle-quartic.bundle", cc, 0);
  const auto bad = arithmetic_bound_check(bad_proc, parse_profile(fixture("circle-unit.profile")).bound, grid, 1);
  ExampleOutcome out;
  out.result = Json{{"integral_tower", to_json(ok)}, {"quartic_unit_bundles", to_json(bad)}};
  out.as_expected = ok.pass && !bad.pass;
  std::ostringstream csv;
  csv << "fixture,level,lambda,lhs,rhs,kind\n";
  for (const auto& v : bad.violations)
    csv << "quartic," << v.level << ',' << csv_number(v.lambda) << ',' << csv_number(v.lhs) << ',' << csv_number(v.rhs)
        << ',' << v.kind << '\n';
  out.csv = csv.str();
  return out;
}

ExampleOutcome moments_example(const ExampleOptions&) {
  const Presentation circle = fixture_presentation("circle.pres");
  const GroupComplex cc = presentation_complex(circle);
  const IntMatrix a = half_laplacian(cc.boundaries[0]);
  std::vector<double> lambdas;
  for (int k = 1; k <= 19; ++k) lambdas.push_back(0.1 * k);
  ExampleOutcome out;
  Json widths = Json::array();
  double prev = INFINITY;
  bool shrinking = true, contains = true;
  const auto ms64 = moments(a, Character::delta(circle), 64, cc.ring_config());
  for (std::size_t M : {8u, 16u, 32u, 64u}) {
    const auto ms = moments(a, Character::delta(circle), M, cc.ring_config());
    const auto b = density_from_moments(ms, lambdas);
    double w = 0;
    for (std::size_t i = 0; i < b.lambda.size(); ++i) {
      w += b.upper[i] - b.lower[i];
      const double f = arcsine_density(b.lambda[i]);
      contains = contains && b.lower[i] <= f + 1e-9 && f <= b.upper[i] + 1e-9;
    }
    shrinking = shrinking && w < prev;
    prev = w;
    widths.push_back(Json{{"M", M}, {"total_width", w}, {"max_width", b.max_width()}});
  }
  const double m1 = ms64.power[1].real(), m2 = ms64.power[2].real();
  const auto bracket = density_from_moments(ms64, lambdas);
  out.result = Json{{"circle_moments", Json::array({m1, m2})},
                    {"bracket_widths", widths},
                    {"arcsine_contained", contains},
                    {"circle_bracket", to_json(bracket)}};
  out.as_expected = m1 == 2.0 && m2 == 6.0 && shrinking && contains;
  std::vector<double> ref;
  for (double l : lambdas) ref.push_back(arcsine_density(l));
  out.csv = csv_bracket(bracket, &ref);
  return out;
}

using Runner = ExampleOutcome (*)(const ExampleOptions&);

const std::vector<std::pair<ExampleInfo, Runner>>& registry() {
  static const std::vector<std::pair<ExampleInfo, Runner>> r{
      {{"figure-eight-tower", "cyclic covers Z/n, n = 2..64, of the figure-eight: b1 = (n+1)/n, projdim 1"},
       figure_eight_tower},
      {{"circle-tower", "cyclic covers of the circle, k = 1..32: b1 = 1/k"}, circle_tower},
      {{"trefoil-jump", "H1 of the trefoil surgery twisted by e^{i theta} on a 360-point grid and at the exact roots"},
       trefoil_jump},
      {{"trefoil-omega", "approach and alternating bundle sequences under liminf and limsup"}, trefoil_omega},
      {{"quartic-10-1", "conjugates of the quartic unit z^4 - z^3 - z^2 - z + 1"}, quartic},
      {{"condition-f", "powers of the quartic unit break the Galois majorant and the envelope"}, condition_f},
      {{"torus-fp-tower", "F_p Betti numbers of torus (p = 2) and figure-eight (p = 3) towers"}, fp_towers},
      {{"sandwich", "circle tower against the arcsine law: G <= F_ref <= G+"}, sandwich},
      {{"arithmetic-bound", "envelope bound on an integral tower and its failure for quartic-unit bundles"},
       arithmetic_bound},
      {{"circle-moments", "character moments of the circle and shrinking Jackson brackets"}, moments_example},
  };
  return r;
}

}  // namespace

const std::vector<ExampleInfo>& example_list() {
  static const std::vector<ExampleInfo> list = [] {
    std::vector<ExampleInfo> v;
    for (const auto& [info, run] : registry()) v.push_back(info);
    return v;
  }();
  return list;
}

ExampleOutcome run_example(const std::string& name, const ExampleOptions& opt) {
  for (const auto& [info, run] : registry())
    if (info.name == name) return run(opt);
  throw InvalidArgument("unknown example '" + name + "'");
}

}  // namespace l2approx
