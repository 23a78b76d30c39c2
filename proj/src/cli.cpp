#include "l2approx/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>

#include "CLI11.hpp"
#include "l2approx/algnum.hpp"
#include "l2approx/char_moments.hpp"
#include "l2approx/char_p.hpp"
#include "l2approx/examples.hpp"
#include "l2approx/io.hpp"
#include "l2approx/parallel.hpp"
#include "l2approx/report.hpp"

namespace l2approx {

namespace {

struct Common {
  std::string format = "json";
  std::string policy;
  std::string grid;
  std::string output;
  std::size_t threads = 0;
};

struct Inputs {
  std::string presentation, complex, tower, bundle, profile, character, literal;
  std::size_t degree = 1;
  std::optional<double> reference;
  std::string spectrum_csv, density_csv, grid_csv;
  std::size_t max_index = 4096;
  // curve
  std::string weights;
  double theta = M_PI / 3;
  bool pair = false;
  std::size_t depth = 24;
  std::size_t window = 4;
  std::optional<double> zero_tol;
  // moments
  std::string degrees = "8,16,32,64";
  // fp-tower
  std::uint64_t prime = 0;
  std::size_t cap = 4096;
  // algnum
  std::optional<double> R;
  std::string powers = "0..20";
  std::string generator = "x";
  // example
  std::string example;
  bool list = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--policy", c.policy, "limit policy: liminf, limsup, tail-mean or tail-mean:K");
  sub->add_option("--grid", c.grid, "threshold grid start:stop:factor (eigenvalue scale)");
  sub->add_option("-o,--output", c.output, "write the report here instead of stdout");
  sub->add_option("--threads", c.threads, "worker threads (overrides L2APPROX_THREADS)");
}

std::string hash_input(const std::string& ref) { return fnv1a_hex(read_input(ref)); }

std::string parent_dir(const std::string& ref) {
  if (ref.rfind("fixture:", 0) == 0) return ".";
  const auto p = std::filesystem::path(ref).parent_path();
  return p.empty() ? "." : p.string();
}

// Presentation from --presentation, or the full complex from --complex.
GroupComplex load_complex(const Inputs& in) {
  if (!in.complex.empty()) return parse_complex(read_input(in.complex));
  if (!in.presentation.empty()) return presentation_complex(parse_presentation(read_input(in.presentation)));
  throw InvalidArgument("need --presentation or --complex");
}

std::vector<long> parse_long_list(const std::string& text, const std::string& what) {
  std::vector<long> v;
  std::stringstream s(text);
  std::string tok;
  while (std::getline(s, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stol(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad " + what + " entry '" + tok + "'");
    }
  }
  return v;
}

std::pair<long, long> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stol(text), std::stol(text)};
    return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad range '" + text + "'");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << text;
}

class Runner {
 public:
  Runner(const Common& c, const Inputs& in, std::ostream& out) : c_(c), in_(in), out_(out) {}

  int tower() {
    const GroupComplex cx = load_complex(in_);
    const std::string text = read_input(in_.tower);
    const Tower t = build_tower(parse_tower_spec(text), cx.presentation, parent_dir(in_.tower));
    for (std::size_t n = 0; n < t.levels.size(); ++n)
      if (t.levels[n].index() > in_.max_index) {
        ResourceCap e("level index " + std::to_string(t.levels[n].index()) + " exceeds --max-index " +
                      std::to_string(in_.max_index));
        e.set_level(static_cast<long>(n));
        throw e;
      }
    const auto proc = tower_process(cx, t.levels, in_.degree, in_.tower);
    return finish_process("tower", proc, cx);
  }

  int bundle() {
    const GroupComplex cx = load_complex(in_);
    const BundleSpec b = parse_bundle(read_input(in_.bundle));
    std::optional<std::vector<double>> mu;
    if (b.mu) mu = std::vector<double>(b.levels.size(), *b.mu);
    const auto proc = bundle_process(cx, b.build(cx.presentation), in_.degree, mu, b.zero_tol, in_.bundle);
    return finish_process("bundle", proc, cx);
  }

  int curve() {
    const GroupComplex cx = load_complex(in_);
    const Presentation& p = cx.presentation;
    const std::vector<long> w = in_.weights.empty() ? std::vector<long>(p.rank(), 1) : parse_long_list(in_.weights, "weight");
    std::vector<double> ts;
    for (std::size_t k = 1; k <= in_.depth; ++k) ts.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    auto family = [&](double t) {
      const Complex xi = std::polar(1.0, in_.theta + t);
      auto r = line_bundle(p, w, xi);
      return in_.pair ? direct_sum(r, line_bundle(p, w, std::conj(xi))) : r;
    };
    const auto rep = curve_scan(cx, family, ts, in_.degree, in_.window, in_.zero_tol);
    Json cfg = base_config();
    cfg["theta"] = in_.theta;
    cfg["weights"] = w;
    cfg["pair"] = in_.pair;
    cfg["depth"] = in_.depth;
    cfg["window"] = in_.window;
    if (in_.zero_tol) cfg["zero_tol"] = *in_.zero_tol;
    emit("curve", cfg, to_json(rep), csv_curve(rep));
    return kExitOk;
  }

  int moments_cmd() {
    const GroupComplex cx = load_complex(in_);
    if (in_.degree >= cx.boundaries.size())
      throw InvalidArgument("degree " + std::to_string(in_.degree) + " has no outgoing boundary");
    const IntMatrix a = half_laplacian(cx.boundaries[in_.degree]);
    const auto cfg_ring = cx.ring_config();
    const LambdaGrid grid = c_.grid.empty() ? LambdaGrid::geometric(3.9, 0.01, 0.7) : LambdaGrid::parse(c_.grid);
    std::vector<double> lambdas;
    for (double t : grid.thresholds) lambdas.push_back(std::sqrt(t));
    std::vector<std::size_t> Ms;
    for (long m : parse_long_list(in_.degrees, "polynomial degree")) {
      if (m < 1) throw InvalidArgument("polynomial degrees must be positive");
      Ms.push_back(static_cast<std::size_t>(m));
    }
    std::sort(Ms.begin(), Ms.end());
    Json res;
    std::ostringstream csv;
    bool pass = true;
    if (!in_.tower.empty()) {
      const Tower t = build_tower(parse_tower_spec(read_input(in_.tower)), cx.presentation, parent_dir(in_.tower));
      Json levels = Json::array();
      csv << "level,lambda,lower,upper,direct\n";
      std::vector<RouteComparison> rc(t.levels.size());
      parallel_for(t.levels.size(), [&](std::size_t n) {
        try {
          rc[n] = compare_routes(a, Character::level(t.levels[n]), lambdas, Ms.back(), cfg_ring);
        } catch (Error& e) {
          e.set_level(static_cast<long>(n));
          throw;
        }
      });
      for (std::size_t n = 0; n < rc.size(); ++n) {
        Json j = to_json(rc[n]);
        j["level"] = n;
        j["label"] = t.labels[n];
        levels.push_back(j);
        pass = pass && rc[n].pass;
        for (std::size_t k = 0; k < lambdas.size(); ++k)
          csv << n << ',' << csv_number(lambdas[k]) << ',' << csv_number(rc[n].bracket.lower[k]) << ','
              << csv_number(rc[n].bracket.upper[k]) << ',' << csv_number(rc[n].direct[k]) << '\n';
      }
      res["levels"] = levels;
      res["pass"] = pass;
    } else {
      const Character chi = in_.character.empty()
                                ? Character::delta(cx.presentation)
                                : Character::table(cx.presentation,
                                                   parse_character_table(read_input(in_.character), cx.presentation));
      Json per = Json::array();
      DensityBracket last;
      for (std::size_t M : Ms) {
        const auto ms = moments(a, chi, M, cfg_ring);
        last = density_from_moments(ms, lambdas);
        Json j = to_json(last);
        Json pw = Json::array();
        for (std::size_t r = 0; r < ms.power.size() && r <= 4; ++r) pw.push_back(ms.power[r].real());
        j["moments"] = pw;
        j["route"] = ms.route;
        per.push_back(j);
      }
      res["character"] = chi.label();
      res["brackets"] = per;
      csv << csv_bracket(last);
    }
    Json cfg = base_config();
    cfg["degree"] = in_.degree;
    cfg["polynomial_degrees"] = Ms;
    emit("moments", cfg, res, csv.str());
    return pass ? kExitOk : kExitViolation;
  }

  int fp_tower() {
    const GroupComplex cx = load_complex(in_);
    if (!is_prime(in_.prime)) throw InvalidArgument("--prime must be prime");
    const Tower t = build_tower(parse_tower_spec(read_input(in_.tower)), cx.presentation, parent_dir(in_.tower));
    const PTower pt = PTower::make(cx.presentation, in_.prime, t.levels, t.labels);
    const auto seq = fp_betti_sequence(pt, cx, in_.degree);
    const auto mono = monotonicity_check(pt, cx, in_.degree, false, in_.cap);
    Json res = to_json(seq);
    res["monotonicity"] = to_json(mono);
    res["monotone"] = mono.monotone;
    res["limit_estimate"] = to_json(seq.normalized.back());
    bool pass = mono.monotone;
    if (in_.reference) {
      const CosetTable base = cyclic_table(cx.presentation, std::vector<long>(cx.presentation.rank(), 1), 1);
      const auto ineq = fp_l2_inequality(seq, *in_.reference, fp_betti(cx, base, in_.prime, in_.degree));
      res["inequality"] = to_json(ineq);
      pass = pass && ineq.pass;
    }
    Json cfg = base_config();
    cfg["prime"] = in_.prime;
    cfg["degree"] = in_.degree;
    cfg["cap"] = in_.cap;
    if (in_.reference) cfg["reference"] = *in_.reference;
    emit("fp-tower", cfg, res, csv_fp(seq));
    return pass ? kExitOk : kExitViolation;
  }

  int algnum() {
    const std::string lit = in_.literal.empty() ? "fixture:quartic.alg" : in_.literal;
    const AlgebraicNumber a = parse_algebraic(read_input(lit));
    Json conj = Json::array();
    std::ostringstream csv;
    csv << "embedding,re,im,modulus,arg_deg\n";
    double max_mod = 0;
    const auto cs = a.conjugates();
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const double m = std::abs(cs[k].value), arg = std::arg(cs[k].value) * 180.0 / M_PI;
      max_mod = std::max(max_mod, m);
      conj.push_back(Json{{"value", to_json(cs[k].value)}, {"modulus", m}, {"arg_deg", arg}, {"radius", cs[k].radius}});
      csv << k << ',' << csv_number(cs[k].value.real()) << ',' << csv_number(cs[k].value.imag()) << ','
          << csv_number(m) << ',' << csv_number(arg) << '\n';
    }
    const double R = in_.R.value_or(std::max(1.0, max_mod));
    Json res{{"literal", serialize_algebraic(a)},
             {"value", to_json(a.value())},
             {"conjugates", conj},
             {"algebraic_integer", a.is_algebraic_integer()},
             {"unit_circle_but_not_root_of_unity", to_json(unit_circle_but_not_root_of_unity(a))}};
    bool pass = true;
    if (a.is_algebraic_integer()) {
      const auto la = lemma_a_check(a, R);
      res["lemma_a"] = to_json(la);
      pass = la.pass;
    }
    if (!in_.profile.empty()) {
      const ProfileSpec prof = parse_profile(read_input(in_.profile));
      const auto [lo, hi] = parse_range(in_.powers);
      if (lo < 0 || hi < lo) throw InvalidArgument("bad --powers range");
      std::map<std::string, std::vector<AlgebraicNumber>> values;
      for (long n = lo; n <= hi; ++n) values[in_.generator].push_back(a.power(n));
      const auto f = condition_f_check(prof.arithmetic(), values);
      res["condition_f"] = to_json(f);
      pass = pass && f.pass;
    }
    Json cfg = base_config();
    cfg["literal"] = lit;
    cfg["R"] = R;
    cfg["powers"] = in_.powers;
    cfg["generator"] = in_.generator;
    emit("algnum", cfg, res, csv.str());
    return pass ? kExitOk : kExitViolation;
  }

  int example() {
    if (in_.list || in_.example.empty()) {
      for (const auto& e : example_list()) out_ << e.name << "  " << e.description << "\n";
      if (!in_.list) throw InvalidArgument("example name required; use --list");
      return kExitOk;
    }
    ExampleOptions o;
    if (!c_.policy.empty()) o.policy = LimitPolicy::parse(c_.policy);
    if (!c_.grid.empty()) o.grid = LambdaGrid::parse(c_.grid);
    const auto r = run_example(in_.example, o);
    Json res = r.result;
    Json wrapped{{"example", in_.example}, {"as_expected", r.as_expected}, {"report", res}};
    Json cfg{{"example", in_.example}, {"policy", c_.policy}, {"grid", c_.grid}};
    emit("example", cfg, wrapped, r.csv);
    return r.as_expected ? kExitOk : kExitViolation;
  }

 private:
  Json base_config() const {
    Json cfg;
    Json inputs = Json::object();
    for (const auto* ref : {&in_.presentation, &in_.complex, &in_.tower, &in_.bundle, &in_.profile, &in_.character,
                            &in_.literal})
      if (!ref->empty()) inputs[*ref] = hash_input(*ref);
    cfg["inputs"] = inputs;
    cfg["policy"] = c_.policy.empty() ? LimitPolicy{}.describe() : LimitPolicy::parse(c_.policy).describe();
    cfg["grid"] = c_.grid.empty() ? "default" : c_.grid;
    return cfg;
  }

  LimitPolicy policy() const { return c_.policy.empty() ? LimitPolicy{} : LimitPolicy::parse(c_.policy); }
  LambdaGrid grid() const { return c_.grid.empty() ? LambdaGrid::standard() : LambdaGrid::parse(c_.grid); }

  int finish_process(const std::string& command, const GrowthProcess& proc, const GroupComplex& cx) {
    const LambdaGrid g = grid();
    const auto rep = analyze(proc, g, policy());
    Json res = to_json(proc, rep);
    bool pass = true;
    if (!in_.profile.empty()) {
      const ProfileSpec ps = parse_profile(read_input(in_.profile));
      const auto bc = arithmetic_bound_check(proc, ps.bound, g, ps.cells.value_or(cx.cells(in_.degree + 1)));
      res["bound_check"] = to_json(bc);
      pass = bc.pass;
    }
    if (in_.reference) {
      const auto d = dimension_decomposition(proc, in_.reference, g, policy());
      res["decomposition"] = to_json(d);
      pass = pass && d.within_tolerance;
    }
    if (!in_.spectrum_csv.empty()) write_text(in_.spectrum_csv, csv_spectrum(proc));
    if (!in_.density_csv.empty()) write_text(in_.density_csv, csv_density(proc, g));
    if (!in_.grid_csv.empty()) write_text(in_.grid_csv, csv_grid(rep));
    Json cfg = base_config();
    cfg["degree"] = in_.degree;
    if (in_.reference) cfg["reference"] = *in_.reference;
    emit(command, cfg, res, csv_levels(proc));
    return pass ? kExitOk : kExitViolation;
  }

  void emit(const std::string& command, const Json& cfg, const Json& result, const std::string& csv) {
    const std::string text = c_.format == "csv" ? csv : dump_json(envelope(command, cfg, result));
    if (c_.output.empty())
      out_ << text;
    else
      write_text(c_.output, text);
  }

  const Common& c_;
  const Inputs& in_;
  std::ostream& out_;
};

int exit_for(const Error& e) {
  switch (e.error_class()) {
    case ErrorClass::input: return kExitInput;
    case ErrorClass::violation: return kExitViolation;
    case ErrorClass::resource: return kExitResource;
    case ErrorClass::numeric: return kExitNumeric;
  }
  return kExitNumeric;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximation of L2 invariants by towers of coverings and flat bundles", "l2approx"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Common common;
  Inputs in;

  auto inputs = [&](CLI::App* s) {
    s->add_option("-p,--presentation", in.presentation, "presentation file (or fixture:name)");
    s->add_option("-c,--complex", in.complex, "complex file with explicit boundary blocks");
    s->add_option("-i,--degree", in.degree, "homological degree");
    add_common(s, common);
  };
  auto dumps = [&](CLI::App* s) {
    s->add_option("--profile", in.profile, "arithmetic profile for the envelope check");
    s->add_option("--reference", in.reference, "reference L2-Betti number for the decomposition check");
    s->add_option("--spectrum-csv", in.spectrum_csv, "write level,eigenvalue,multiplicity");
    s->add_option("--density-csv", in.density_csv, "write level,lambda,normalized_count");
    s->add_option("--grid-csv", in.grid_csv, "write the G / G+ grid trace");
  };

  auto* tower = app.add_subcommand("tower", "asymptotic report for a tower of finite covers");
  inputs(tower);
  dumps(tower);
  tower->add_option("-t,--tower", in.tower, "tower descriptor")->required();
  tower->add_option("--max-index", in.max_index, "largest accepted level index");

  auto* bundle = app.add_subcommand("bundle", "asymptotic report for a sequence of flat bundles");
  inputs(bundle);
  dumps(bundle);
  bundle->add_option("-b,--bundle", in.bundle, "bundle sequence file")->required();

  auto* curve = app.add_subcommand("curve", "dim H_i along line bundles e^{i(theta + t)}, t -> 0");
  inputs(curve);
  curve->add_option("--weights", in.weights, "comma-separated exponents of the abelianisation");
  curve->add_option("--theta", in.theta, "base angle in radians");
  curve->add_flag("--pair", in.pair, "use E_xi + E_conj(xi)");
  curve->add_option("--depth", in.depth, "t = 2^-1 .. 2^-depth");
  curve->add_option("--window", in.window, "values that must agree for stabilisation");
  curve->add_option("--zero-tol", in.zero_tol, "kernel threshold");

  auto* mom = app.add_subcommand("moments", "character-moment density brackets");
  inputs(mom);
  mom->add_option("-t,--tower", in.tower, "compare against these finite levels");
  mom->add_option("--character", in.character, "character table file");
  mom->add_option("-M,--polynomial-degrees", in.degrees, "comma-separated polynomial degrees");

  auto* fp = app.add_subcommand("fp-tower", "F_p Betti numbers along a p-tower");
  inputs(fp);
  fp->add_option("-t,--tower", in.tower, "tower descriptor")->required();
  fp->add_option("--prime", in.prime, "the prime p")->required();
  fp->add_option("--reference", in.reference, "reference L2-Betti number");
  fp->add_option("--cap", in.cap, "order cap for index-p refinement");

  auto* alg = app.add_subcommand("algnum", "conjugates, Lemma-A bound and Galois majorant checks");
  alg->add_option("-l,--literal", in.literal, "algebraic literal file (default: the quartic unit)");
  alg->add_option("--R", in.R, "common bound on conjugate moduli");
  alg->add_option("--profile", in.profile, "profile with majorants N(g) for the powers check");
  alg->add_option("--powers", in.powers, "exponent range a..b for the powers check");
  alg->add_option("--generator", in.generator, "profile key the powers are checked against");
  add_common(alg, common);

  auto* ex = app.add_subcommand("example", "run a built-in example");
  ex->add_option("name", in.example, "example name");
  ex->add_flag("--list", in.list, "list examples");
  add_common(ex, common);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    set_thread_count(common.threads);
    (void)thread_count();
    Runner r(common, in, out);
    if (*tower) return r.tower();
    if (*bundle) return r.bundle();
    if (*curve) return r.curve();
    if (*mom) return r.moments_cmd();
    if (*fp) return r.fp_tower();
    if (*alg) return r.algnum();
    return r.example();
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (e.level() >= 0) err << " (level " << e.level() << ")";
    err << "\n";
    return exit_for(e);
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace l2approx
