#include "l2approx/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace l2approx {

double round_sig(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void round_all(Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    // JSON has no infinities; keep them readable
    if (std::isinf(v))
      j = v > 0 ? "inf" : "-inf";
    else if (std::isnan(v))
      j = nullptr;
    else
      j = round_sig(v);
  } else if (j.is_array() || j.is_object()) {
    for (auto& x : j) round_all(x);
  }
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json envelope(const std::string& command, const Json& config, Json result) {
  Json e;
  e["tool"] = "l2approx";
  e["version"] = kToolVersion;
  e["command"] = command;
  Json cfg = config;
  round_all(cfg);
  e["config_hash"] = fnv1a_hex(command + "\n" + cfg.dump());
  e["config"] = cfg;
  e["result"] = std::move(result);
  return e;
}

std::string dump_json(const Json& j) {
  Json c = j;
  round_all(c);
  return c.dump(2) + "\n";
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Rational& q) { return q.get_str(); }

Json to_json(const PolicyValue& v) {
  return Json{{"value", v.value},     {"liminf", v.liminf},     {"limsup", v.limsup},
              {"spread", v.limsup - v.liminf}, {"measurable", v.measurable}, {"policy", v.policy}};
}

Json to_json(const GrowthProcess& p, const AsymptoticReport& r) {
  Json levels = Json::array();
  for (std::size_t n = 0; n < p.levels.size(); ++n) {
    const auto& l = p.levels[n];
    const double sp = l.spectrum.smallest_positive();
    levels.push_back(Json{{"level", n},
                          {"label", l.label},
                          {"mu", l.mu},
                          {"chain_dim", l.chain_dim},
                          {"betti", l.betti},
                          {"betti_exact", l.betti_exact},
                          {"normalized_betti", l.normalized_betti()},
                          {"spectrum_size", l.spectrum.size()},
                          {"smallest_positive_eigenvalue", std::isfinite(sp) ? Json(sp) : Json(nullptr)},
                          {"log_det_prime", log_det_prime(l.spectrum)}});
  }
  Json grid = Json::array();
  for (const auto& g : r.grid)
    grid.push_back(Json{{"t", g.t},
                        {"lambda", std::sqrt(g.t)},
                        {"G", g.G.value},
                        {"G_liminf", g.G.liminf},
                        {"G_limsup", g.G.limsup},
                        {"G_plus", g.G_plus},
                        {"small_mass", g.small_mass.value}});
  Json j;
  j["label"] = r.label;
  j["degree"] = r.degree;
  j["policy"] = r.policy;
  j["levels"] = levels;
  j["g_grid"] = grid;
  j["projdim"] = to_json(r.projdim);
  j["g0"] = r.projdim.value;
  j["g0_plus"] = optional_json(r.g0_plus);
  j["tordim"] = optional_json(r.tordim);
  j["spread"] = r.projdim.limsup - r.projdim.liminf;
  j["plateau_index"] = r.plateau_index ? Json(*r.plateau_index) : Json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const BoundCheckReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations)
    v.push_back(Json{{"level", x.level}, {"lambda", x.lambda}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"kind", x.kind}});
  return Json{{"c", r.c}, {"pass", r.pass}, {"violations", v}};
}

Json to_json(const DecompositionReport& r) {
  return Json{{"projective", r.projective},
              {"torsion", r.torsion},
              {"sum", r.sum},
              {"reference", optional_json(r.reference)},
              {"tolerance", r.tolerance},
              {"within_tolerance", r.within_tolerance},
              {"policy", r.policy}};
}

Json to_json(const DensityComparison& r) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.lambda.size(); ++k)
    rows.push_back(Json{{"lambda", r.lambda[k]},
                        {"G", r.G[k]},
                        {"reference", r.reference[k]},
                        {"G_plus", k < r.G_plus.size() ? Json(r.G_plus[k]) : Json(nullptr)},
                        {"contained", k < r.contained.size() ? Json(bool(r.contained[k])) : Json(nullptr)}});
  return Json{{"pass", r.pass}, {"points", rows}};
}

Json to_json(const CurveScanReport& r) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.t.size(); ++k) rows.push_back(Json{{"t", r.t[k]}, {"dim", r.dims[k]}});
  return Json{{"scan", rows},
              {"dim_at_zero", r.dim_at_zero},
              {"stable_dim", r.stable_dim ? Json(*r.stable_dim) : Json(nullptr)},
              {"jump", r.jump}};
}

Json to_json(const DensityBracket& b) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < b.lambda.size(); ++k)
    rows.push_back(Json{{"lambda", b.lambda[k]}, {"lower", b.lower[k]}, {"estimate", b.estimate[k]}, {"upper", b.upper[k]}});
  return Json{{"polynomial_degree", b.degree}, {"normalization", b.normalization}, {"max_width", b.max_width()},
              {"points", rows}};
}

Json to_json(const RouteComparison& r) {
  Json j = to_json(r.bracket);
  for (std::size_t k = 0; k < r.direct.size(); ++k) {
    j["points"][k]["direct"] = r.direct[k];
    j["points"][k]["contained"] = bool(r.contained[k]);
  }
  j["pass"] = r.pass;
  j["tolerance"] = r.tolerance;
  return j;
}

Json to_json(const FpBettiSequence& s) {
  Json norm = Json::array();
  for (const auto& q : s.normalized) norm.push_back(to_json(q));
  Json normd = Json::array();
  for (const auto& q : s.normalized) normd.push_back(q.get_d());
  return Json{{"p", s.p},
              {"degree", s.degree},
              {"index", s.index},
              {"fp_betti", s.fp_betti},
              {"rational_betti", s.rational_betti},
              {"normalized_fp_betti", norm},
              {"normalized_fp_betti_float", normd}};
}

Json to_json(const MonotonicityReport& r) {
  auto steps = [](const std::vector<StepCheck>& v) {
    Json a = Json::array();
    for (const auto& s : v)
      a.push_back(Json{{"from_index", s.from_index},
                       {"to_index", s.to_index},
                       {"dim_from", s.dim_from},
                       {"dim_to", s.dim_to},
                       {"ok", s.ok}});
    return a;
  };
  Json j{{"monotone", r.monotone}, {"refined", r.refined}, {"coarse", steps(r.coarse)}, {"steps", steps(r.steps)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const InequalityReport& r) {
  return Json{{"b2_reference", r.b2_reference},
              {"limit_estimate", to_json(r.limit_estimate)},
              {"limit_estimate_float", r.limit_estimate.get_d()},
              {"fp_base", r.fp_base},
              {"lower_ok", r.lower_ok},
              {"upper_ok", r.upper_ok},
              {"pass", r.pass},
              {"gap_observed", r.gap_observed}};
}

Json to_json(const LemmaAReport& r) {
  return Json{{"h", r.h},
              {"min_modulus", r.min_modulus},
              {"max_modulus", r.max_modulus},
              {"bound", r.bound},
              {"norm", to_json(r.norm)},
              {"norm_distance", r.norm_distance},
              {"norm_integral", r.norm_integral},
              {"pass", r.pass}};
}

Json to_json(const UnitCircleReport& r) {
  Json j{{"result", r.result}, {"reason", r.reason}};
  if (r.evidence) {
    j["evidence"] = to_json(*r.evidence);
    j["evidence_modulus"] = std::abs(*r.evidence);
  }
  return j;
}

Json to_json(const ConditionFReport& r) {
  Json e = Json::array();
  for (const auto& x : r.entries)
    e.push_back(Json{{"g", x.g},
                     {"level", x.level},
                     {"bound", x.bound},
                     {"max_modulus", x.max_modulus},
                     {"worst_embedding", x.worst_embedding},
                     {"worst_value", to_json(x.worst_value)},
                     {"pass", x.pass}});
  return Json{{"pass", r.pass}, {"galois_unitary", r.galois_unitary}, {"entries", e}};
}

Json to_json(const QuarticFactorCheck& r) {
  Json a = Json::array(), b = Json::array();
  for (const auto& q : r.product_rational) a.push_back(to_json(q));
  for (const auto& q : r.product_sqrt13) b.push_back(to_json(q));
  return Json{{"exact", r.exact}, {"product_rational", a}, {"product_sqrt13", b}};
}

// ---------------------------------------------------------------------------

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string csv_levels(const GrowthProcess& p) {
  std::ostringstream o;
  o << "level,label,mu,chain_dim,betti,normalized_betti\n";
  for (std::size_t n = 0; n < p.levels.size(); ++n) {
    const auto& l = p.levels[n];
    o << n << ',' << quote_csv(l.label) << ',' << csv_number(l.mu) << ',' << l.chain_dim << ',' << l.betti << ','
      << csv_number(l.normalized_betti()) << '\n';
  }
  return o.str();
}

std::string csv_spectrum(const GrowthProcess& p) {
  std::ostringstream o;
  o << "level,eigenvalue,multiplicity\n";
  for (std::size_t n = 0; n < p.levels.size(); ++n) {
    const auto& ev = p.levels[n].spectrum.eigenvalues;
    for (std::size_t k = 0; k < ev.size();) {
      const double v = round_sig(ev[k]);
      std::size_t m = 0;
      while (k < ev.size() && round_sig(ev[k]) == v) ++k, ++m;
      o << n << ',' << csv_number(v) << ',' << m << '\n';
    }
  }
  return o.str();
}

std::string csv_density(const GrowthProcess& p, const LambdaGrid& grid) {
  std::ostringstream o;
  o << "level,lambda,normalized_count\n";
  for (std::size_t n = 0; n < p.levels.size(); ++n)
    for (double t : grid.thresholds) o << n << ',' << csv_number(std::sqrt(t)) << ',' << csv_number(p.levels[n].F(t)) << '\n';
  return o.str();
}

std::string csv_grid(const AsymptoticReport& r) {
  std::ostringstream o;
  o << "t,lambda,G,G_plus,small_mass\n";
  for (const auto& g : r.grid)
    o << csv_number(g.t) << ',' << csv_number(std::sqrt(g.t)) << ',' << csv_number(g.G.value) << ','
      << csv_number(g.G_plus) << ',' << csv_number(g.small_mass.value) << '\n';
  return o.str();
}

std::string csv_bracket(const DensityBracket& b, const std::vector<double>* direct) {
  std::ostringstream o;
  o << "lambda,lower,estimate,upper" << (direct ? ",direct" : "") << '\n';
  for (std::size_t k = 0; k < b.lambda.size(); ++k) {
    o << csv_number(b.lambda[k]) << ',' << csv_number(b.lower[k]) << ',' << csv_number(b.estimate[k]) << ','
      << csv_number(b.upper[k]);
    if (direct) o << ',' << csv_number((*direct)[k]);
    o << '\n';
  }
  return o.str();
}

std::string csv_fp(const FpBettiSequence& s) {
  std::ostringstream o;
  o << "level,index,fp_betti,rational_betti,normalized\n";
  for (std::size_t k = 0; k < s.index.size(); ++k)
    o << k << ',' << s.index[k] << ',' << s.fp_betti[k] << ',' << s.rational_betti[k] << ','
      << s.normalized[k].get_str() << '\n';
  return o.str();
}

std::string csv_curve(const CurveScanReport& r) {
  std::ostringstream o;
  o << "t,dim\n";
  for (std::size_t k = 0; k < r.t.size(); ++k) o << csv_number(r.t[k]) << ',' << r.dims[k] << '\n';
  o << "0," << r.dim_at_zero << '\n';
  return o.str();
}

}  // namespace l2approx
