#include "l2approx/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "l2approx/exact_linalg.hpp"
#include "l2approx/parallel.hpp"

namespace l2approx {

double LevelData::G(double t) const {
  return mu * static_cast<double>(betti + spectrum.count_positive_below(t));
}

double LevelData::F(double t) const {
  return mu * static_cast<double>(betti + spectrum.count_positive_le(t));
}

void GrowthProcess::validate(double dim_bound, double norm_bound) const {
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const auto& l = levels[n];
    if (!(l.mu > 0)) throw InvalidArgument("level " + std::to_string(n) + ": growth rate must be positive");
    if (l.mu * static_cast<double>(l.chain_dim) > dim_bound + 1e-12)
      throw HypothesisFailed("level " + std::to_string(n) + ": mu * dim C exceeds the configured bound");
    if (l.boundary_norm > norm_bound + 1e-9)
      throw HypothesisFailed("level " + std::to_string(n) + ": boundary norm exceeds the configured bound");
  }
}

namespace {

struct BoundarySpectrum {
  HalfLaplacianSpectrum spectrum;
  std::size_t rank = 0;
};

// Spectrum of d d^* on the rows of d, computed from the smaller Gram matrix.
template <class T>
BoundarySpectrum boundary_spectrum(const Matrix<T>& d, std::optional<std::size_t> exact_rank,
                                   std::optional<double> zero_tol) {
  BoundarySpectrum out;
  if (d.rows() == 0 || d.cols() == 0) {
    out.spectrum = spectrum_from_values(std::vector<double>(d.rows(), 0.0), 0.0);
    return out;
  }
  const bool wide = d.rows() <= d.cols();
  const auto small = eigenvalues_sym(wide ? gram(d) : gram(adjoint(d)), zero_tol);
  std::vector<double> values(d.rows() - small.size(), 0.0);
  values.insert(values.end(), small.eigenvalues.begin(), small.eigenvalues.end());
  out.spectrum = spectrum_from_values(std::move(values), small.zero_tol);
  if (exact_rank) {
    apply_exact_nullity(out.spectrum, d.rows() - *exact_rank);
    out.rank = *exact_rank;
  } else {
    out.rank = d.rows() - out.spectrum.zero_count;
  }
  return out;
}

double norm_from(const HalfLaplacianSpectrum& s) { return s.size() ? std::sqrt(std::max(0.0, s.largest())) : 0.0; }

}  // namespace

GrowthProcess tower_process(const GroupComplex& base, const std::vector<CosetTable>& tables, std::size_t i,
                            std::string label) {
  if (i > base.top_degree()) throw InvalidArgument("degree exceeds the complex");
  GrowthProcess p;
  p.label = std::move(label);
  p.degree = i;
  p.levels.resize(tables.size());
  parallel_for(tables.size(), [&](std::size_t n) {
    const CosetTable& t = tables[n];
    try {
      LevelData& l = p.levels[n];
      l.label = "index " + std::to_string(t.index());
      l.mu = 1.0 / static_cast<double>(t.index());
      l.chain_dim = base.cells(i) * t.index();
      l.betti_exact = true;
      std::size_t rank_in = 0;
      if (i >= 1) rank_in = rank_bareiss(specialize(base.boundaries[i - 1], t, Integer(0)));
      if (i < base.top_degree()) {
        const Matrix<Integer> d = specialize(base.boundaries[i], t, Integer(0));
        const std::size_t r = rank_bareiss(d);
        auto bs = boundary_spectrum(to_real(d), r, std::nullopt);
        l.spectrum = std::move(bs.spectrum);
        l.betti = l.chain_dim - rank_in - r;
      } else {
        l.betti = l.chain_dim - rank_in;
      }
      l.boundary_norm = norm_from(l.spectrum);
    } catch (Error& e) {
      if (e.level() < 0) e.set_level(static_cast<long>(n));
      throw;
    }
  });
  return p;
}

GrowthProcess bundle_process(const GroupComplex& base, const std::vector<FiniteRep<Complex>>& reps, std::size_t i,
                             std::optional<std::vector<double>> mu, std::optional<double> zero_tol,
                             std::string label) {
  if (i > base.top_degree()) throw InvalidArgument("degree exceeds the complex");
  if (mu && mu->size() != reps.size()) throw InvalidArgument("one growth rate per level is required");
  GrowthProcess p;
  p.label = std::move(label);
  p.degree = i;
  p.levels.resize(reps.size());
  parallel_for(reps.size(), [&](std::size_t n) {
    try {
      const auto& rep = reps[n];
      LevelData& l = p.levels[n];
      l.label = "level " + std::to_string(n);
      l.mu = mu ? (*mu)[n] : 1.0 / static_cast<double>(rep.dimension);
      l.chain_dim = base.cells(i) * rep.dimension;
      std::size_t rank_in = 0;
      if (i >= 1) rank_in = boundary_spectrum(specialize(base.boundaries[i - 1], rep), std::nullopt, zero_tol).rank;
      if (i < base.top_degree()) {
        auto bs = boundary_spectrum(specialize(base.boundaries[i], rep), std::nullopt, zero_tol);
        l.spectrum = std::move(bs.spectrum);
        l.betti = l.chain_dim - rank_in - bs.rank;
      } else {
        l.betti = l.chain_dim - rank_in;
      }
      l.boundary_norm = norm_from(l.spectrum);
    } catch (Error& e) {
      if (e.level() < 0) e.set_level(static_cast<long>(n));
      throw;
    }
  });
  return p;
}

GrowthProcess operator_process(const std::vector<ComplexMatrix>& alphas, const std::vector<double>& mu,
                               std::optional<double> zero_tol, std::string label) {
  if (mu.size() != alphas.size()) throw InvalidArgument("one growth rate per level is required");
  GrowthProcess p;
  p.label = std::move(label);
  for (std::size_t n = 0; n < alphas.size(); ++n) {
    LevelData l;
    l.label = "level " + std::to_string(n);
    l.mu = mu[n];
    l.chain_dim = alphas[n].cols();
    auto bs = boundary_spectrum(alphas[n], std::nullopt, zero_tol);
    l.spectrum = std::move(bs.spectrum);
    l.betti = l.chain_dim - bs.rank;
    l.boundary_norm = norm_from(l.spectrum);
    p.levels.push_back(std::move(l));
  }
  return p;
}

LimitPolicy LimitPolicy::parse(const std::string& text) {
  LimitPolicy p;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  std::optional<std::size_t> k;
  if (colon != std::string::npos) {
    const std::string tail = text.substr(colon + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos || std::stoul(tail) == 0)
      throw InvalidArgument("policy parameter must be a positive integer: '" + text + "'");
    k = std::stoul(tail);
  }
  if (head == "liminf" && !k) {
    p.kind = Kind::liminf;
  } else if (head == "limsup" && !k) {
    p.kind = Kind::limsup;
  } else if (head == "tail-mean") {
    p.kind = k ? Kind::last_k_mean : Kind::tail_mean;
    if (k) p.K = *k;
  } else if (head == "last-K-mean" && k) {
    p.kind = Kind::last_k_mean;
    p.K = *k;
  } else {
    throw InvalidArgument("unknown limit policy '" + text + "'");
  }
  return p;
}

std::string LimitPolicy::describe() const {
  std::string s;
  switch (kind) {
    case Kind::liminf: s = "liminf"; break;
    case Kind::limsup: s = "limsup"; break;
    case Kind::tail_mean: s = "tail-mean"; break;
    case Kind::last_k_mean: return "tail-mean:" + std::to_string(K);
  }
  if (tail_start) s += "@" + std::to_string(*tail_start);
  return s;
}

PolicyValue apply_policy(const LimitPolicy& policy, const std::vector<double>& seq) {
  if (seq.empty()) throw InvalidArgument("limit policy applied to an empty sequence");
  const std::size_t n = seq.size();
  std::size_t start = std::min(policy.tail_start.value_or(n / 2), n - 1);
  if (policy.kind == LimitPolicy::Kind::last_k_mean) start = n - std::min(policy.K, n);
  PolicyValue v;
  v.policy = policy.describe();
  const auto first = seq.begin() + static_cast<long>(start);
  v.liminf = *std::min_element(first, seq.end());
  v.limsup = *std::max_element(first, seq.end());
  v.measurable = v.limsup - v.liminf <= 1e-9;
  switch (policy.kind) {
    case LimitPolicy::Kind::liminf: v.value = v.liminf; break;
    case LimitPolicy::Kind::limsup: v.value = v.limsup; break;
    case LimitPolicy::Kind::tail_mean:
    case LimitPolicy::Kind::last_k_mean:
      v.value = std::accumulate(first, seq.end(), 0.0) / static_cast<double>(seq.end() - first);
      break;
  }
  return v;
}

LambdaGrid LambdaGrid::geometric(double start, double stop, double factor) {
  if (!(start > 0) || !(stop > 0) || !(factor > 0) || factor == 1.0)
    throw InvalidArgument("grid needs positive start/stop and a factor other than 1");
  if (factor > 1) factor = 1.0 / factor;
  const double hi = std::max(start, stop), lo = std::min(start, stop);
  LambdaGrid g;
  for (double t = hi; t >= lo * (1 - 1e-12); t *= factor) {
    g.thresholds.push_back(t);
    if (g.thresholds.size() > 10000) throw InvalidArgument("grid has too many points");
  }
  return g;
}

LambdaGrid LambdaGrid::standard() { return geometric(0.5, std::ldexp(1.0, -20), 0.5); }

LambdaGrid LambdaGrid::parse(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) || c.find(':') != std::string::npos)
    throw InvalidArgument("grid must be start:stop:factor, got '" + text + "'");
  try {
    std::size_t pa, pb, pc;
    const double s = std::stod(a, &pa), e = std::stod(b, &pb), f = std::stod(c, &pc);
    if (pa != a.size() || pb != b.size() || pc != c.size()) throw std::invalid_argument("trailing");
    return geometric(s, e, f);
  } catch (std::logic_error&) {
    throw InvalidArgument("grid must be start:stop:factor, got '" + text + "'");
  }
}

std::optional<std::size_t> find_plateau(const std::vector<double>& v, double tol) {
  for (std::size_t j = v.size(); j-- >= 3;) {
    const double hi = std::max({v[j], v[j - 1], v[j - 2]});
    const double lo = std::min({v[j], v[j - 1], v[j - 2]});
    if (hi - lo <= tol) return j;
  }
  return std::nullopt;
}

PolicyValue projective_dimension(const GrowthProcess& p, const LimitPolicy& policy) {
  std::vector<double> seq;
  for (const auto& l : p.levels) seq.push_back(l.normalized_betti());
  return apply_policy(policy, seq);
}

AsymptoticReport analyze(const GrowthProcess& p, const LambdaGrid& grid, const LimitPolicy& policy) {
  AsymptoticReport r;
  r.label = p.label;
  r.degree = p.degree;
  r.policy = policy.describe();
  for (const auto& l : p.levels) r.normalized_betti.push_back(l.normalized_betti());
  r.projdim = apply_policy(policy, r.normalized_betti);
  std::vector<double> gvalues;
  for (std::size_t j = 0; j < grid.thresholds.size(); ++j) {
    const double t = grid.thresholds[j];
    GridPoint gp;
    gp.t = t;
    std::vector<double> g, small, f;
    for (const auto& l : p.levels) {
      g.push_back(l.G(t));
      small.push_back(l.mu * static_cast<double>(l.spectrum.count_positive_below(t)));
      f.push_back(l.F(t));
    }
    gp.G = apply_policy(policy, g);
    gp.small_mass = apply_policy(policy, small);
    gp.G_plus = j == 0 ? apply_policy(policy, f).value : r.grid[j - 1].G.value;
    gvalues.push_back(gp.G.value);
    r.grid.push_back(gp);
  }
  r.plateau_index = find_plateau(gvalues);
  if (r.plateau_index) {
    r.g0_plus = gvalues[*r.plateau_index];
    r.tordim = *r.g0_plus - r.projdim.value;
  } else {
    r.note = "no plateau of three grid points within 1e-6; refine the grid or add levels";
  }
  return r;
}

double torsion_dimension(const GrowthProcess& p, const LambdaGrid& grid, const LimitPolicy& policy) {
  const auto r = analyze(p, grid, policy);
  if (!r.tordim) {
    std::ostringstream os;
    os << "no plateau in G on the grid; trace:";
    for (const auto& g : r.grid) os << " (" << g.t << ", " << g.G.value << ")";
    throw GridTooCoarse(os.str());
  }
  return *r.tordim;
}

DecompositionReport dimension_decomposition(const GrowthProcess& p, std::optional<double> reference,
                                        const LambdaGrid& grid, const LimitPolicy& policy, double tolerance) {
  DecompositionReport t;
  t.policy = policy.describe();
  t.tolerance = tolerance;
  t.reference = reference;
  t.torsion = torsion_dimension(p, grid, policy);
  t.projective = projective_dimension(p, policy).value;
  t.sum = t.projective + t.torsion;
  if (reference) t.within_tolerance = std::abs(t.sum - *reference) <= tolerance;
  return t;
}

DensityComparison density_comparison(const GrowthProcess& p, const std::function<double(double)>& reference,
                                     const LambdaGrid& grid, const LimitPolicy& policy, double tol) {
  const auto r = analyze(p, grid, policy);
  DensityComparison d;
  for (std::size_t j = 1; j < r.grid.size(); ++j) {
    const double lambda = std::sqrt(r.grid[j].t);
    const double ref = reference(lambda);
    d.lambda.push_back(lambda);
    d.G.push_back(r.grid[j].G.value);
    d.G_plus.push_back(r.grid[j].G_plus);
    d.reference.push_back(ref);
    const bool in = r.grid[j].G.value - tol <= ref && ref <= r.grid[j].G_plus + tol;
    d.contained.push_back(in);
    d.pass = d.pass && in;
  }
  return d;
}

CurveScanReport curve_scan(const GroupComplex& base, const std::function<FiniteRep<Complex>(double)>& family,
                           const std::vector<double>& ts, std::size_t i, std::size_t window,
                           std::optional<double> zero_tol) {
  if (ts.empty()) throw InvalidArgument("curve scan needs parameters");
  for (std::size_t n = 0; n < ts.size(); ++n) {
    if (ts[n] == 0.0) throw InvalidArgument("curve parameters must be nonzero");
    if (n > 0 && !(std::abs(ts[n]) < std::abs(ts[n - 1]))) throw InvalidArgument("curve parameters must decrease to 0");
  }
  auto dim_at = [&](double t) {
    const GrowthProcess p = bundle_process(base, {family(t)}, i, std::vector<double>{1.0}, zero_tol);
    return p.levels[0].betti;
  };
  CurveScanReport r;
  r.t = ts;
  for (double t : ts) r.dims.push_back(dim_at(t));
  r.dim_at_zero = dim_at(0.0);
  const std::size_t w = std::min(window, r.dims.size());
  const bool stable = std::all_of(r.dims.end() - static_cast<long>(w), r.dims.end(),
                                  [&](std::size_t d) { return d == r.dims.back(); });
  if (!stable || w < window) {
    std::ostringstream os;
    os << "dimensions keep changing:";
    for (auto d : r.dims) os << ' ' << d;
    throw NoStabilization(os.str());
  }
  r.stable_dim = r.dims.back();
  r.jump = static_cast<long>(r.dim_at_zero) - static_cast<long>(*r.stable_dim);
  return r;
}

double BoundProfile::c() const {
  return static_cast<double>(h) * std::log(M) + (static_cast<double>(h) - 1.0) * std::log(N1()) + std::log(N);
}

BoundCheckReport arithmetic_bound_check(const GrowthProcess& p, const BoundProfile& profile, const LambdaGrid& grid,
                                        std::size_t a) {
  if (!(profile.M >= 1) || !(profile.N > 0) || profile.h == 0 || !(profile.L > 0))
    throw ProfileMissing("profile needs h >= 1, M >= 1, N > 0 and L > 0");
  BoundCheckReport r;
  r.c = profile.c();
  const double ld_floor =
      -static_cast<double>(profile.h) * static_cast<double>(a) * std::log(profile.M * profile.N1());
  for (std::size_t k = 0; k < p.levels.size(); ++k) {
    const auto& l = p.levels[k];
    for (double t : grid.thresholds) {
      const double lambda = std::sqrt(t);
      if (!(lambda < 1.0)) continue;
      const double lhs = l.mu * static_cast<double>(l.spectrum.count_positive_le(t));
      const double rhs = r.c / (-std::log(lambda));
      if (lhs > rhs + 1e-12) r.violations.push_back({k, lambda, lhs, rhs, "envelope"});
    }
    const double ld = l.mu * log_det_prime(l.spectrum);
    if (ld < ld_floor - 1e-9) r.violations.push_back({k, 0.0, ld, ld_floor, "log-det"});
  }
  r.pass = r.violations.empty();
  return r;
}

SubadditivityReport subadditivity_harness(const GrowthProcess& first, const GrowthProcess& second,
                                          const GrowthProcess& direct_sum, const GrowthProcess& extension,
                                          const LambdaGrid& grid, const LimitPolicy& policy, double tol) {
  SubadditivityReport r;
  r.td_first = torsion_dimension(first, grid, policy);
  r.td_second = torsion_dimension(second, grid, policy);
  r.td_sum = torsion_dimension(direct_sum, grid, policy);
  r.td_extension = torsion_dimension(extension, grid, policy);
  r.additive = std::abs(r.td_sum - (r.td_first + r.td_second)) <= tol;
  r.sandwiched = std::max(r.td_first, r.td_second) - tol <= r.td_extension &&
                 r.td_extension <= r.td_first + r.td_second + tol;
  return r;
}

}  // namespace l2approx
