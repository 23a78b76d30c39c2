#pragma once

// Aggregation over growth processes: normalised Betti numbers, the spectral
// step functions G and G+, projective and torsion dimensions under explicit
// limit policies, curve scans, arithmetic envelopes and subadditivity.
//
// For degree i a level contributes dim H_i and the spectrum of d_{i+1} d_{i+1}^*
// (eigenvalue scale). On a grid of thresholds t = lambda^2:
//   F^n(t) = mu^n (dim H_i + #{ev in (0, t]}),  G^n(t) = mu^n (dim H_i + #{ev in (0, t)}).

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/fox.hpp"
#include "l2approx/quotients.hpp"
#include "l2approx/spectral.hpp"

namespace l2approx {

struct LevelData {
  std::string label;
  double mu = 1.0;
  std::size_t chain_dim = 0;  // dim C_i
  std::size_t betti = 0;      // dim H_i
  bool betti_exact = false;
  HalfLaplacianSpectrum spectrum;  // of d_{i+1} d_{i+1}^*
  double boundary_norm = 0.0;      // largest eigenvalue of the spectrum, square-rooted

  double normalized_betti() const { return mu * static_cast<double>(betti); }
  // mu (b + #{ev in (0, t)}) and mu (b + #{ev in (0, t]}).
  double G(double t) const;
  double F(double t) const;
};

struct GrowthProcess {
  std::string label;
  std::size_t degree = 0;
  std::vector<LevelData> levels;

  // Checks mu^n dim C_i <= dim_bound and boundary norms <= norm_bound.
  void validate(double dim_bound, double norm_bound) const;
};

// Covering tower through coset tables with exact Betti numbers; mu = 1/index.
GrowthProcess tower_process(const GroupComplex& base, const std::vector<CosetTable>& levels, std::size_t i,
                            std::string label = "tower");
// Flat bundles; Betti numbers from floating nullities with the given zero
// tolerance. mu defaults to 1/dim.
GrowthProcess bundle_process(const GroupComplex& base, const std::vector<FiniteRep<Complex>>& reps, std::size_t i,
                             std::optional<std::vector<double>> mu = std::nullopt,
                             std::optional<double> zero_tol = std::nullopt, std::string label = "bundle");
// Levels given directly by operators alpha_n (H = ker, spectrum of alpha alpha^*).
GrowthProcess operator_process(const std::vector<ComplexMatrix>& alphas, const std::vector<double>& mu,
                               std::optional<double> zero_tol = std::nullopt, std::string label = "operators");

struct LimitPolicy {
  enum class Kind { liminf, limsup, tail_mean, last_k_mean };
  Kind kind = Kind::tail_mean;
  std::optional<std::size_t> tail_start;  // default: second half of the levels
  std::size_t K = 1;

  // "liminf", "limsup", "tail-mean", "tail-mean:K" (mean of the last K),
  // "last-K-mean:K".
  static LimitPolicy parse(const std::string& text);
  std::string describe() const;
};

struct PolicyValue {
  double value = 0.0;
  double liminf = 0.0;  // over the tail
  double limsup = 0.0;
  bool measurable = false;  // limsup - liminf <= 1e-9
  std::string policy;
};

PolicyValue apply_policy(const LimitPolicy& policy, const std::vector<double>& seq);

// Decreasing thresholds t_j in the eigenvalue scale.
struct LambdaGrid {
  std::vector<double> thresholds;

  static LambdaGrid geometric(double start, double stop, double factor);
  // t = 2^-1 .. 2^-20.
  static LambdaGrid standard();
  // "start:stop:factor" in the eigenvalue scale, e.g. 0.5:1e-6:0.5.
  static LambdaGrid parse(const std::string& text);
};

struct GridPoint {
  double t = 0.0;
  PolicyValue G;
  double G_plus = 0.0;     // G at the next coarser threshold
  PolicyValue small_mass;  // policy limit of mu #{ev in (0, t)}
};

struct AsymptoticReport {
  std::string label;
  std::size_t degree = 0;
  std::string policy;
  std::vector<double> normalized_betti;
  std::vector<GridPoint> grid;
  PolicyValue projdim;  // G(0)
  std::optional<double> g0_plus;  // plateau of G as t -> 0
  std::optional<double> tordim;   // g0_plus - projdim.value
  std::optional<std::size_t> plateau_index;
  std::string note;  // why a value is missing
};

// Plateau: the first three consecutive values within tol, scanning from the
// finest end. Returns the index of the finest member, or nullopt.
std::optional<std::size_t> find_plateau(const std::vector<double>& values, double tol = 1e-6);

PolicyValue projective_dimension(const GrowthProcess& p, const LimitPolicy& policy);
// Full report. When no plateau forms the numbers stay empty and the grid
// trace is still returned; torsion_dimension() throws GridTooCoarse instead.
AsymptoticReport analyze(const GrowthProcess& p, const LambdaGrid& grid, const LimitPolicy& policy);
double torsion_dimension(const GrowthProcess& p, const LambdaGrid& grid, const LimitPolicy& policy);

struct DecompositionReport {
  double projective = 0.0;
  double torsion = 0.0;
  double sum = 0.0;
  std::optional<double> reference;
  bool within_tolerance = true;
  double tolerance = 0.05;
  std::string policy;
};

DecompositionReport dimension_decomposition(const GrowthProcess& p, std::optional<double> reference,
                                        const LambdaGrid& grid, const LimitPolicy& policy, double tolerance = 0.05);

struct DensityComparison {
  std::vector<double> lambda;
  std::vector<double> G;
  std::vector<double> reference;
  std::vector<double> G_plus;
  std::vector<bool> contained;
  bool pass = true;
};

// G(lambda) <= F_ref(lambda) <= G+(lambda) at each grid threshold except the
// coarsest, where G+ is undefined.
DensityComparison density_comparison(const GrowthProcess& p, const std::function<double(double lambda)>& reference,
                                     const LambdaGrid& grid, const LimitPolicy& policy, double tol = 1e-6);

struct CurveScanReport {
  std::vector<double> t;
  std::vector<std::size_t> dims;
  std::size_t dim_at_zero = 0;
  std::optional<std::size_t> stable_dim;
  long jump = 0;  // dim at 0 minus the stable value
};

// dim H_i along rho(t_n) with t_n -> 0, and at t = 0. Stabilisation means the
// last `window` values agree; otherwise NoStabilization.
CurveScanReport curve_scan(const GroupComplex& base, const std::function<FiniteRep<Complex>(double)>& family,
                           const std::vector<double>& ts, std::size_t i, std::size_t window = 4,
                           std::optional<double> zero_tol = std::nullopt);

struct BoundProfile {
  std::size_t h = 1;
  double M = 1.0;
  double N = 1.0;
  double L = 1.0;
  double N1() const { return 4.0 * N * L; }
  // h log M + (h-1) log N1 + log N.
  double c() const;
};

struct BoundViolation {
  std::size_t level = 0;
  double lambda = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string kind;  // "envelope" or "log-det"
};

struct BoundCheckReport {
  double c = 0.0;
  std::vector<BoundViolation> violations;
  bool pass = true;
};

// Envelope mu [F(t) - F(0)] <= c / (-ln lambda) for grid lambda < 1 and the
// log-determinant bound mu log-det' >= -h a log(M N1), a = cells per level
// in degree i+1 before specialisation.
BoundCheckReport arithmetic_bound_check(const GrowthProcess& p, const BoundProfile& profile, const LambdaGrid& grid,
                                        std::size_t a);

struct SubadditivityReport {
  double td_first = 0.0;
  double td_second = 0.0;
  double td_sum = 0.0;        // direct sum
  double td_extension = 0.0;  // block-triangular extension
  bool additive = false;      // td_sum = td_first + td_second
  bool sandwiched = false;    // max <= td_extension <= sum
};

SubadditivityReport subadditivity_harness(const GrowthProcess& first, const GrowthProcess& second,
                                          const GrowthProcess& direct_sum, const GrowthProcess& extension,
                                          const LambdaGrid& grid, const LimitPolicy& policy, double tol = 1e-6);

}  // namespace l2approx
