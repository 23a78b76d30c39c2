#pragma once

// Spectral densities from characters alone: symbolic moments Tr chi(A^r) of a
// group-ring matrix A = d d^*, Chebyshev moments, and Jackson-damped
// indicator approximations turned into certified lower/upper brackets.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "l2approx/group_ring.hpp"
#include "l2approx/quotients.hpp"
#include "l2approx/spectral.hpp"

namespace l2approx {

class Character {
 public:
  Character() = default;
  Character(std::string label, ClassFunction eval, double degree);

  // 1 at the identity, 0 elsewhere. Only decidable for free and free-abelian
  // groups, where a reduced word is trivial iff it is empty.
  static Character delta(const Presentation& p);
  static Character trivial();
  // Permutation character of a level: fixed cosets.
  static Character level(const CosetTable& t);
  static Character of_rep(const FiniteRep<Complex>& rep, std::string label = "rep");
  // Values on the listed words (normalised by p); any other query throws.
  static Character table(const Presentation& p, std::map<Word, Complex> values, std::string label = "table");

  Complex operator()(const Word& w) const;
  double degree() const noexcept { return degree_ * copies_; }
  const std::string& label() const noexcept { return label_; }
  // Character of `copies` orthogonal copies.
  Character multiple(std::size_t copies) const;

  bool has_finite_model() const noexcept { return table_ != nullptr || rep_ != nullptr; }
  // Specialises an integer matrix through the finite model (block size =
  // model dimension). Throws InvalidArgument without a model.
  ComplexMatrix specialize_model(const IntMatrix& m) const;
  std::size_t copies() const noexcept { return copies_; }

  // Words at which the character has been evaluated since the last reset.
  const std::set<Word>& queried() const { return *queried_; }
  void reset_queries() const { queried_->clear(); }

 private:
  std::string label_;
  ClassFunction eval_;
  double degree_ = 1.0;
  std::size_t copies_ = 1;
  std::shared_ptr<const CosetTable> table_;
  std::shared_ptr<const FiniteRep<Complex>> rep_;
  std::shared_ptr<std::set<Word>> queried_ = std::make_shared<std::set<Word>>();
};

// chi(g^-1) = conj chi(g) on the samples; returns the worst deviation.
double self_adjointness_defect(const Character& chi, const std::vector<Word>& samples);
// min over random a in C[pi] with support <= max_support of
// chi(a^* a) / ||a||^2, which is >= 0 for a positive character.
double positivity_minimum(const Character& chi, std::size_t generators, std::size_t trials, std::size_t max_support,
                          std::mt19937_64& rng);

struct MomentOptions {
  std::size_t support_cap = 20'000;  // total support of one symbolic power
  bool allow_finite_fallback = true;
};

struct MomentSequence {
  std::vector<Complex> power;      // m_r = Tr chi(A^r)
  std::vector<double> chebyshev;   // Tr chi(T_k(2A/N - 1)), real parts
  double n_bound = 0.0;            // N with spec(A) in [0, N]
  std::size_t matrix_size = 0;     // a
  double degree = 1.0;             // chi(1)
  double max_imaginary = 0.0;      // largest |Im| seen; must stay tiny
  std::string route;               // "symbolic" or "finite-model"
  std::set<Word> queried;          // group elements at which chi was read

  MomentSequence scaled(double factor) const;
};

// Symbolic route through powers of A in the group ring. On SupportOverflow
// falls back to specialise-then-trace when the character has a finite model
// (and the option allows it); otherwise rethrows.
MomentSequence moments(const IntMatrix& a, const Character& chi, std::size_t M, const RingConfig& cfg,
                       const MomentOptions& opt = {});
// Specialise-then-trace only.
MomentSequence moments_finite(const IntMatrix& a, const Character& chi, std::size_t M);

struct DensityBracket {
  std::vector<double> lambda;
  std::vector<double> lower;
  std::vector<double> estimate;  // plain Jackson-damped value
  std::vector<double> upper;
  double normalization = 1.0;
  std::size_t degree = 0;  // polynomial degree M

  double max_width() const;
};

// Jackson coefficients g_0..g_M.
std::vector<double> jackson_coefficients(std::size_t M);

// Brackets normalization * chi-mass of spec(A) in [0, lambda^2] at every
// lambda. normalization defaults to 1/chi(1).
DensityBracket density_from_moments(const MomentSequence& ms, const std::vector<double>& lambdas,
                                    std::optional<double> normalization = std::nullopt);

struct RouteComparison {
  DensityBracket bracket;
  std::vector<double> direct;  // F(lambda) from the eigenvalues
  std::vector<bool> contained;
  bool pass = true;
  double tolerance = 1e-9;
};

// Character route against the direct eigenvalue route at one finite level.
RouteComparison compare_routes(const IntMatrix& a, const Character& level_chi, const std::vector<double>& lambdas,
                               std::size_t M, const RingConfig& cfg);

}  // namespace l2approx
