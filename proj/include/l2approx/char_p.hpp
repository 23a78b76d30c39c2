#pragma once

// Characteristic-p approximation: normalised F_p Betti numbers over towers of
// normal subgroups of p-power index, their monotonicity (including the
// per-step bound dim H(next) <= p dim H(prev) on index-p refinements) and the
// comparison with an L2 reference. Everything here is exact.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/fox.hpp"
#include "l2approx/quotients.hpp"

namespace l2approx {

struct PTower {
  std::uint64_t p = 2;
  std::vector<CosetTable> levels;
  std::vector<unsigned> exponents;  // index of level j is p^exponents[j]
  std::vector<std::string> labels;

  // Checks primality of p, validity and normality of every table, p-power
  // indices with strictly increasing exponents. Throws InvalidTower.
  static PTower make(const Presentation& pres, std::uint64_t p, std::vector<CosetTable> levels,
                     std::vector<std::string> labels = {});
  // Kernels of pi -> Z/p^j for j = first..last through generator weights.
  static PTower cyclic(const Presentation& pres, const std::vector<long>& weights, std::uint64_t p, unsigned first,
                       unsigned last);
};

bool is_prime(std::uint64_t n);

struct FpBettiSequence {
  std::uint64_t p = 2;
  std::size_t degree = 0;
  std::vector<std::size_t> index;
  std::vector<std::size_t> fp_betti;        // dim_{F_p} H_i of the cover
  std::vector<std::size_t> rational_betti;  // dim_Q H_i, never larger
  std::vector<Rational> normalized;         // fp_betti / index
};

FpBettiSequence fp_betti_sequence(const PTower& t, const GroupComplex& base, std::size_t i);

// dim_{F_p} H_i of the cover attached to one coset table.
std::size_t fp_betti(const GroupComplex& base, const CosetTable& table, std::uint64_t p, std::size_t i);

struct StepCheck {
  std::size_t from_index = 0;
  std::size_t to_index = 0;
  std::size_t dim_from = 0;
  std::size_t dim_to = 0;
  bool ok = true;  // dim_to * from_index <= dim_from * to_index
};

struct MonotonicityReport {
  std::vector<StepCheck> coarse;  // consecutive tower levels
  std::vector<StepCheck> steps;   // index-p refinement, when available
  bool refined = false;
  bool monotone = true;
  std::string note;
};

// Chain of intermediate coset tables of index p^e_j, p^(e_j + 1), ..., p^e_(j+1)
// between two consecutive normal levels, each normal in pi. Built from a
// central series of the finite quotient pi / Gamma_(j+1). Throws
// ImageTooLarge past order_cap and InvalidTower when the finer level is not
// contained in the coarser one.
std::vector<CosetTable> refine_step(const CosetTable& coarse, const CosetTable& fine, std::uint64_t p,
                                    std::size_t order_cap = 4096);

// Coarse check on a sequence alone.
MonotonicityReport monotonicity_check(const FpBettiSequence& seq);
// Coarse check plus per-step checks on index-p refinements. A failure throws
// TheoremViolation unless `strict` is false.
MonotonicityReport monotonicity_check(const PTower& t, const GroupComplex& base, std::size_t i, bool strict = true,
                                      std::size_t order_cap = 4096);

struct InequalityReport {
  double b2_reference = 0.0;
  Rational limit_estimate;  // last term: an upper bound for the limit
  std::size_t fp_base = 0;  // dim_{F_p} H_i(X)
  bool lower_ok = true;     // b2 <= limit estimate
  bool upper_ok = true;     // limit estimate <= fp_base
  bool pass = true;
  // The estimate exceeds the reference by more than the last decrement of the
  // sequence. Reported as data: whether the limit can exceed b2 is open.
  bool gap_observed = false;
};

InequalityReport fp_l2_inequality(const FpBettiSequence& seq, double b2_reference, std::size_t fp_base,
                                 double tol = 1e-12);

}  // namespace l2approx
