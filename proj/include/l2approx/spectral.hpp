#pragma once

// Dense Hermitian spectra by cyclic Jacobi, inertia counting, spectral
// density step functions and log-determinants.
//
// Thresholds are kept in the eigenvalue scale: F(lambda) counts eigenvalues
// <= lambda^2. Functions taking `lambda` say so; functions taking `t` expect
// an eigenvalue-scale threshold.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/fox.hpp"
#include "l2approx/group_ring.hpp"
#include "l2approx/matrix.hpp"
#include "l2approx/quotients.hpp"

namespace l2approx {

struct JacobiOptions {
  double hermitian_tol = 1e-10;  // relative asymmetry allowed on input
  double off_tol = 1e-12;        // relative off-diagonal norm at exit
  std::size_t max_sweeps = 100;
  std::size_t max_size = 4096;
};

// Sorted eigenvalues of a real symmetric or complex Hermitian matrix.
// Throws NotHermitian on asymmetric input.
std::vector<double> jacobi_eigenvalues(const RealMatrix& m, const JacobiOptions& opt = {});
std::vector<double> jacobi_eigenvalues(const ComplexMatrix& m, const JacobiOptions& opt = {});

struct HalfLaplacianSpectrum {
  std::vector<double> eigenvalues;  // ascending, near-zero values clamped to 0
  std::size_t zero_count = 0;
  double zero_tol = 0.0;
  long level = -1;
  // Set when an exact nullity replaced the float one and they disagreed.
  bool nullity_overridden = false;

  std::size_t size() const { return eigenvalues.size(); }
  // #eigenvalues <= t.
  std::size_t count_le(double t) const;
  // #eigenvalues in (0, t).
  std::size_t count_positive_below(double t) const;
  // #eigenvalues in (0, t].
  std::size_t count_positive_le(double t) const;
  double smallest_positive() const;  // +inf when none
  double largest() const;
};

// zero_tol: eigenvalues with |ev| <= zero_tol count as zero. When absent the
// tolerance is 1e-9 times max(1, largest |eigenvalue|).
HalfLaplacianSpectrum eigenvalues_sym(const RealMatrix& m, std::optional<double> zero_tol = std::nullopt);
HalfLaplacianSpectrum eigenvalues_sym(const ComplexMatrix& m, std::optional<double> zero_tol = std::nullopt);
HalfLaplacianSpectrum spectrum_from_values(std::vector<double> values, double zero_tol);

// Replaces the float nullity with an exact one: the smallest `exact` values
// become 0 and the rest are kept.
void apply_exact_nullity(HalfLaplacianSpectrum& s, std::size_t exact);

// #eigenvalues <= lambda^2 from the inertia of m - lambda^2 I via a
// Bunch-Kaufman LDL* factorisation. Throws ShiftSingular when a pivot
// vanishes to within 1e-12 of the matrix scale.
std::size_t count_below(const RealMatrix& m, double lambda);
std::size_t count_below(const ComplexMatrix& m, double lambda);

// Normalised right-continuous step function lambda -> mu * #{ev <= lambda^2}.
class SpectralDensity {
 public:
  SpectralDensity() = default;
  SpectralDensity(const HalfLaplacianSpectrum& s, double mu, std::string label = {});

  double mu() const noexcept { return mu_; }
  const std::string& label() const noexcept { return label_; }
  double total_mass() const noexcept { return mu_ * static_cast<double>(ev_.size()); }
  // F(lambda).
  double operator()(double lambda) const { return at_threshold(lambda * lambda); }
  double at_threshold(double t) const;
  // (lambda, F(lambda)) at each jump.
  std::vector<std::pair<double, double>> breakpoints() const;

 private:
  std::vector<double> ev_;
  double mu_ = 1.0;
  std::string label_;
};

std::vector<SpectralDensity> density(const std::vector<HalfLaplacianSpectrum>& spectra, const std::vector<double>& mu);

// Sum of log over strictly positive eigenvalues; for an integer matrix this
// is log |qbar(0)| of its characteristic polynomial.
double log_det_prime(const HalfLaplacianSpectrum& s);

// Sum of |beta_ij(g)| over all entries; bounds the norm of every unitary
// specialisation.
template <class C>
double n_bound(const GroupRingMatrix<C>& m) {
  double n = 0.0;
  for (const auto& [idx, e] : m.entries())
    for (const auto& [w, c] : e.terms()) n += std::abs(scalar_traits<C>::to_complex(c));
  return n;
}

struct FlatSectionComplex {
  std::vector<ComplexMatrix> boundaries;  // specialised d_j
  std::vector<ComplexMatrix> laplacians;  // d_j d_j^*, from the boundaries
  double max_discrepancy = 0.0;           // vs specialising d d^* symbolically
};

// Numeric complex of flat sections for a unitary representation. Both routes
// to the half-Laplacians are computed; a discrepancy above 1e-9 throws
// TheoremViolation.
FlatSectionComplex flat_section_complex(const GroupComplex& base, const FiniteRep<Complex>& rep);

// Helpers for the numeric side.
template <class T>
RealMatrix to_real(const Matrix<T>& m) {
  RealMatrix r(m.rows(), m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = scalar_traits<T>::to_complex(m(i, j)).real();
  return r;
}

// d d^* for a boundary in the row-vector convention.
template <class T>
Matrix<T> gram(const Matrix<T>& d) {
  return multiply(d, adjoint(d));
}

}  // namespace l2approx
