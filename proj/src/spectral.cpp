#include "l2approx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l2approx {

namespace {

double frob(const auto& m) {
  double s = 0.0;
  for (const auto& v : m.data()) s += std::norm(v);
  return std::sqrt(s);
}

double conj_if(double v) { return v; }
Complex conj_if(Complex v) { return std::conj(v); }
double real_of(double v) { return v; }
double real_of(Complex v) { return v.real(); }

template <class T>
void check_hermitian(const Matrix<T>& m, double tol) {
  if (m.rows() != m.cols()) throw NotHermitian("matrix is not square");
  const double scale = std::max(frob(m), std::numeric_limits<double>::min());
  double diff = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) diff += std::norm(m(i, j) - conj_if(m(j, i)));
  if (std::sqrt(diff) > tol * scale) throw NotHermitian("asymmetry exceeds tolerance");
}

// Cyclic-by-row Jacobi. For a Hermitian pivot a_pq = |a_pq| e^{i phi} the
// rotation is the real one composed with a phase on column q.
template <class T>
std::vector<double> jacobi(Matrix<T> a, const JacobiOptions& opt) {
  check_hermitian(a, opt.hermitian_tol);
  const std::size_t n = a.rows();
  if (n > opt.max_size) throw InvalidArgument("matrix exceeds the dense eigensolver cap");
  const double scale = frob(a);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = real_of(a(i, i));
  auto off = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };
  std::size_t sweep = 0;
  while (scale > 0 && off() > opt.off_tol * scale) {
    if (sweep++ >= opt.max_sweeps) throw NotHermitian("Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300 || mag < 1e-18 * scale) continue;
        const T phase = apq / mag;
        const double app = real_of(a(p, p)), aqq = real_of(a(q, q));
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        // J = [[c, s], [-s conj(phase), c conj(phase)]] on (p, q).
        const T jqp = -s * conj_if(phase), jqq = c * conj_if(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const T akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * jqp;
          a(k, q) = akp * s + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const T apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + conj_if(jqp) * aqk;
          a(q, k) = s * apk + conj_if(jqq) * aqk;
        }
        a(p, q) = T(0);
        a(q, p) = T(0);
        a(p, p) = real_of(a(p, p));
        a(q, q) = real_of(a(q, q));
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = real_of(a(i, i));
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Inertia count by Bunch-Kaufman pivoting on a dense Hermitian copy.
template <class T>
std::size_t negative_inertia(Matrix<T> a, double singular_tol) {
  const std::size_t n = a.rows();
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  std::size_t negatives = 0;
  auto swap_sym = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
  };
  std::size_t k = 0;
  while (k < n) {
    const double akk = std::abs(a(k, k));
    double colmax = 0.0;
    std::size_t r = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > colmax) {
        colmax = std::abs(a(i, k));
        r = i;
      }
    if (std::max(akk, colmax) <= singular_tol) throw ShiftSingular("shift collides with an eigenvalue");
    bool two = false;
    if (akk < alpha * colmax) {
      double rowmax = 0.0;
      for (std::size_t j = k; j < n; ++j)
        if (j != r) rowmax = std::max(rowmax, std::abs(a(r, j)));
      if (akk >= alpha * colmax * (colmax / rowmax)) {
        // 1x1 pivot at k
      } else if (std::abs(a(r, r)) >= alpha * rowmax) {
        swap_sym(k, r);
      } else {
        swap_sym(k + 1, r);
        two = true;
      }
    }
    if (!two) {
      const double d = real_of(a(k, k));
      if (std::abs(d) <= singular_tol) throw ShiftSingular("shift collides with an eigenvalue");
      if (d < 0) ++negatives;
      for (std::size_t i = k + 1; i < n; ++i) {
        const T f = a(i, k) / d;
        if (f == T(0)) continue;
        for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      }
      k += 1;
    } else {
      const T e00 = a(k, k), e01 = a(k, k + 1), e10 = a(k + 1, k), e11 = a(k + 1, k + 1);
      const double det = real_of(e00 * e11 - e01 * e10);
      if (std::abs(det) <= singular_tol * singular_tol) throw ShiftSingular("shift collides with an eigenvalue");
      // Hermitian 2x2 block: det < 0 gives one negative eigenvalue; det > 0
      // gives two of the trace's sign.
      if (det < 0) {
        negatives += 1;
      } else if (real_of(e00 + e11) < 0) {
        negatives += 2;
      }
      const T i00 = e11 / det, i01 = -e01 / det, i10 = -e10 / det, i11 = e00 / det;
      for (std::size_t i = k + 2; i < n; ++i) {
        const T w0 = a(i, k) * i00 + a(i, k + 1) * i10;
        const T w1 = a(i, k) * i01 + a(i, k + 1) * i11;
        for (std::size_t j = k + 2; j < n; ++j) a(i, j) -= w0 * a(k, j) + w1 * a(k + 1, j);
      }
      k += 2;
    }
  }
  return negatives;
}

template <class T>
std::size_t count_below_impl(const Matrix<T>& m, double lambda) {
  if (!(lambda > 0)) throw InvalidArgument("count_below needs lambda > 0");
  check_hermitian(m, 1e-10);
  const double t = lambda * lambda;
  Matrix<T> a = m;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= t;
  const double scale = std::max({1.0, frob(m), t});
  // eigenvalues <= t are the negative eigenvalues of m - t (zero ones raise).
  return negative_inertia(std::move(a), 1e-12 * scale);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(const RealMatrix& m, const JacobiOptions& opt) { return jacobi(m, opt); }
std::vector<double> jacobi_eigenvalues(const ComplexMatrix& m, const JacobiOptions& opt) { return jacobi(m, opt); }

std::size_t count_below(const RealMatrix& m, double lambda) { return count_below_impl(m, lambda); }
std::size_t count_below(const ComplexMatrix& m, double lambda) { return count_below_impl(m, lambda); }

HalfLaplacianSpectrum spectrum_from_values(std::vector<double> values, double zero_tol) {
  std::sort(values.begin(), values.end());
  HalfLaplacianSpectrum s;
  s.zero_tol = zero_tol;
  for (auto& v : values)
    if (std::abs(v) <= zero_tol) {
      v = 0.0;
      ++s.zero_count;
    }
  std::sort(values.begin(), values.end());
  s.eigenvalues = std::move(values);
  return s;
}

namespace {
double default_tol(const std::vector<double>& ev) {
  double m = 1.0;
  for (double v : ev) m = std::max(m, std::abs(v));
  return 1e-9 * m;
}
}  // namespace

HalfLaplacianSpectrum eigenvalues_sym(const RealMatrix& m, std::optional<double> zero_tol) {
  auto ev = jacobi_eigenvalues(m);
  const double tol = zero_tol ? *zero_tol : default_tol(ev);
  return spectrum_from_values(std::move(ev), tol);
}

HalfLaplacianSpectrum eigenvalues_sym(const ComplexMatrix& m, std::optional<double> zero_tol) {
  auto ev = jacobi_eigenvalues(m);
  const double tol = zero_tol ? *zero_tol : default_tol(ev);
  return spectrum_from_values(std::move(ev), tol);
}

void apply_exact_nullity(HalfLaplacianSpectrum& s, std::size_t exact) {
  if (exact > s.eigenvalues.size()) throw InvalidArgument("exact nullity exceeds the matrix size");
  s.nullity_overridden = exact != s.zero_count;
  // Eigenvalues are ascending, so the exact kernel is the smallest block.
  for (std::size_t i = 0; i < exact; ++i) s.eigenvalues[i] = 0.0;
  for (std::size_t i = exact; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues[i] <= 0.0) s.eigenvalues[i] = s.zero_tol > 0 ? s.zero_tol : std::numeric_limits<double>::min();
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  s.zero_count = exact;
}

std::size_t HalfLaplacianSpectrum::count_le(double t) const {
  return static_cast<std::size_t>(std::upper_bound(eigenvalues.begin(), eigenvalues.end(), t) - eigenvalues.begin());
}

std::size_t HalfLaplacianSpectrum::count_positive_below(double t) const {
  std::size_t n = 0;
  for (double v : eigenvalues)
    if (v > 0.0 && v < t) ++n;
  return n;
}

std::size_t HalfLaplacianSpectrum::count_positive_le(double t) const {
  std::size_t n = 0;
  for (double v : eigenvalues)
    if (v > 0.0 && v <= t) ++n;
  return n;
}

double HalfLaplacianSpectrum::smallest_positive() const {
  for (double v : eigenvalues)
    if (v > 0.0) return v;
  return std::numeric_limits<double>::infinity();
}

double HalfLaplacianSpectrum::largest() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }

SpectralDensity::SpectralDensity(const HalfLaplacianSpectrum& s, double mu, std::string label)
    : ev_(s.eigenvalues), mu_(mu), label_(std::move(label)) {
  if (!(mu > 0)) throw InvalidArgument("growth rate must be positive");
  std::sort(ev_.begin(), ev_.end());
}

double SpectralDensity::at_threshold(double t) const {
  return mu_ * static_cast<double>(std::upper_bound(ev_.begin(), ev_.end(), t) - ev_.begin());
}

std::vector<std::pair<double, double>> SpectralDensity::breakpoints() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < ev_.size(); ++i) {
    if (i + 1 < ev_.size() && ev_[i + 1] == ev_[i]) continue;
    out.emplace_back(std::sqrt(std::max(0.0, ev_[i])), mu_ * static_cast<double>(i + 1));
  }
  return out;
}

std::vector<SpectralDensity> density(const std::vector<HalfLaplacianSpectrum>& spectra, const std::vector<double>& mu) {
  if (spectra.size() != mu.size()) throw InvalidArgument("one growth rate per level is required");
  std::vector<SpectralDensity> out;
  for (std::size_t k = 0; k < spectra.size(); ++k)
    out.emplace_back(spectra[k], mu[k], "level " + std::to_string(k));
  return out;
}

double log_det_prime(const HalfLaplacianSpectrum& s) {
  double sum = 0.0;
  for (double v : s.eigenvalues)
    if (v > 0.0) sum += std::log(v);
  return sum;
}

FlatSectionComplex flat_section_complex(const GroupComplex& base, const FiniteRep<Complex>& rep) {
  if (!rep.unitary) throw HypothesisFailed("flat sections need a unitary representation");
  FlatSectionComplex out;
  const RingConfig cfg = base.ring_config();
  for (const auto& d : base.boundaries) {
    ComplexMatrix sd = specialize(d, rep);
    ComplexMatrix lap = gram(sd);
    const ComplexMatrix symbolic = specialize(half_laplacian(d, cfg), rep);
    double diff = 0.0;
    for (std::size_t i = 0; i < lap.data().size(); ++i) diff = std::max(diff, std::abs(lap.data()[i] - symbolic.data()[i]));
    out.max_discrepancy = std::max(out.max_discrepancy, diff);
    out.boundaries.push_back(std::move(sd));
    out.laplacians.push_back(std::move(lap));
  }
  if (out.max_discrepancy > 1e-9) throw TheoremViolation("flat-section Laplacian differs from the specialised d d*");
  return out;
}

}  // namespace l2approx
