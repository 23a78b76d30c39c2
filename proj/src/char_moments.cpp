#include "l2approx/char_moments.hpp"

#include <algorithm>
#include <cmath>

namespace l2approx {

Character::Character(std::string label, ClassFunction eval, double degree)
    : label_(std::move(label)), eval_(std::move(eval)), degree_(degree) {
  if (!(degree_ > 0)) throw InvalidArgument("character degree chi(1) must be positive");
}

Character Character::delta(const Presentation& p) {
  if (p.kind() == GroupKind::general)
    throw InvalidArgument("the identity test needs a free or free-abelian group");
  return Character("delta", [p](const Word& w) { return Complex(p.normalize(w).is_identity() ? 1.0 : 0.0); }, 1.0);
}

Character Character::trivial() {
  return Character("trivial", [](const Word&) { return Complex(1.0); }, 1.0);
}

Character Character::level(const CosetTable& t) {
  auto shared = std::make_shared<const CosetTable>(t);
  Character c("level[" + std::to_string(t.index()) + "]",
              [shared](const Word& w) { return Complex(permutation_character(*shared, w).get_d() * shared->index()); },
              static_cast<double>(t.index()));
  c.table_ = shared;
  return c;
}

Character Character::of_rep(const FiniteRep<Complex>& rep, std::string label) {
  auto shared = std::make_shared<const FiniteRep<Complex>>(rep);
  Character c(std::move(label),
              [shared](const Word& w) {
                const ComplexMatrix m = shared->evaluate(w);
                Complex tr = 0.0;
                for (std::size_t i = 0; i < m.rows(); ++i) tr += m(i, i);
                return tr;
              },
              static_cast<double>(rep.dimension));
  c.rep_ = shared;
  return c;
}

Character Character::table(const Presentation& p, std::map<Word, Complex> values, std::string label) {
  std::map<Word, Complex> normalized;
  for (const auto& [w, v] : values) normalized[p.normalize(w)] = v;
  auto it = normalized.find(Word{});
  if (it == normalized.end() || it->second.real() <= 0 || std::abs(it->second.imag()) > 1e-12)
    throw InvalidArgument("character table must give a positive real value at the identity");
  const double deg = it->second.real();
  auto shared = std::make_shared<const std::map<Word, Complex>>(std::move(normalized));
  return Character(std::move(label),
                   [shared, p](const Word& w) {
                     const Word n = p.normalize(w);
                     auto f = shared->find(n);
                     if (f == shared->end()) f = shared->find(p.normalize(n.cyclically_reduced()));
                     if (f == shared->end())
                       throw InvalidArgument("character table has no value for '" + format_word(n, p.generators) + "'");
                     return f->second;
                   },
                   deg);
}

Complex Character::operator()(const Word& w) const {
  if (!eval_) throw InvalidArgument("empty character");
  queried_->insert(w);
  return static_cast<double>(copies_) * eval_(w);
}

Character Character::multiple(std::size_t copies) const {
  if (copies == 0) throw InvalidArgument("multiple needs at least one copy");
  Character c = *this;
  c.copies_ = copies_ * copies;
  c.label_ = std::to_string(copies) + "x" + label_;
  c.queried_ = std::make_shared<std::set<Word>>();
  return c;
}

ComplexMatrix Character::specialize_model(const IntMatrix& m) const {
  if (table_) return to_complex(specialize(m, *table_, Rational(0)));
  if (rep_) return specialize(m, *rep_);
  throw InvalidArgument("character '" + label_ + "' has no finite model");
}

double self_adjointness_defect(const Character& chi, const std::vector<Word>& samples) {
  double worst = 0.0;
  for (const auto& w : samples) worst = std::max(worst, std::abs(chi(w.inverse()) - std::conj(chi(w))));
  return worst;
}

double positivity_minimum(const Character& chi, std::size_t generators, std::size_t trials, std::size_t max_support,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  double worst = INFINITY;
  for (std::size_t t = 0; t < trials; ++t) {
    std::map<Word, Complex> a;
    const std::size_t support = 1 + rng() % max_support;
    while (a.size() < support) {
      std::vector<Letter> letters(rng() % 4);
      for (auto& l : letters) l = letter(rng() % generators, rng() % 2 ? 1 : -1);
      a[Word(letters)] = Complex(nd(rng), nd(rng));
    }
    Complex value = 0.0;
    double norm = 0.0;
    for (const auto& [g, ag] : a) {
      norm += std::norm(ag);
      for (const auto& [h, ah] : a) value += std::conj(ag) * ah * chi(g.inverse() * h);
    }
    worst = std::min(worst, value.real() / norm);
  }
  return worst;
}

MomentSequence MomentSequence::scaled(double factor) const {
  MomentSequence r = *this;
  for (auto& m : r.power) m *= factor;
  for (auto& m : r.chebyshev) m *= factor;
  r.degree *= factor;
  return r;
}

namespace {

using RatMatrix = GroupRingMatrix<Rational>;

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (const auto& [idx, e] : m.entries()) {
    GroupRingElement<Rational> q;
    for (const auto& [w, c] : e.terms()) q.add_term(w, Rational(c));
    r.set(idx.first, idx.second, q);
  }
  return r;
}

template <class C>
RatMatrix combine(const GroupRingMatrix<C>& a, const Rational& sa, const GroupRingMatrix<C>& b, const Rational& sb) {
  RatMatrix r(a.rows(), a.cols());
  for (const auto& [idx, e] : a.entries()) r.add(idx.first, idx.second, e.scaled(sa));
  for (const auto& [idx, e] : b.entries()) r.add(idx.first, idx.second, e.scaled(sb));
  return r;
}

template <class C>
Complex character_trace(const GroupRingMatrix<C>& m, const Character& chi) {
  Complex tr = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto it = m.entries().find({i, i});
    if (it == m.entries().end()) continue;
    for (const auto& [w, c] : it->second.terms()) tr += scalar_traits<C>::to_complex(c) * chi(w);
  }
  return tr;
}

Complex matrix_trace(const ComplexMatrix& m) {
  Complex tr = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) tr += m(i, i);
  return tr;
}

double bound_for(const IntMatrix& a) {
  const double n = n_bound(a);
  return n > 0 ? n : 1.0;
}

void record(MomentSequence& ms, std::vector<double>& target, Complex v) {
  ms.max_imaginary = std::max(ms.max_imaginary, std::abs(v.imag()));
  target.push_back(v.real());
}

}  // namespace

MomentSequence moments(const IntMatrix& a, const Character& chi, std::size_t M, const RingConfig& cfg,
                       const MomentOptions& opt) {
  if (a.rows() != a.cols()) throw InvalidArgument("moments need a square matrix");
  MomentSequence ms;
  ms.n_bound = bound_for(a);
  ms.matrix_size = a.rows();
  ms.degree = chi.degree();
  ms.route = "symbolic";
  RingConfig c = cfg;
  c.support_cap = std::min(c.support_cap, opt.support_cap);
  chi.reset_queries();
  try {
    const std::size_t n = a.rows();
    IntMatrix power = identity_matrix(n, Integer(1));
    const RatMatrix id = identity_matrix(n, Rational(1));
    Rational N(Integer(static_cast<long>(std::llround(ms.n_bound))));
    const RatMatrix b = combine(to_rational(a), Rational(2) / N, id, Rational(-1));
    RatMatrix prev = id, cur = b;
    for (std::size_t r = 0; r <= M; ++r) {
      const Complex m = character_trace(power, chi);
      ms.max_imaginary = std::max(ms.max_imaginary, std::abs(m.imag()));
      ms.power.push_back(m);
      if (r == 0) {
        record(ms, ms.chebyshev, character_trace(prev, chi));
      } else {
        record(ms, ms.chebyshev, character_trace(cur, chi));
        if (r < M) {
          RatMatrix next = combine(multiply(b, cur, c), Rational(2), prev, Rational(-1));
          prev = std::move(cur);
          cur = std::move(next);
          if (total_support(cur) > c.support_cap)
            throw SupportOverflow("Chebyshev power support exceeds cap " + std::to_string(c.support_cap));
        }
      }
      if (r < M) {
        power = multiply(power, a, c);
        if (total_support(power) > c.support_cap)
          throw SupportOverflow("matrix power support exceeds cap " + std::to_string(c.support_cap));
      }
    }
    ms.queried = chi.queried();
    return ms;
  } catch (SupportOverflow&) {
    if (!opt.allow_finite_fallback || !chi.has_finite_model()) throw;
    return moments_finite(a, chi, M);
  }
}

MomentSequence moments_finite(const IntMatrix& a, const Character& chi, std::size_t M) {
  if (a.rows() != a.cols()) throw InvalidArgument("moments need a square matrix");
  MomentSequence ms;
  ms.n_bound = bound_for(a);
  ms.matrix_size = a.rows();
  ms.degree = chi.degree();
  ms.route = "finite-model";
  const ComplexMatrix s = chi.specialize_model(a);
  const double copies = static_cast<double>(chi.copies());
  const std::size_t n = s.rows();
  ComplexMatrix power = ComplexMatrix::identity(n, Complex(0.0));
  ComplexMatrix b = s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = 2.0 * s(i, j) / ms.n_bound - (i == j ? 1.0 : 0.0);
  ComplexMatrix prev = ComplexMatrix::identity(n, Complex(0.0)), cur = b;
  for (std::size_t r = 0; r <= M; ++r) {
    const Complex m = copies * matrix_trace(power);
    ms.max_imaginary = std::max(ms.max_imaginary, std::abs(m.imag()));
    ms.power.push_back(m);
    if (r == 0) {
      record(ms, ms.chebyshev, copies * matrix_trace(prev));
    } else {
      record(ms, ms.chebyshev, copies * matrix_trace(cur));
      if (r < M) {
        ComplexMatrix next = multiply(b, cur);
        for (std::size_t i = 0; i < next.data().size(); ++i) next.data()[i] = 2.0 * next.data()[i] - prev.data()[i];
        prev = std::move(cur);
        cur = std::move(next);
      }
    }
    if (r < M) power = multiply(power, s);
  }
  return ms;
}

std::vector<double> jackson_coefficients(std::size_t M) {
  std::vector<double> g(M + 1);
  const double q = M_PI / static_cast<double>(M + 2);
  for (std::size_t k = 0; k <= M; ++k) {
    const double kk = static_cast<double>(k);
    g[k] = ((static_cast<double>(M) - kk + 2) * std::cos(q * kk) + std::sin(q * kk) / std::tan(q)) /
           static_cast<double>(M + 2);
  }
  return g;
}

double DensityBracket::max_width() const {
  double w = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) w = std::max(w, upper[i] - lower[i]);
  return w;
}

namespace {

// Damped cosine series of the indicator of theta in [theta_s, pi], i.e. of
// y = cos(theta) <= cos(theta_s).
struct SmoothedIndicator {
  std::vector<double> coef;  // g_k a_k, coef[0] = a_0
  double second_derivative_bound = 0.0;

  SmoothedIndicator(double theta_s, const std::vector<double>& g) : coef(g.size()) {
    coef[0] = (M_PI - theta_s) / M_PI;
    for (std::size_t k = 1; k < g.size(); ++k) {
      const double kk = static_cast<double>(k);
      coef[k] = -g[k] * 2.0 * std::sin(kk * theta_s) / (kk * M_PI);
      second_derivative_bound += kk * kk * std::abs(coef[k]);
    }
  }

  double at(double theta) const {
    // Chebyshev recurrence on cos(k theta).
    double c_prev = 1.0, c_cur = std::cos(theta), two_c = 2.0 * c_cur;
    double v = coef[0];
    for (std::size_t k = 1; k < coef.size(); ++k) {
      v += coef[k] * c_cur;
      const double next = two_c * c_cur - c_prev;
      c_prev = c_cur;
      c_cur = next;
    }
    return v;
  }

  double integrate(const std::vector<double>& mu) const {
    double s = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * mu[k];
    return s;
  }

  // Upper bound for sup of sign * h over theta in [lo, hi].
  double sup(double lo, double hi, double sign) const {
    if (hi <= lo) return sign * at(lo);
    const std::size_t samples = 48 * coef.size() + 16;
    const double step = (hi - lo) / static_cast<double>(samples);
    double best = -INFINITY;
    for (std::size_t i = 0; i <= samples; ++i) best = std::max(best, sign * at(lo + step * static_cast<double>(i)));
    return best + step * step / 8.0 * second_derivative_bound;
  }
};

}  // namespace

DensityBracket density_from_moments(const MomentSequence& ms, const std::vector<double>& lambdas,
                                    std::optional<double> normalization) {
  DensityBracket out;
  out.normalization = normalization.value_or(1.0 / ms.degree);
  out.degree = ms.chebyshev.empty() ? 0 : ms.chebyshev.size() - 1;
  const auto g = jackson_coefficients(out.degree);
  const double mass = ms.chebyshev.empty() ? 0.0 : ms.chebyshev[0];
  const double N = ms.n_bound;
  const double shift_unit = M_PI / static_cast<double>(out.degree + 2);
  static constexpr double kShifts[] = {0.5, 1, 1.5, 2, 3, 4, 6, 8, 12, 16};
  for (double lambda : lambdas) {
    const double t = lambda * lambda;
    out.lambda.push_back(lambda);
    if (t >= N) {
      out.lower.push_back(mass * out.normalization);
      out.estimate.push_back(mass * out.normalization);
      out.upper.push_back(mass * out.normalization);
      continue;
    }
    const double theta_t = std::acos(std::clamp(2.0 * t / N - 1.0, -1.0, 1.0));
    out.estimate.push_back(SmoothedIndicator(theta_t, g).integrate(ms.chebyshev) * out.normalization);
    double upper = mass, lower = 0.0;
    for (double c : kShifts) {
      // Upper: move the edge towards larger eigenvalues (smaller theta).
      const double up_theta = theta_t - c * shift_unit;
      if (up_theta > 0) {
        const SmoothedIndicator h(up_theta, g);
        const double deficit = std::max({0.0, 1.0 - (-h.sup(theta_t, M_PI, -1.0)), h.sup(0.0, theta_t, -1.0)});
        upper = std::min(upper, h.integrate(ms.chebyshev) + deficit * mass);
      }
      const double lo_theta = theta_t + c * shift_unit;
      if (lo_theta < M_PI) {
        const SmoothedIndicator h(lo_theta, g);
        const double excess = std::max({0.0, h.sup(0.0, theta_t, 1.0), h.sup(theta_t, M_PI, 1.0) - 1.0});
        lower = std::max(lower, h.integrate(ms.chebyshev) - excess * mass);
      }
    }
    lower = std::clamp(lower, 0.0, mass);
    upper = std::clamp(upper, lower, mass);
    out.lower.push_back(lower * out.normalization);
    out.upper.push_back(upper * out.normalization);
  }
  return out;
}

RouteComparison compare_routes(const IntMatrix& a, const Character& level_chi, const std::vector<double>& lambdas,
                               std::size_t M, const RingConfig& cfg) {
  RouteComparison rc;
  const MomentSequence ms = moments(a, level_chi, M, cfg);
  rc.bracket = density_from_moments(ms, lambdas);
  const ComplexMatrix s = level_chi.specialize_model(a);
  const auto spec = eigenvalues_sym(s);
  const double weight = static_cast<double>(level_chi.copies()) / level_chi.degree();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double f = weight * static_cast<double>(spec.count_le(lambdas[i] * lambdas[i]));
    rc.direct.push_back(f);
    const bool in = rc.bracket.lower[i] - rc.tolerance <= f && f <= rc.bracket.upper[i] + rc.tolerance;
    rc.contained.push_back(in);
    rc.pass = rc.pass && in;
  }
  return rc;
}

}  // namespace l2approx
