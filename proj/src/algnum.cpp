#include "l2approx/algnum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace l2approx {

namespace {

using LComplex = std::complex<long double>;

LComplex eval_int(const IntPoly& f, LComplex z) {
  LComplex r = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) r = r * z + static_cast<long double>(it->get_d());
  return r;
}

LComplex eval_int_derivative(const IntPoly& f, LComplex z) {
  LComplex r = 0;
  for (std::size_t k = f.size() - 1; k >= 1; --k) {
    r = r * z + static_cast<long double>(f[k].get_d()) * static_cast<long double>(k);
    if (k == 1) break;
  }
  return r;
}

LComplex eval_rat(const RatPoly& p, LComplex z) {
  LComplex r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * z + static_cast<long double>(it->get_d());
  return r;
}

LComplex eval_rat_derivative(const RatPoly& p, LComplex z) {
  LComplex r = 0;
  for (std::size_t k = p.size(); k-- > 1;) r = r * z + static_cast<long double>(p[k].get_d()) * static_cast<long double>(k);
  return r;
}

void trim(RatPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

// Remainder of a by b over Q.
RatPoly rat_mod(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    trim(a);
  }
  return a;
}

RatPoly rat_mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

RatPoly to_rat(const IntPoly& f) {
  RatPoly r;
  for (const auto& c : f) r.emplace_back(c);
  trim(r);
  return r;
}

std::vector<Integer> positive_divisors(Integer n) {
  n = abs(n);
  std::vector<Integer> d;
  for (Integer k = 1; k * k <= n; ++k) {
    if (n % k == 0) {
      d.push_back(k);
      if (k * k != n) d.push_back(n / k);
    }
    if (k > 100000) break;  // leading coefficients in scope are tiny
  }
  return d;
}

}  // namespace

IntPoly primitive_part(IntPoly f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
  if (f.empty()) throw InvalidArgument("zero polynomial");
  Integer g = 0;
  for (const auto& c : f) g = gcd(g, c);
  for (auto& c : f) c /= g;
  if (sgn(f.back()) < 0)
    for (auto& c : f) c = -c;
  return f;
}

namespace {

struct PolishedRoot {
  LComplex z;
  long double radius;
};

std::vector<PolishedRoot> polished_roots(const IntPoly& f_in, std::size_t cap) {
  const IntPoly f = primitive_part(f_in);
  const std::size_t n = f.size() - 1;
  if (n > cap) throw DegreeCap("degree " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (n == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
  const double lead = f[n].get_d();
  for (std::size_t i = 1; i < n; ++i) comp(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) comp(static_cast<long>(i), static_cast<long>(n - 1)) = -f[i].get_d() / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<PolishedRoot> out;
  for (long i = 0; i < static_cast<long>(n); ++i) {
    LComplex z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    for (int it = 0; it < 60; ++it) {
      const LComplex d = eval_int_derivative(f, z);
      if (std::abs(d) == 0) break;
      const LComplex step = eval_int(f, z) / d;
      z -= step;
      if (std::abs(step) <= 1e-19L * std::max<long double>(1, std::abs(z))) break;
    }
    const LComplex d = eval_int_derivative(f, z);
    const long double rad = std::abs(d) == 0 ? 1e-6L : static_cast<long double>(n) * std::abs(eval_int(f, z) / d);
    // Floor the radius at the long-double resolution of |z|.
    out.push_back({z, std::max(rad, 1e-18L * std::max<long double>(1, std::abs(z)))});
  }
  std::sort(out.begin(), out.end(), [](const PolishedRoot& a, const PolishedRoot& b) {
    const long double ar = std::round(a.z.real() * 1e9L), br = std::round(b.z.real() * 1e9L);
    if (ar != br) return ar < br;
    return a.z.imag() < b.z.imag();
  });
  return out;
}

}  // namespace

std::vector<CertifiedRoot> poly_roots(const IntPoly& f, std::size_t cap) {
  std::vector<CertifiedRoot> out;
  for (const auto& r : polished_roots(f, cap)) {
    const Complex v(static_cast<double>(r.z.real()), static_cast<double>(r.z.imag()));
    // Rounding to double moves the centre by up to one ulp.
    const double ulp = 2.3e-16 * std::max(1.0, std::abs(v));
    out.push_back({v, static_cast<double>(r.radius) + ulp});
  }
  return out;
}

bool is_irreducible(const IntPoly& f_in, std::size_t cap) {
  const IntPoly f = primitive_part(f_in);
  const std::size_t n = f.size() - 1;
  if (n <= 1) return n == 1;
  const auto roots = poly_roots(f, cap);
  const RatPoly fq = to_rat(f);
  const auto divisors = positive_divisors(f[n]);
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(__builtin_popcount(mask));
    if (2 * k > n) continue;
    std::vector<LComplex> m{1};
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      std::vector<LComplex> next(m.size() + 1, 0);
      const LComplex r(roots[i].value.real(), roots[i].value.imag());
      for (std::size_t j = 0; j < m.size(); ++j) {
        next[j + 1] += m[j];
        next[j] -= r * m[j];
      }
      m = std::move(next);
    }
    bool real = true;
    for (const auto& c : m)
      if (std::abs(c.imag()) > 1e-6L * std::max<long double>(1, std::abs(c))) real = false;
    if (!real) continue;
    for (const auto& d : divisors) {
      const long double scale = static_cast<long double>(d.get_d());
      RatPoly g;
      bool integral = true;
      for (const auto& c : m) {
        const long double v = c.real() * scale;
        const long double rv = std::round(v);
        if (std::abs(v - rv) > 1e-6L * std::max<long double>(1, std::abs(v))) {
          integral = false;
          break;
        }
        g.emplace_back(Integer(std::to_string(static_cast<long long>(rv))));
      }
      if (!integral) continue;
      trim(g);
      if (g.size() < 2) continue;
      if (rat_mod(fq, g).empty()) return false;
    }
  }
  return true;
}

AlgebraicNumber::AlgebraicNumber(IntPoly minpoly, Complex hint, bool declared_irreducible, std::size_t cap)
    : f_(primitive_part(std::move(minpoly))) {
  if (f_.size() < 2) throw InvalidArgument("minimal polynomial must have degree >= 1");
  if (f_.size() - 1 > cap) throw DegreeCap("degree " + std::to_string(f_.size() - 1) + " exceeds cap");
  if (!declared_irreducible && !is_irreducible(f_, cap))
    throw InvalidArgument("polynomial is reducible over Q");
  polished_.clear();
  roots_.clear();
  for (const auto& r : polished_roots(f_, cap)) {
    polished_.push_back(r.z);
    roots_.push_back({Complex(static_cast<double>(r.z.real()), static_cast<double>(r.z.imag())),
                      static_cast<double>(r.radius)});
  }
  double best = INFINITY;
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const double d = std::abs(roots_[i].value - hint);
    if (d < best) {
      best = d;
      index_ = i;
    }
  }
  expr_ = {Rational(0), Rational(1)};
  if (f_.size() == 2) {
    // theta is rational; keep the expression canonical as a constant.
    Rational v(-f_[0], f_[1]);
    v.canonicalize();
    expr_ = {v};
  }
}

AlgebraicNumber AlgebraicNumber::rational_integer(long v) { return AlgebraicNumber({Integer(-v), Integer(1)}, Complex(v)); }

Complex AlgebraicNumber::value() const { return conjugates()[index_].value; }
double AlgebraicNumber::radius() const { return conjugates()[index_].radius; }

AlgebraicNumber AlgebraicNumber::with_expression(RatPoly p) const {
  AlgebraicNumber r = *this;
  r.expr_ = rat_mod(std::move(p), to_rat(f_));
  if (r.expr_.empty()) r.expr_ = {Rational(0)};
  return r;
}

AlgebraicNumber AlgebraicNumber::power(long n) const {
  if (n < 0) throw InvalidArgument("negative powers are not supported");
  const RatPoly fq = to_rat(f_);
  RatPoly result{Rational(1)}, base = expr_;
  long e = n;
  while (e > 0) {
    if (e & 1) result = rat_mod(rat_mul(result, base), fq);
    base = rat_mod(rat_mul(base, base), fq);
    e >>= 1;
  }
  return with_expression(result);
}

std::vector<CertifiedRoot> AlgebraicNumber::conjugates() const {
  std::vector<CertifiedRoot> out;
  for (std::size_t j = 0; j < roots_.size(); ++j) {
    const auto& r = roots_[j];
    const LComplex z = polished_[j];
    const LComplex v = eval_rat(expr_, z);
    const long double deriv = std::abs(eval_rat_derivative(expr_, z));
    // First-order propagation plus a rounding allowance per coefficient.
    long double scale = 0;
    for (const auto& c : expr_) scale += std::abs(static_cast<long double>(c.get_d()));
    scale *= std::max<long double>(1, std::pow(std::abs(z), static_cast<long double>(expr_.size())));
    const long double rad = deriv * r.radius * 1.01L + 4e-19L * scale * static_cast<long double>(expr_.size()) +
                            2.3e-16L * std::abs(v);
    out.push_back({Complex(static_cast<double>(v.real()), static_cast<double>(v.imag())), static_cast<double>(rad)});
  }
  return out;
}

bool AlgebraicNumber::is_algebraic_integer() const {
  if (f_.back() != 1) return false;
  for (const auto& c : expr_)
    if (c.get_den() != 1) return false;
  return true;
}

std::vector<CertifiedRoot> conjugates(const AlgebraicNumber& a) { return a.conjugates(); }

LemmaAReport lemma_a_check(const AlgebraicNumber& a, double R, double tol) {
  const auto conj = a.conjugates();
  LemmaAReport rep;
  rep.h = conj.size();
  rep.min_modulus = INFINITY;
  std::complex<long double> norm = 1;
  for (const auto& c : conj) {
    const double m = std::abs(c.value);
    rep.min_modulus = std::min(rep.min_modulus, m);
    rep.max_modulus = std::max(rep.max_modulus, m);
    norm *= std::complex<long double>(c.value.real(), c.value.imag());
  }
  if (rep.max_modulus > R + tol)
    throw HypothesisFailed("a conjugate has modulus " + std::to_string(rep.max_modulus) + " > R");
  if (rep.min_modulus == 0.0) throw HypothesisFailed("the number is zero");
  rep.bound = std::pow(R, 1.0 - static_cast<double>(rep.h));
  rep.norm = Complex(static_cast<double>(norm.real()), static_cast<double>(norm.imag()));
  const double nearest = std::round(rep.norm.real());
  rep.norm_distance = std::abs(rep.norm - Complex(nearest, 0.0));
  rep.norm_integral = rep.norm_distance <= tol && nearest != 0.0;
  rep.pass = rep.min_modulus >= rep.bound - tol && rep.norm_integral;
  return rep;
}

std::optional<unsigned> cyclotomic_index(const IntPoly& f_in) {
  const IntPoly f = primitive_part(f_in);
  const std::size_t deg = f.size() - 1;
  // phi(n) >= sqrt(n / 2), so n <= 2 deg^2 covers every candidate.
  for (unsigned n = 1; n <= std::max<std::size_t>(2, 2 * deg * deg); ++n) {
    if (cyclotomic_polynomial(n) == f) return n;
  }
  return std::nullopt;
}

UnitCircleReport unit_circle_but_not_root_of_unity(const AlgebraicNumber& a, double tol) {
  const auto conj = a.conjugates();
  if (std::abs(std::abs(a.value()) - 1.0) > tol) throw InvalidArgument("number is not on the unit circle");
  UnitCircleReport rep;
  // The smallest off-circle conjugate is the one that blows up under powers
  // of the inverse, so it is the more useful witness.
  for (const auto& c : conj) {
    const double dev = std::abs(std::abs(c.value) - 1.0);
    if (dev > tol && (!rep.evidence || std::abs(c.value) < std::abs(*rep.evidence))) rep.evidence = c.value;
  }
  if (rep.evidence) {
    rep.result = true;
    rep.reason = "a conjugate lies off the unit circle, so not every conjugate is a root of unity";
    return rep;
  }
  // Every conjugate on the circle. When this number is theta itself the
  // minimal polynomial decides; otherwise fall back to Kronecker's theorem.
  const bool is_theta = a.expression().size() == 2 && a.expression()[0] == 0 && a.expression()[1] == 1;
  if (is_theta) {
    rep.result = !cyclotomic_index(a.minpoly()).has_value();
    rep.reason = rep.result ? "minimal polynomial is not cyclotomic" : "minimal polynomial is cyclotomic";
    return rep;
  }
  if (a.is_algebraic_integer()) {
    rep.result = false;
    rep.reason = "algebraic integer with every conjugate on the unit circle (Kronecker)";
    return rep;
  }
  throw Inconclusive("all conjugates lie on the unit circle but no cyclotomic test applies");
}

bool ArithmeticProfile::submultiplicative(
    const std::function<std::string(const std::string&, const std::string&)>& product) const {
  for (const auto& [g, ng] : N)
    for (const auto& [h, nh] : N) {
      auto it = N.find(product(g, h));
      if (it != N.end() && it->second > ng * nh + 1e-12) return false;
    }
  return true;
}

ConditionFReport condition_f_check(const ArithmeticProfile& profile,
                                   const std::map<std::string, std::vector<AlgebraicNumber>>& values) {
  ConditionFReport rep;
  for (const auto& [g, seq] : values) {
    auto it = profile.N.find(g);
    if (it == profile.N.end()) throw ProfileMissing("no N(g) entry for '" + g + "'");
    for (std::size_t k = 0; k < seq.size(); ++k) {
      ConditionFEntry e;
      e.g = g;
      e.level = k;
      e.bound = it->second;
      const auto conj = seq[k].conjugates();
      const double base = std::abs(seq[k].value());
      for (std::size_t j = 0; j < conj.size(); ++j) {
        const double m = std::abs(conj[j].value);
        if (std::abs(m - base) > 1e-9 * std::max(1.0, base)) rep.galois_unitary = false;
        if (m > e.max_modulus || j == 0) {
          e.max_modulus = m;
          e.worst_embedding = j;
          e.worst_value = conj[j].value;
        }
      }
      e.pass = e.max_modulus <= e.bound + 1e-9;
      rep.pass = rep.pass && e.pass;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

namespace {
const IntPoly kQuartic{1, -1, -1, -1, 1};
}

AlgebraicNumber quartic_unit(bool upper_half) {
  const double alpha = 130.6463 * M_PI / 180.0;
  return AlgebraicNumber(kQuartic, std::polar(1.0, upper_half ? alpha : -alpha));
}

AlgebraicNumber quartic_real_root_small() { return AlgebraicNumber(kQuartic, Complex(0.58, 0.0)); }

QuarticFactorCheck quartic_factorization() {
  // Elements a + b sqrt(13) as pairs.
  using Q13 = std::pair<Rational, Rational>;
  auto mul = [](const Q13& x, const Q13& y) {
    return Q13{x.first * y.first + 13 * x.second * y.second, x.first * y.second + x.second * y.first};
  };
  auto add = [](const Q13& x, const Q13& y) { return Q13{x.first + y.first, x.second + y.second}; };
  const Rational half(1, 2);
  const std::vector<Q13> p1{{1, 0}, {-half, -half}, {1, 0}};  // 1 - ((1+s)/2) z + z^2
  const std::vector<Q13> p2{{1, 0}, {-half, half}, {1, 0}};
  std::vector<Q13> prod(5, Q13{0, 0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) prod[i + j] = add(prod[i + j], mul(p1[i], p2[j]));
  QuarticFactorCheck out;
  out.exact = true;
  for (std::size_t k = 0; k < 5; ++k) {
    out.product_rational.push_back(prod[k].first);
    out.product_sqrt13.push_back(prod[k].second);
    if (prod[k].first != Rational(kQuartic[k]) || prod[k].second != 0) out.exact = false;
  }
  return out;
}

}  // namespace l2approx
