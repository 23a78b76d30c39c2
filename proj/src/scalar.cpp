#include "l2approx/scalar.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

using u128 = unsigned __int128;

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t p) {
  if (p == 0) throw InvalidArgument("F_p element with modulus 0");
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r);
}

void check_same_modulus(std::uint64_t a, std::uint64_t b) {
  if (a != b) throw InvalidArgument("mixed F_p moduli " + std::to_string(a) + " and " + std::to_string(b));
}

// Dense rational polynomial helpers for Q(zeta_n) arithmetic (low degree first).
using QPoly = std::vector<Rational>;

void trim(QPoly& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

// Remainder of a modulo the monic integer polynomial m.
void reduce_mod(QPoly& a, const std::vector<Integer>& m) {
  const std::size_t d = m.size() - 1;
  trim(a);
  while (a.size() > d) {
    const std::size_t shift = a.size() - 1 - d;
    const Rational lead = a.back();
    for (std::size_t i = 0; i <= d; ++i) a[shift + i] -= lead * Rational(m[i]);
    trim(a);
  }
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

// Polynomial division over Q: a = q b + r.
void poly_divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
  while (!r.empty() && r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    const Rational f = r.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    trim(r);
  }
  trim(q);
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

}  // namespace

Fp::Fp(std::int64_t value, std::uint64_t modulus) : v_(reduce_signed(value, modulus)), p_(modulus) {}

Fp& Fp::operator+=(const Fp& o) {
  check_same_modulus(p_, o.p_);
  u128 s = static_cast<u128>(v_) + o.v_;
  v_ = static_cast<std::uint64_t>(s % p_);
  return *this;
}

Fp& Fp::operator-=(const Fp& o) {
  check_same_modulus(p_, o.p_);
  v_ = v_ >= o.v_ ? v_ - o.v_ : static_cast<std::uint64_t>(static_cast<u128>(v_) + p_ - o.v_);
  return *this;
}

Fp& Fp::operator*=(const Fp& o) {
  check_same_modulus(p_, o.p_);
  v_ = static_cast<std::uint64_t>(static_cast<u128>(v_) * o.v_ % p_);
  return *this;
}

Fp Fp::inverse() const {
  if (v_ == 0) throw InvalidArgument("inverse of zero in F_p");
  // Extended Euclid on signed 128-bit values.
  __int128 a = v_, b = p_, x0 = 1, x1 = 0;
  while (b != 0) {
    __int128 q = a / b;
    __int128 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) throw InvalidArgument("modulus " + std::to_string(p_) + " is not prime");
  __int128 r = x0 % static_cast<__int128>(p_);
  if (r < 0) r += p_;
  Fp out;
  out.v_ = static_cast<std::uint64_t>(r);
  out.p_ = p_;
  return out;
}

std::vector<Integer> cyclotomic_polynomial(unsigned n) {
  if (n == 0) throw InvalidArgument("cyclotomic order must be positive");
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed by exact division.
  std::vector<Integer> num(n + 1, Integer(0));
  num[0] = -1;
  num[n] = 1;
  for (unsigned d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const std::vector<Integer> den = cyclotomic_polynomial(d);
    std::vector<Integer> q(num.size() - den.size() + 1, Integer(0));
    std::vector<Integer> r = num;
    for (std::size_t s = q.size(); s-- > 0;) {
      const Integer f = r[s + den.size() - 1];
      q[s] = f;
      for (std::size_t i = 0; i < den.size(); ++i) r[s + i] -= f * den[i];
    }
    num = q;
  }
  return num;
}

std::shared_ptr<const CyclotomicContext> cyclotomic_context(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, std::shared_ptr<const CyclotomicContext>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto ctx = std::make_shared<CyclotomicContext>();
  ctx->order = n;
  ctx->phi = cyclotomic_polynomial(n);
  cache.emplace(n, ctx);
  return ctx;
}

Cyclotomic::Cyclotomic(std::shared_ptr<const CyclotomicContext> ctx) : ctx_(std::move(ctx)) {}

Cyclotomic::Cyclotomic(std::shared_ptr<const CyclotomicContext> ctx, const Rational& scalar)
    : ctx_(std::move(ctx)) {
  if (sgn(scalar) != 0) c_.push_back(scalar);
}

Cyclotomic Cyclotomic::root_of_unity(unsigned n, long k) {
  auto ctx = cyclotomic_context(n);
  long e = k % static_cast<long>(n);
  if (e < 0) e += n;
  QPoly p(static_cast<std::size_t>(e) + 1, Rational(0));
  p[e] = 1;
  reduce_mod(p, ctx->phi);
  Cyclotomic out(ctx);
  out.c_ = std::move(p);
  return out;
}

bool Cyclotomic::is_zero() const { return c_.empty(); }

void Cyclotomic::align(const Cyclotomic& o) {
  if (!ctx_) {
    ctx_ = o.ctx_;
    return;
  }
  if (o.ctx_ && o.ctx_->order != ctx_->order) {
    throw InvalidArgument("mixed cyclotomic orders " + std::to_string(ctx_->order) + " and " +
                          std::to_string(o.ctx_->order));
  }
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  align(o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim(c_);
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  align(o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim(c_);
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  align(o);
  c_ = poly_mul(c_, o.c_);
  if (ctx_) reduce_mod(c_, ctx_->phi);
  return *this;
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw InvalidArgument("inverse of zero in Q(zeta_n)");
  if (!ctx_ || ctx_->degree() == 0 || c_.size() == 1) {
    Cyclotomic r(ctx_, 1 / c_[0]);
    return r;
  }
  // Extended Euclid: find u with u * a = 1 mod Phi_n.
  QPoly r0(ctx_->phi.begin(), ctx_->phi.end());
  QPoly r1 = c_;
  QPoly u0, u1{Rational(1)};
  while (!(r1.size() == 1)) {
    if (r1.empty()) throw InvalidArgument("non-invertible element of Q(zeta_n)");
    QPoly q, r;
    poly_divmod(r0, r1, q, r);
    QPoly u = poly_sub(u0, poly_mul(q, u1));
    r0 = std::move(r1);
    r1 = std::move(r);
    u0 = std::move(u1);
    u1 = std::move(u);
  }
  const Rational inv = 1 / r1[0];
  for (auto& c : u1) c *= inv;
  reduce_mod(u1, ctx_->phi);
  Cyclotomic out(ctx_);
  out.c_ = std::move(u1);
  return out;
}

Cyclotomic Cyclotomic::conj() const {
  if (!ctx_) return *this;
  const unsigned n = ctx_->order;
  QPoly r;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    const std::size_t e = (n - (i % n)) % n;
    if (r.size() <= e) r.resize(e + 1, Rational(0));
    r[e] += c_[i];
  }
  reduce_mod(r, ctx_->phi);
  Cyclotomic out(ctx_);
  out.c_ = std::move(r);
  return out;
}

Complex Cyclotomic::embed(unsigned k) const {
  const unsigned n = order();
  const long double angle = 2.0L * 3.14159265358979323846264338327950288L * k / n;
  // Horner in long double to keep the embedding accurate for large coefficients.
  std::complex<long double> z(std::cos(angle), std::sin(angle));
  std::complex<long double> acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    acc = acc * z + std::complex<long double>(static_cast<long double>(c_[i].get_d()), 0.0L);
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.c_.empty() || b.c_.empty()) return a.c_.empty() && b.c_.empty();
  if (a.order() != b.order() && a.ctx_ && b.ctx_) return false;
  return a.c_ == b.c_;
}

std::string Cyclotomic::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c_[i].get_str() + ")";
    if (i > 0) s += "*z^" + std::to_string(i);
  }
  return s;
}

std::string to_string(const Integer& v) { return v.get_str(); }
std::string to_string(const Rational& v) { return v.get_str(); }

}  // namespace l2approx
