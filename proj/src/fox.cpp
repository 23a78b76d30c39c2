#include "l2approx/fox.hpp"

#include <algorithm>
#include <map>

namespace l2approx {

IntElement fox_derivative(const Word& w, std::size_t generator) {
  IntElement r;
  Word prefix;
  for (Letter l : w.letters()) {
    const Word step({l});
    if (generator_of(l) == generator) {
      if (l > 0) {
        r.add_term(prefix, Integer(1));
      } else {
        r.add_term(prefix * step, Integer(-1));
      }
    }
    prefix = prefix * step;
  }
  return r;
}

std::size_t GroupComplex::cells(std::size_t j) const {
  if (j < boundaries.size()) return boundaries[j].cols();
  if (j == boundaries.size() && !boundaries.empty()) return boundaries.back().rows();
  return 0;
}

RingConfig GroupComplex::ring_config(std::size_t support_cap) const {
  RingConfig cfg;
  cfg.support_cap = support_cap;
  cfg.kind = presentation.kind();
  cfg.generators = presentation.rank();
  return cfg;
}

GroupComplex presentation_complex(const Presentation& p) {
  validate(p);
  GroupComplex c;
  c.presentation = p;
  const std::size_t n = p.rank();
  IntMatrix d1(n, 1);
  for (std::size_t g = 0; g < n; ++g) {
    IntElement e;
    e.add_term(Word::generator(g), Integer(1));
    e.add_term(Word{}, Integer(-1));
    d1.set(g, 0, e);
  }
  c.boundaries.push_back(std::move(d1));
  if (!p.relators.empty()) {
    IntMatrix d2(p.relators.size(), n);
    for (std::size_t r = 0; r < p.relators.size(); ++r)
      for (std::size_t g = 0; g < n; ++g) d2.set(r, g, fox_derivative(p.relators[r], g));
    c.boundaries.push_back(std::move(d2));
  }
  return c;
}

IntElement fox_fundamental_lhs(const Word& r, std::size_t generators) {
  IntElement sum;
  for (std::size_t g = 0; g < generators; ++g) {
    IntElement gm1;
    gm1.add_term(Word::generator(g), Integer(1));
    gm1.add_term(Word{}, Integer(-1));
    sum += multiply(fox_derivative(r, g), gm1);
  }
  return sum;
}

void verify_complex(const GroupComplex& c) {
  const RingConfig cfg = c.ring_config();
  for (std::size_t j = 0; j + 1 < c.boundaries.size(); ++j) {
    const IntMatrix& lower = c.boundaries[j];
    const IntMatrix& upper = c.boundaries[j + 1];
    if (upper.cols() != lower.rows()) {
      throw NotAComplex("boundary " + std::to_string(j + 2) + " has " + std::to_string(upper.cols()) +
                        " columns but C_" + std::to_string(j + 1) + " has " + std::to_string(lower.rows()) +
                        " cells");
    }
    // For a general group the product only vanishes in Z[pi]. The one case
    // decidable here is the presentation complex, where row r of d2 d1 is
    // exactly r - 1 in Z[F].
    const IntMatrix prod = multiply(upper, lower, cfg);
    if (c.presentation.kind() != GroupKind::general || c.presentation.relators.empty()) {
      if (!prod.is_zero()) throw NotAComplex("d_" + std::to_string(j + 2) + " d_" + std::to_string(j + 1) + " != 0");
      continue;
    }
    for (const auto& [idx, e] : prod.entries()) {
      if (j == 0 && idx.first < c.presentation.relators.size()) {
        IntElement expected;
        expected.add_term(c.presentation.relators[idx.first], Integer(1));
        expected.add_term(Word{}, Integer(-1));
        if (e == expected) continue;
      }
      throw NotAComplex("d_" + std::to_string(j + 2) + " d_" + std::to_string(j + 1) +
                        " does not vanish symbolically; verify it through a finite quotient");
    }
  }
}

namespace {

using QPoly = std::vector<Rational>;

void trim(TPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

void trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

TPoly poly_mul(const TPoly& a, const TPoly& b) {
  if (a.empty() || b.empty()) return {};
  TPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

TPoly poly_add(TPoly a, const TPoly& b, int sign) {
  if (a.size() < b.size()) a.resize(b.size(), Integer(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
  trim(a);
  return a;
}

QPoly poly_rem(QPoly a, const QPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

QPoly poly_gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Laplace expansion; sizes stay tiny.
TPoly determinant(const std::vector<std::vector<TPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return {Integer(1)};
  if (n == 1) return m[0][0];
  TPoly det;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<TPoly>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<TPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      sub.push_back(std::move(row));
    }
    det = poly_add(det, poly_mul(m[0][c], determinant(sub)), c % 2 ? -1 : 1);
  }
  return det;
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TPoly normalize_up_to_units(TPoly f) {
  trim(f);
  if (f.empty()) return f;
  std::size_t low = 0;
  while (f[low] == 0) ++low;
  f.erase(f.begin(), f.begin() + static_cast<long>(low));
  Integer g = 0;
  for (const auto& c : f) g = gcd(g, c);
  for (auto& c : f) c /= g;
  if (f.back() < 0)
    for (auto& c : f) c = -c;
  return f;
}

std::vector<std::vector<TPoly>> abelianized_jacobian(const Presentation& p, const std::vector<long>& weights) {
  if (weights.size() != p.rank()) throw InvalidArgument("need one weight per generator");
  std::vector<std::vector<TPoly>> jac;
  for (const auto& r : p.relators) {
    std::vector<TPoly> row;
    for (std::size_t g = 0; g < p.rank(); ++g) {
      std::map<long, Integer> terms;
      const IntElement d = fox_derivative(r, g);
      for (const auto& [w, c] : d.terms()) {
        long e = 0;
        const auto sums = w.exponent_sums(p.rank());
        for (std::size_t k = 0; k < p.rank(); ++k) e += sums[k] * weights[k];
        terms[e] += c;
      }
      TPoly f;
      if (!terms.empty()) {
        const long low = terms.begin()->first;
        f.assign(static_cast<std::size_t>(terms.rbegin()->first - low + 1), Integer(0));
        for (const auto& [e, c] : terms) f[static_cast<std::size_t>(e - low)] = c;
      }
      trim(f);
      row.push_back(std::move(f));
    }
    jac.push_back(std::move(row));
  }
  return jac;
}

TPoly alexander_polynomial(const Presentation& p, const std::vector<long>& weights) {
  const std::size_t n = p.rank();
  if (n > 6) throw DegreeCap("Alexander polynomial limited to six generators");
  if (n == 0) return {};
  const auto jac = abelianized_jacobian(p, weights);
  const std::size_t k = n - 1;
  if (jac.size() < k) return {};
  std::vector<std::vector<std::size_t>> rows, cols;
  std::vector<std::size_t> cur;
  combinations(jac.size(), k, 0, cur, rows);
  combinations(n, k, 0, cur, cols);
  QPoly g;
  for (const auto& rs : rows)
    for (const auto& cs : cols) {
      std::vector<std::vector<TPoly>> m;
      for (auto r : rs) {
        std::vector<TPoly> row;
        for (auto c : cs) row.push_back(jac[r][c]);
        m.push_back(std::move(row));
      }
      const TPoly d = determinant(m);
      QPoly q(d.begin(), d.end());
      g = poly_gcd(g, q);
    }
  if (g.empty()) return {};
  // Clear denominators, then make primitive.
  Integer den = 1;
  for (const auto& c : g) den = lcm(den, Integer(c.get_den()));
  TPoly out;
  for (const auto& c : g) out.push_back(Integer(c * den));
  return normalize_up_to_units(out);
}

}  // namespace l2approx
