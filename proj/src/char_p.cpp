#include "l2approx/char_p.hpp"

#include <algorithm>

#include "l2approx/exact_linalg.hpp"
#include "l2approx/parallel.hpp"

namespace l2approx {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

std::optional<unsigned> p_exponent(std::size_t n, std::uint64_t p) {
  unsigned e = 0;
  while (n > 1) {
    if (n % p) return std::nullopt;
    n /= p;
    ++e;
  }
  return n == 1 ? std::optional<unsigned>(e) : std::nullopt;
}

// The finite group pi / Gamma for a normal coset table, acting regularly.
// Element c is the unique element sending coset 0 to c; products are read
// off the permutations.
class RegularGroup {
 public:
  RegularGroup(const CosetTable& t, std::size_t cap) : n_(t.index()) {
    if (n_ > cap) throw ImageTooLarge("quotient of order " + std::to_string(n_) + " exceeds the cap");
    const auto u = t.transversal();
    perms_.reserve(n_);
    for (std::size_t c = 0; c < n_; ++c) perms_.push_back(t.permutation(u[c]));
    for (std::size_t g = 0; g < t.generators(); ++g) gens_.push_back(t.action()[g][0]);
  }

  std::size_t order() const { return n_; }
  const std::vector<std::uint32_t>& generators() const { return gens_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return perms_[b][a]; }
  std::uint32_t inv(std::uint32_t a) const {
    const auto& pa = perms_[a];
    return static_cast<std::uint32_t>(std::find(pa.begin(), pa.end(), 0u) - pa.begin());
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t k) const {
    std::uint32_t r = 0;
    for (std::uint64_t i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }
  std::uint32_t commutator(std::uint32_t a, std::uint32_t b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  // Subgroup generated by the given elements.
  std::vector<bool> closure(const std::vector<std::uint32_t>& gens) const {
    std::vector<bool> in(n_, false);
    std::vector<std::uint32_t> queue{0};
    in[0] = true;
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (auto g : gens) {
        const auto x = mul(queue[k], g);
        if (!in[x]) {
          in[x] = true;
          queue.push_back(x);
        }
      }
    return in;
  }

  // Coset table of pi / Gamma' for the subgroup H = Gamma'/Gamma: the blocks
  // {h q : h in H} are permuted by the generators.
  CosetTable quotient_table(const std::vector<bool>& h, const CosetTable& t) const {
    std::vector<std::uint32_t> members;
    for (std::uint32_t c = 0; c < n_; ++c)
      if (h[c]) members.push_back(c);
    std::vector<std::uint32_t> block(n_, UINT32_MAX);
    std::uint32_t blocks = 0;
    for (std::uint32_t q = 0; q < n_; ++q) {
      if (block[q] != UINT32_MAX) continue;
      for (auto m : members) block[mul(m, q)] = blocks;
      ++blocks;
    }
    std::vector<std::vector<std::uint32_t>> rep(blocks);
    for (std::uint32_t q = 0; q < n_; ++q)
      if (rep[block[q]].empty()) rep[block[q]].push_back(q);
    std::vector<Permutation> action;
    for (std::size_t g = 0; g < t.generators(); ++g) {
      Permutation a(blocks);
      for (std::uint32_t b = 0; b < blocks; ++b) a[b] = block[mul(rep[b][0], gens_[g])];
      action.push_back(std::move(a));
    }
    return standardize(CosetTable(blocks, std::move(action)));
  }

 private:
  std::size_t n_;
  std::vector<Permutation> perms_;
  std::vector<std::uint32_t> gens_;
};

std::vector<std::uint32_t> elements(const std::vector<bool>& s) {
  std::vector<std::uint32_t> r;
  for (std::uint32_t c = 0; c < s.size(); ++c)
    if (s[c]) r.push_back(c);
  return r;
}

StepCheck make_step(std::size_t from_index, std::size_t to_index, std::size_t dim_from, std::size_t dim_to) {
  StepCheck s{from_index, to_index, dim_from, dim_to, true};
  s.ok = dim_to * from_index <= dim_from * to_index;
  return s;
}

}  // namespace

PTower PTower::make(const Presentation& pres, std::uint64_t p, std::vector<CosetTable> levels,
                    std::vector<std::string> labels) {
  if (!is_prime(p)) throw InvalidTower(std::to_string(p) + " is not prime");
  if (levels.empty()) throw InvalidTower("p-tower needs at least one level");
  PTower t;
  t.p = p;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    levels[j].validate(pres);
    if (!levels[j].is_normal()) throw InvalidTower("level " + std::to_string(j) + " is not normal");
    const auto e = p_exponent(levels[j].index(), p);
    if (!e)
      throw InvalidTower("level " + std::to_string(j) + " has index " + std::to_string(levels[j].index()) +
                         ", not a power of " + std::to_string(p));
    if (j > 0 && *e <= t.exponents.back()) throw InvalidTower("p-tower exponents must increase strictly");
    t.exponents.push_back(*e);
  }
  t.levels = std::move(levels);
  t.labels = std::move(labels);
  t.labels.resize(t.levels.size());
  for (std::size_t j = 0; j < t.labels.size(); ++j)
    if (t.labels[j].empty()) t.labels[j] = "index " + std::to_string(t.levels[j].index());
  return t;
}

PTower PTower::cyclic(const Presentation& pres, const std::vector<long>& weights, std::uint64_t p, unsigned first,
                      unsigned last) {
  if (first > last) throw InvalidArgument("empty exponent range");
  std::vector<CosetTable> levels;
  std::vector<std::string> labels;
  std::size_t k = 1;
  for (unsigned e = 0; e < first; ++e) k *= p;
  for (unsigned e = first; e <= last; ++e, k *= p) {
    levels.push_back(cyclic_table(pres, weights, k));
    labels.push_back("Z/" + std::to_string(k));
  }
  return make(pres, p, std::move(levels), std::move(labels));
}

std::size_t fp_betti(const GroupComplex& base, const CosetTable& table, std::uint64_t p, std::size_t i) {
  const Fp like(0, p);
  std::vector<Matrix<Fp>> b;
  for (const auto& d : base.boundaries) b.push_back(specialize(d, table, like));
  return betti(b, i);
}

FpBettiSequence fp_betti_sequence(const PTower& t, const GroupComplex& base, std::size_t i) {
  FpBettiSequence s;
  s.p = t.p;
  s.degree = i;
  const std::size_t n = t.levels.size();
  s.index.resize(n);
  s.fp_betti.resize(n);
  s.rational_betti.resize(n);
  s.normalized.resize(n);
  parallel_for(n, [&](std::size_t j) {
    const auto& table = t.levels[j];
    try {
      s.index[j] = table.index();
      s.fp_betti[j] = fp_betti(base, table, t.p, i);
      std::vector<Matrix<Integer>> b;
      for (const auto& d : base.boundaries) b.push_back(specialize(d, table, Integer(0)));
      s.rational_betti[j] = betti(b, i);
      s.normalized[j] = Rational(static_cast<long>(s.fp_betti[j]), static_cast<long>(table.index()));
      s.normalized[j].canonicalize();
    } catch (Error& e) {
      if (e.level() < 0) e.set_level(static_cast<long>(j));
      throw;
    }
  });
  return s;
}

std::vector<CosetTable> refine_step(const CosetTable& coarse, const CosetTable& fine, std::uint64_t p,
                                    std::size_t order_cap) {
  if (!fine.is_normal() || !coarse.is_normal()) throw InvalidTower("refinement needs normal levels");
  const RegularGroup q(fine, order_cap);
  // Image of Gamma_coarse in pi / Gamma_fine: elements whose transversal word
  // fixes coset 0 of the coarse table. Containment means the coset map is
  // well defined.
  const auto u = fine.transversal();
  std::vector<std::uint32_t> image(q.order());
  for (std::size_t c = 0; c < q.order(); ++c) image[c] = coarse.act(0, u[c]);
  for (std::size_t c = 0; c < q.order(); ++c)
    for (std::size_t g = 0; g < fine.generators(); ++g)
      if (image[fine.action()[g][c]] != coarse.action()[g][image[c]])
        throw InvalidTower("finer level is not contained in the coarser one");
  std::vector<bool> n(q.order());
  for (std::size_t c = 0; c < q.order(); ++c) n[c] = image[c] == 0;

  std::vector<CosetTable> chain;
  chain.push_back(standardize(coarse));
  std::size_t size = static_cast<std::size_t>(std::count(n.begin(), n.end(), true));
  while (size > 1) {
    // M = [N, Q] N^p is normal, and N / M is central elementary abelian, so
    // every subgroup between M and N is normal in Q.
    const auto members = elements(n);
    std::vector<std::uint32_t> gens;
    for (auto x : members) {
      gens.push_back(q.pow(x, p));
      for (auto g : q.generators()) gens.push_back(q.commutator(x, g));
    }
    std::vector<bool> m = q.closure(gens);
    for (bool grown = true; grown;) {
      grown = false;
      for (auto x : elements(m))
        for (auto g : q.generators()) {
          const auto y = q.mul(q.mul(q.inv(g), x), g);
          if (!m[y]) {
            gens.push_back(y);
            grown = true;
          }
        }
      if (grown) m = q.closure(gens);
    }
    // Basis of N / M; drop the first basis vector to get index p.
    std::vector<std::uint32_t> basis;
    std::vector<bool> span = m;
    std::vector<std::uint32_t> span_gens = elements(m);
    for (auto x : members) {
      if (span[x]) continue;
      basis.push_back(x);
      span_gens.push_back(x);
      span = q.closure(span_gens);
    }
    if (basis.empty()) throw InvalidTower("quotient is not a p-group");
    std::vector<std::uint32_t> next_gens = elements(m);
    next_gens.insert(next_gens.end(), basis.begin() + 1, basis.end());
    const std::vector<bool> next = q.closure(next_gens);
    const std::size_t next_size = static_cast<std::size_t>(std::count(next.begin(), next.end(), true));
    if (next_size * p != size) throw InvalidTower("quotient is not a p-group");
    n = next;
    size = next_size;
    chain.push_back(q.quotient_table(n, fine));
  }
  return chain;
}

MonotonicityReport monotonicity_check(const FpBettiSequence& seq) {
  MonotonicityReport r;
  for (std::size_t j = 0; j + 1 < seq.index.size(); ++j) {
    r.coarse.push_back(make_step(seq.index[j], seq.index[j + 1], seq.fp_betti[j], seq.fp_betti[j + 1]));
    r.monotone = r.monotone && r.coarse.back().ok;
  }
  r.note = "coarse levels only";
  return r;
}

MonotonicityReport monotonicity_check(const PTower& t, const GroupComplex& base, std::size_t i, bool strict,
                                      std::size_t order_cap) {
  const auto seq = fp_betti_sequence(t, base, i);
  MonotonicityReport r = monotonicity_check(seq);
  r.note.clear();
  r.refined = true;
  for (std::size_t j = 0; j + 1 < t.levels.size(); ++j) {
    std::vector<CosetTable> chain;
    try {
      chain = refine_step(t.levels[j], t.levels[j + 1], t.p, order_cap);
    } catch (const ImageTooLarge& e) {
      r.refined = false;
      r.note = std::string("refinement skipped: ") + e.what();
      continue;
    }
    std::size_t prev = seq.fp_betti[j];
    for (std::size_t k = 1; k < chain.size(); ++k) {
      const std::size_t d = k + 1 == chain.size() ? seq.fp_betti[j + 1] : fp_betti(base, chain[k], t.p, i);
      r.steps.push_back(make_step(chain[k - 1].index(), chain[k].index(), prev, d));
      r.monotone = r.monotone && r.steps.back().ok;
      prev = d;
    }
  }
  if (strict && !r.monotone) {
    for (const auto& s : r.coarse)
      if (!s.ok)
        throw TheoremViolation("normalised F_p Betti number increases from index " + std::to_string(s.from_index) +
                               " to " + std::to_string(s.to_index));
    for (const auto& s : r.steps)
      if (!s.ok)
        throw TheoremViolation("dim H grows by more than p from index " + std::to_string(s.from_index) + " to " +
                               std::to_string(s.to_index));
  }
  return r;
}

InequalityReport fp_l2_inequality(const FpBettiSequence& seq, double b2_reference, std::size_t fp_base, double tol) {
  if (seq.normalized.empty()) throw InvalidArgument("empty F_p Betti sequence");
  InequalityReport r;
  r.b2_reference = b2_reference;
  r.fp_base = fp_base;
  r.limit_estimate = seq.normalized.back();
  const double est = r.limit_estimate.get_d();
  r.lower_ok = b2_reference <= est + tol;
  r.upper_ok = r.limit_estimate <= Rational(static_cast<long>(fp_base));
  r.pass = r.lower_ok && r.upper_ok;
  const double decrement =
      seq.normalized.size() >= 2 ? Rational(seq.normalized[seq.normalized.size() - 2] - seq.normalized.back()).get_d() : 0.0;
  r.gap_observed = est - b2_reference > decrement + tol;
  return r;
}

}  // namespace l2approx
