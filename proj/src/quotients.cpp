#include "l2approx/quotients.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

namespace l2approx {

namespace {

Permutation invert(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<std::uint32_t>(i);
  return r;
}

// Apply p then q.
Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

struct PermHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : p) h = (h ^ v) * 1099511628211ull;
    return h;
  }
};

long mod(long a, long k) {
  const long r = a % k;
  return r < 0 ? r + k : r;
}

}  // namespace

CosetTable::CosetTable(std::size_t index, std::vector<Permutation> action)
    : index_(index), action_(std::move(action)) {
  for (std::size_t g = 0; g < action_.size(); ++g) {
    const auto& p = action_[g];
    if (p.size() != index_) throw InvalidTower("generator " + std::to_string(g) + " permutation has wrong length");
    std::vector<bool> seen(index_, false);
    for (auto v : p) {
      if (v >= index_ || seen[v]) throw InvalidTower("generator " + std::to_string(g) + " does not act bijectively");
      seen[v] = true;
    }
    inverse_.push_back(invert(p));
  }
}

std::uint32_t CosetTable::act(std::uint32_t coset, Letter l) const {
  const std::size_t g = generator_of(l);
  if (g >= action_.size()) throw InvalidArgument("word uses a generator outside the coset table");
  return l > 0 ? action_[g][coset] : inverse_[g][coset];
}

std::uint32_t CosetTable::act(std::uint32_t coset, const Word& w) const {
  for (Letter l : w.letters()) coset = act(coset, l);
  return coset;
}

Permutation CosetTable::permutation(const Word& w) const {
  Permutation r(index_);
  for (std::size_t i = 0; i < index_; ++i) r[i] = act(static_cast<std::uint32_t>(i), w);
  return r;
}

bool CosetTable::is_transitive() const {
  if (index_ == 0) return false;
  std::vector<bool> seen(index_, false);
  std::deque<std::uint32_t> q{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const auto c = q.front();
    q.pop_front();
    for (std::size_t g = 0; g < action_.size(); ++g) {
      for (auto n : {action_[g][c], inverse_[g][c]}) {
        if (!seen[n]) {
          seen[n] = true;
          ++count;
          q.push_back(n);
        }
      }
    }
  }
  return count == index_;
}

void CosetTable::validate(const Presentation& p) const {
  if (index_ == 0) throw InvalidTower("coset table has index 0");
  if (action_.size() != p.rank())
    throw InvalidTower("coset table has " + std::to_string(action_.size()) + " generators, presentation has " +
                       std::to_string(p.rank()));
  if (!is_transitive()) throw InvalidTower("coset action is not transitive");
  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    for (std::size_t c = 0; c < index_; ++c) {
      if (act(static_cast<std::uint32_t>(c), p.relators[r]) != c)
        throw InvalidTower("relator " + std::to_string(r) + " moves coset " + std::to_string(c));
    }
  }
}

std::vector<Word> CosetTable::transversal() const {
  std::vector<Word> reps(index_);
  std::vector<bool> seen(index_, false);
  std::deque<std::uint32_t> q{0};
  seen[0] = true;
  while (!q.empty()) {
    const auto c = q.front();
    q.pop_front();
    for (std::size_t g = 0; g < action_.size(); ++g) {
      for (int sign : {1, -1}) {
        const auto n = sign > 0 ? action_[g][c] : inverse_[g][c];
        if (!seen[n]) {
          seen[n] = true;
          reps[n] = reps[c] * Word::generator(g, sign);
          q.push_back(n);
        }
      }
    }
  }
  return reps;
}

bool CosetTable::is_normal() const {
  // The stabiliser of coset 0 is generated by Schreier generators
  // u_i g u_{i.g}^-1; it is normal iff each of them fixes every coset.
  const auto reps = transversal();
  for (std::size_t i = 0; i < index_; ++i) {
    for (std::size_t g = 0; g < action_.size(); ++g) {
      const Word s = reps[i] * Word::generator(g) * reps[action_[g][i]].inverse();
      for (std::size_t c = 0; c < index_; ++c)
        if (act(static_cast<std::uint32_t>(c), s) != c) return false;
    }
  }
  return true;
}

CosetTable standardize(const CosetTable& t) {
  const std::size_t n = t.index();
  constexpr std::uint32_t unset = UINT32_MAX;
  std::vector<std::uint32_t> relabel(n, unset);
  std::vector<std::uint32_t> order;
  relabel[0] = 0;
  order.push_back(0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto c = order[k];
    for (std::size_t g = 0; g < t.generators(); ++g) {
      for (auto nb : {t.action()[g][c], t.inverse_action(g)[c]}) {
        if (relabel[nb] == unset) {
          relabel[nb] = static_cast<std::uint32_t>(order.size());
          order.push_back(nb);
        }
      }
    }
  }
  if (order.size() != n) throw InvalidTower("cannot standardise an intransitive table");
  std::vector<Permutation> action(t.generators(), Permutation(n));
  for (std::size_t g = 0; g < t.generators(); ++g)
    for (std::size_t c = 0; c < n; ++c) action[g][relabel[c]] = relabel[t.action()[g][c]];
  return CosetTable(n, std::move(action));
}

namespace {

// Hasselgrove-Leech-Trotter enumeration. Columns are 2g (generator g) and
// 2g+1 (its inverse).
class Enumerator {
 public:
  Enumerator(std::size_t gens, std::size_t cap) : gens_(gens), cap_(cap) { new_coset(); }

  static std::size_t column(Letter l) { return 2 * generator_of(l) + (l > 0 ? 0 : 1); }
  static std::size_t inverse_column(std::size_t c) { return c ^ 1u; }

  bool alive(std::size_t c) const { return parent_[c] == c; }
  std::size_t size() const { return parent_.size(); }

  void scan_and_fill(std::size_t alpha, const Word& w) {
    const auto& l = w.letters();
    if (l.empty()) return;
    std::size_t f = alpha, b = alpha;
    long i = 0, j = static_cast<long>(l.size()) - 1;
    while (true) {
      while (i <= j && entry(f, column(l[i])) != none) f = entry(f, column(l[i++]));
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && entry(b, inverse_column(column(l[j]))) != none) b = entry(b, inverse_column(column(l[j--])));
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        set(f, column(l[i]), b);
        return;
      }
      define(f, column(l[i]));
    }
  }

  void define(std::size_t c, std::size_t col) {
    const std::size_t n = new_coset();
    set(c, col, n);
  }

  std::size_t entry(std::size_t c, std::size_t col) const { return table_[c * 2 * gens_ + col]; }

  static constexpr std::size_t none = SIZE_MAX;

  void coincidence(std::size_t a, std::size_t b) {
    merge(a, b);
    while (!queue_.empty()) {
      const std::size_t g = queue_.front();
      queue_.pop_front();
      for (std::size_t x = 0; x < 2 * gens_; ++x) {
        const std::size_t d = entry(g, x);
        if (d == none) continue;
        ref(d, inverse_column(x)) = none;
        const std::size_t mu = rep(g), nu = rep(d);
        if (entry(mu, x) != none) {
          merge(nu, entry(mu, x));
        } else if (entry(nu, inverse_column(x)) != none) {
          merge(mu, entry(nu, inverse_column(x)));
        } else {
          set(mu, x, nu);
        }
      }
    }
  }

  CosetTable result() const {
    std::vector<std::size_t> live;
    std::vector<std::uint32_t> label(size(), UINT32_MAX);
    for (std::size_t c = 0; c < size(); ++c)
      if (alive(c)) {
        label[c] = static_cast<std::uint32_t>(live.size());
        live.push_back(c);
      }
    std::vector<Permutation> action(gens_, Permutation(live.size()));
    for (std::size_t g = 0; g < gens_; ++g)
      for (std::size_t k = 0; k < live.size(); ++k) {
        const std::size_t img = entry(live[k], 2 * g);
        if (img == none || !alive(img)) throw EnumerationOverflow("coset enumeration left an incomplete table");
        action[g][k] = label[img];
      }
    return standardize(CosetTable(live.size(), std::move(action)));
  }

 private:
  std::size_t new_coset() {
    if (parent_.size() >= cap_)
      throw EnumerationOverflow("coset enumeration exceeded " + std::to_string(cap_) + " cosets");
    parent_.push_back(parent_.size());
    table_.resize(table_.size() + 2 * gens_, none);
    return parent_.size() - 1;
  }
  std::size_t& ref(std::size_t c, std::size_t col) { return table_[c * 2 * gens_ + col]; }
  void set(std::size_t c, std::size_t col, std::size_t d) {
    ref(c, col) = d;
    ref(d, inverse_column(col)) = c;
  }
  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      const std::size_t next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }
  void merge(std::size_t a, std::size_t b) {
    const std::size_t pa = rep(a), pb = rep(b);
    if (pa == pb) return;
    const std::size_t lo = std::min(pa, pb), hi = std::max(pa, pb);
    parent_[hi] = lo;
    queue_.push_back(hi);
  }

  std::size_t gens_;
  std::size_t cap_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> table_;
  std::deque<std::size_t> queue_;
};

}  // namespace

CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup_generators, std::size_t max_cosets) {
  if (max_cosets < 1) throw InvalidArgument("max-cosets must be at least 1");
  validate(p);
  const std::size_t gens = p.rank();
  if (gens == 0) return CosetTable(1, {});
  Enumerator e(gens, max_cosets);
  for (const auto& w : subgroup_generators) {
    e.scan_and_fill(0, w);
  }
  for (std::size_t c = 0; c < e.size(); ++c) {
    for (const auto& r : p.relators) {
      if (!e.alive(c)) break;
      e.scan_and_fill(c, r);
    }
    for (std::size_t x = 0; x < 2 * gens && e.alive(c); ++x) {
      if (e.entry(c, x) == Enumerator::none) e.define(c, x);
    }
  }
  CosetTable t = e.result();
  t.validate(p);
  return t;
}

CosetTable cyclic_table(const Presentation& p, const std::vector<long>& weights, std::size_t k) {
  if (k == 0) throw InvalidTower("cyclic quotient of order 0");
  if (weights.size() != p.rank()) throw InvalidTower("weight vector length differs from the generator count");
  const long kk = static_cast<long>(k);
  for (const auto& r : p.relators) {
    const auto sums = r.exponent_sums(p.rank());
    long total = 0;
    for (std::size_t g = 0; g < sums.size(); ++g) total += sums[g] * weights[g];
    if (mod(total, kk) != 0) throw InvalidTower("weights do not define a homomorphism onto Z/" + std::to_string(k));
  }
  std::vector<Permutation> action(p.rank(), Permutation(k));
  for (std::size_t g = 0; g < p.rank(); ++g)
    for (std::size_t i = 0; i < k; ++i)
      action[g][i] = static_cast<std::uint32_t>(mod(static_cast<long>(i) + weights[g], kk));
  CosetTable t(k, std::move(action));
  if (!t.is_transitive()) throw InvalidTower("weights do not surject onto Z/" + std::to_string(k));
  return t;
}

CosetTable abelian_table(const Presentation& p, const std::vector<long>& wa, const std::vector<long>& wb,
                         std::size_t k) {
  if (k == 0) throw InvalidTower("quotient of order 0");
  if (wa.size() != p.rank() || wb.size() != p.rank())
    throw InvalidTower("weight vector length differs from the generator count");
  const long kk = static_cast<long>(k);
  for (const auto& r : p.relators) {
    const auto sums = r.exponent_sums(p.rank());
    long ta = 0, tb = 0;
    for (std::size_t g = 0; g < sums.size(); ++g) {
      ta += sums[g] * wa[g];
      tb += sums[g] * wb[g];
    }
    if (mod(ta, kk) != 0 || mod(tb, kk) != 0) throw InvalidTower("weights do not define a homomorphism");
  }
  std::vector<Permutation> action(p.rank(), Permutation(k * k));
  for (std::size_t g = 0; g < p.rank(); ++g)
    for (long a = 0; a < kk; ++a)
      for (long b = 0; b < kk; ++b)
        action[g][static_cast<std::size_t>(a * kk + b)] =
            static_cast<std::uint32_t>(mod(a + wa[g], kk) * kk + mod(b + wb[g], kk));
  CosetTable t(k * k, std::move(action));
  if (!t.is_transitive()) throw InvalidTower("weights do not surject onto (Z/k)^2");
  return t;
}

Rational permutation_character(const CosetTable& t, const Word& g) {
  std::size_t fixed = 0;
  for (std::size_t c = 0; c < t.index(); ++c)
    if (t.act(static_cast<std::uint32_t>(c), g) == c) ++fixed;
  Rational r(static_cast<long>(fixed), static_cast<long>(t.index()));
  r.canonicalize();
  return r;
}

std::vector<Permutation> permutation_image(const CosetTable& t, std::size_t order_cap) {
  Permutation id(t.index());
  std::iota(id.begin(), id.end(), 0u);
  std::vector<Permutation> elems{id};
  std::unordered_set<Permutation, PermHash> seen{id};
  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (const auto& gen : t.action()) {
      Permutation n = compose(elems[k], gen);
      if (seen.insert(n).second) {
        if (elems.size() >= order_cap)
          throw ImageTooLarge("permutation image exceeds order cap " + std::to_string(order_cap));
        elems.push_back(std::move(n));
      }
    }
  }
  return elems;
}

ConjugateStats conjugate_subgroup_stats(const CosetTable& t, const Word& g, std::size_t order_cap) {
  const auto elems = permutation_image(t, order_cap);
  // Stab(j) as a bitmask over image elements. In a transitive action the
  // point stabilisers are exactly the conjugates of Stab(0).
  std::set<std::vector<bool>> classes;
  std::set<std::vector<bool>> containing;
  const Permutation pg = t.permutation(g);
  for (std::size_t j = 0; j < t.index(); ++j) {
    std::vector<bool> mask(elems.size());
    for (std::size_t e = 0; e < elems.size(); ++e) mask[e] = elems[e][j] == j;
    if (pg[j] == j) containing.insert(mask);
    classes.insert(std::move(mask));
  }
  return {containing.size(), classes.size(), elems.size()};
}

void Tower::validate(const Presentation& p) {
  normal.assign(levels.size(), false);
  if (labels.size() < levels.size()) labels.resize(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    try {
      levels[k].validate(p);
    } catch (InvalidTower& e) {
      e.set_level(static_cast<long>(k));
      throw;
    }
    if (k > 0 && levels[k].index() < levels[k - 1].index()) {
      InvalidTower err("tower indices decrease at level " + std::to_string(k));
      err.set_level(static_cast<long>(k));
      throw err;
    }
    normal[k] = levels[k].is_normal();
  }
}

FiniteRep<Complex> line_bundle(const Presentation& p, const std::vector<long>& weights, Complex xi) {
  if (weights.size() != p.rank()) throw InvalidArgument("weight vector length differs from the generator count");
  std::vector<Matrix<Complex>> images;
  for (long w : weights) images.emplace_back(1, 1, std::pow(xi, static_cast<double>(w)));
  return make_rep(p, std::move(images));
}

FiniteRep<Cyclotomic> line_bundle_exact(const Presentation& p, const std::vector<long>& weights, unsigned n, long k) {
  if (weights.size() != p.rank()) throw InvalidArgument("weight vector length differs from the generator count");
  std::vector<Matrix<Cyclotomic>> images;
  for (long w : weights) images.emplace_back(1, 1, Cyclotomic::root_of_unity(n, k * w));
  return make_rep(p, std::move(images));
}

Complex induced_character(const CosetTable& t, const ClassFunction& chi, const Word& g) {
  if (!t.is_normal()) throw NotNormal("induced character requires a normal subgroup");
  if (t.act(0, g) != 0) return 0.0;
  Complex sum = 0.0;
  for (const auto& u : t.transversal()) sum += chi(u * g * u.inverse());
  return sum;
}

Complex induced_character_normalized(const CosetTable& t, const ClassFunction& chi, Complex chi_at_identity,
                                     const Word& g) {
  return induced_character(t, chi, g) / (chi_at_identity * static_cast<double>(t.index()));
}

Complex tensor_power_character(const ClassFunction& chi, std::size_t k, const Word& g) {
  const Complex v = chi(g);
  Complex r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r *= v;
  return r;
}

}  // namespace l2approx
