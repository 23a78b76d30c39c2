#pragma once

// Finite quotients: coset tables, Todd-Coxeter enumeration, finite
// representations and the specialisation of group-ring matrices through them.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <type_traits>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/errors.hpp"
#include "l2approx/group_ring.hpp"
#include "l2approx/matrix.hpp"
#include "l2approx/word.hpp"

namespace l2approx {

using Permutation = std::vector<std::uint32_t>;

// Right action of the generators on cosets {0..index-1}; coset 0 is the
// subgroup itself. action[g][i] is the coset i.g.
class CosetTable {
 public:
  CosetTable() = default;
  CosetTable(std::size_t index, std::vector<Permutation> action);

  std::size_t index() const noexcept { return index_; }
  std::size_t generators() const noexcept { return action_.size(); }
  const std::vector<Permutation>& action() const noexcept { return action_; }
  const Permutation& inverse_action(std::size_t g) const { return inverse_[g]; }

  std::uint32_t act(std::uint32_t coset, Letter l) const;
  std::uint32_t act(std::uint32_t coset, const Word& w) const;
  // Permutation induced by w (right action: result[i] = i.w).
  Permutation permutation(const Word& w) const;

  // Bijectivity, transitivity and triviality of every relator on every coset.
  // Throws InvalidTower with the failing condition.
  void validate(const Presentation& p) const;
  bool is_transitive() const;
  // Point stabilisers coincide, i.e. the subgroup is normal.
  bool is_normal() const;

  // Words u_i with 0.u_i = i from a breadth-first spanning tree.
  std::vector<Word> transversal() const;

  friend bool operator==(const CosetTable& a, const CosetTable& b) {
    return a.index_ == b.index_ && a.action_ == b.action_;
  }

 private:
  std::size_t index_ = 0;
  std::vector<Permutation> action_;
  std::vector<Permutation> inverse_;
};

// Relabels cosets in first-appearance order of a breadth-first scan from
// coset 0 through generator columns x, x^-1, y, y^-1, ...
CosetTable standardize(const CosetTable& t);

// HLT enumeration with coincidence handling; the result is standardised.
CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup_generators,
                        std::size_t max_cosets);

// Kernel of pi -> Z/k given by generator weights (the cyclic covers used by
// `cyclic: k` and `kernel-mod: p^j`). Throws InvalidTower when a relator has
// nonzero weighted exponent sum mod k.
CosetTable cyclic_table(const Presentation& p, const std::vector<long>& weights, std::size_t k);

// Kernel of pi -> (Z/k)^2 given by two weight vectors.
CosetTable abelian_table(const Presentation& p, const std::vector<long>& weights_a,
                         const std::vector<long>& weights_b, std::size_t k);

// Normalised permutation character: fixed cosets / index.
Rational permutation_character(const CosetTable& t, const Word& g);

struct ConjugateStats {
  std::size_t n_of_g = 0;   // conjugates of the stabiliser containing g
  std::size_t n_total = 0;  // distinct conjugates of the stabiliser
  std::size_t image_order = 0;
};

// Counts conjugates of the point stabiliser inside the finite permutation
// image of the coset action. Throws ImageTooLarge when the image group has
// more than order_cap elements.
ConjugateStats conjugate_subgroup_stats(const CosetTable& t, const Word& g, std::size_t order_cap = 1'000'000);

// All elements of the permutation image, generated by closure. Throws
// ImageTooLarge past the cap.
std::vector<Permutation> permutation_image(const CosetTable& t, std::size_t order_cap);

struct Tower {
  std::vector<CosetTable> levels;
  std::vector<bool> normal;
  std::vector<std::string> labels;

  // Indices non-decreasing, each table valid; normal flags recomputed.
  void validate(const Presentation& p);
};

// Finite-dimensional representation by generator images. Inverse images are
// stored so that words can be evaluated without inverting.
template <class T>
struct FiniteRep {
  std::size_t dimension = 0;
  std::vector<Matrix<T>> images;
  std::vector<Matrix<T>> inverse_images;
  bool unitary = false;  // certificate: rho(g)* rho(g) = 1 checked

  Matrix<T> evaluate(const Word& w) const {
    const T like = images.empty() || images[0].empty() ? T{} : images[0](0, 0);
    Matrix<T> r = Matrix<T>::identity(dimension, like);
    for (Letter l : w.letters()) {
      r = multiply(r, l > 0 ? images[generator_of(l)] : inverse_images[generator_of(l)]);
    }
    return r;
  }
};

// Builds a representation from generator images, inverting them exactly (or
// in floating point), verifying every relator maps to the identity and
// recording the unitarity certificate when it holds (tolerance 1e-10 for
// floating domains).
template <class T>
FiniteRep<T> make_rep(const Presentation& p, std::vector<Matrix<T>> images);

// Line bundle g -> xi^{phi(g)} for a homomorphism phi given by weights.
FiniteRep<Complex> line_bundle(const Presentation& p, const std::vector<long>& weights, Complex xi);
FiniteRep<Cyclotomic> line_bundle_exact(const Presentation& p, const std::vector<long>& weights, unsigned n, long k);

// Permutation representation of a coset table over any domain.
template <class T>
FiniteRep<T> permutation_rep(const CosetTable& t, const T& like);

template <class T>
FiniteRep<T> direct_sum(const FiniteRep<T>& a, const FiniteRep<T>& b);

// Replaces each entry sum b_g g by the block sum b_g rho(g).
template <class T>
Matrix<T> specialize(const IntMatrix& m, const FiniteRep<T>& rep);
template <class T>
Matrix<T> specialize(const GroupRingMatrix<T>& m, const FiniteRep<T>& rep);
// Permutation specialisation; avoids building dense permutation matrices.
template <class T>
Matrix<T> specialize(const IntMatrix& m, const CosetTable& t, const T& like);

using ClassFunction = std::function<Complex(const Word&)>;

// Character of the representation induced from a class function on a normal
// subgroup: sum over coset representatives u of chi(u g u^-1) when g lies in
// the subgroup, 0 otherwise. Throws NotNormal unless the table is normal.
Complex induced_character(const CosetTable& t, const ClassFunction& chi_on_subgroup, const Word& g);
// Divided by chi(1) * index.
Complex induced_character_normalized(const CosetTable& t, const ClassFunction& chi_on_subgroup,
                                     Complex chi_at_identity, const Word& g);

Complex tensor_power_character(const ClassFunction& chi, std::size_t k, const Word& g);

// ---------------------------------------------------------------------------
// Template implementations.

namespace detail {

template <class T>
bool is_identity_matrix(const Matrix<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const T& x = m(i, j);
      if constexpr (scalar_traits<T>::exact) {
        const bool want_one = i == j;
        if (want_one ? !(x == scalar_traits<T>::from_int(1, x)) : !scalar_traits<T>::is_zero(x)) return false;
      } else {
        if (std::abs(x - (i == j ? T(1) : T(0))) > 1e-10) return false;
      }
    }
  return true;
}

template <class T>
Matrix<T> exact_or_float_inverse(const Matrix<T>& m) {
  if constexpr (std::is_same_v<T, Integer>) {
    Matrix<Rational> q(m.rows(), m.cols(), Rational(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = Rational(m(i, j));
    const Matrix<Rational> qi = inverse(q);
    Matrix<Integer> r(m.rows(), m.cols(), Integer(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (qi(i, j).get_den() != 1) throw InvalidArgument("generator image is not invertible over Z");
        r(i, j) = qi(i, j).get_num();
      }
    return r;
  } else {
    return inverse(m);
  }
}

}  // namespace detail

template <class T>
FiniteRep<T> make_rep(const Presentation& p, std::vector<Matrix<T>> images) {
  if (images.size() != p.rank()) throw InvalidArgument("representation needs one image per generator");
  FiniteRep<T> rep;
  rep.dimension = images.empty() ? 0 : images[0].rows();
  for (const auto& m : images)
    if (m.rows() != rep.dimension || m.cols() != rep.dimension)
      throw InvalidArgument("generator images must be square of a common size");
  rep.images = std::move(images);
  for (const auto& m : rep.images) {
    try {
      rep.inverse_images.push_back(detail::exact_or_float_inverse(m));
    } catch (const std::domain_error&) {
      throw InvalidArgument("generator image is singular");
    }
  }
  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    if (!detail::is_identity_matrix(rep.evaluate(p.relators[r])))
      throw InvalidArgument("relator " + std::to_string(r) + " does not map to the identity");
  }
  rep.unitary = true;
  for (const auto& m : rep.images)
    if (!detail::is_identity_matrix(multiply(adjoint(m), m))) rep.unitary = false;
  return rep;
}

template <class T>
FiniteRep<T> permutation_rep(const CosetTable& t, const T& like) {
  FiniteRep<T> rep;
  rep.dimension = t.index();
  const T zero = scalar_traits<T>::zero(like);
  const T one = scalar_traits<T>::from_int(1, like);
  for (std::size_t g = 0; g < t.generators(); ++g) {
    Matrix<T> m(t.index(), t.index(), zero), mi(t.index(), t.index(), zero);
    for (std::size_t i = 0; i < t.index(); ++i) {
      m(i, t.action()[g][i]) = one;
      mi(i, t.inverse_action(g)[i]) = one;
    }
    rep.images.push_back(std::move(m));
    rep.inverse_images.push_back(std::move(mi));
  }
  rep.unitary = true;
  return rep;
}

template <class T>
FiniteRep<T> direct_sum(const FiniteRep<T>& a, const FiniteRep<T>& b) {
  if (a.images.size() != b.images.size()) throw InvalidArgument("direct sum: generator counts differ");
  FiniteRep<T> r;
  r.dimension = a.dimension + b.dimension;
  const T zero = a.images.empty() ? T{} : scalar_traits<T>::zero(a.images[0](0, 0));
  for (std::size_t g = 0; g < a.images.size(); ++g) {
    r.images.push_back(direct_sum(a.images[g], b.images[g], zero));
    r.inverse_images.push_back(direct_sum(a.inverse_images[g], b.inverse_images[g], zero));
  }
  r.unitary = a.unitary && b.unitary;
  return r;
}

namespace detail {

template <class T, class C, class Eval>
Matrix<T> specialize_blocks(const GroupRingMatrix<C>& m, std::size_t dim, const T& like, Eval&& eval) {
  const T zero = scalar_traits<T>::zero(like);
  Matrix<T> out(m.rows() * dim, m.cols() * dim, zero);
  for (const auto& [idx, e] : m.entries()) {
    const std::size_t r0 = idx.first * dim, c0 = idx.second * dim;
    for (const auto& [w, beta] : e.terms()) {
      T b;
      if constexpr (std::is_same_v<C, Integer>) {
        b = from_integer<T>(beta, like);
      } else {
        b = beta;
      }
      eval(w, [&](std::size_t i, std::size_t j, const T& v) { out(r0 + i, c0 + j) += b * v; });
    }
  }
  return out;
}

}  // namespace detail

template <class T>
Matrix<T> specialize(const IntMatrix& m, const FiniteRep<T>& rep) {
  const T like = rep.images.empty() || rep.dimension == 0 ? T{} : rep.images[0](0, 0);
  std::map<Word, Matrix<T>> cache;
  return detail::specialize_blocks<T>(m, rep.dimension, like, [&](const Word& w, auto&& put) {
    auto it = cache.find(w);
    if (it == cache.end()) it = cache.emplace(w, rep.evaluate(w)).first;
    const Matrix<T>& rho = it->second;
    for (std::size_t i = 0; i < rho.rows(); ++i)
      for (std::size_t j = 0; j < rho.cols(); ++j)
        if (!scalar_traits<T>::is_zero(rho(i, j))) put(i, j, rho(i, j));
  });
}

template <class T>
Matrix<T> specialize(const GroupRingMatrix<T>& m, const FiniteRep<T>& rep) {
  const T like = rep.images.empty() || rep.dimension == 0 ? T{} : rep.images[0](0, 0);
  return detail::specialize_blocks<T>(m, rep.dimension, like, [&](const Word& w, auto&& put) {
    const Matrix<T> rho = rep.evaluate(w);
    for (std::size_t i = 0; i < rho.rows(); ++i)
      for (std::size_t j = 0; j < rho.cols(); ++j)
        if (!scalar_traits<T>::is_zero(rho(i, j))) put(i, j, rho(i, j));
  });
}

template <class T>
Matrix<T> specialize(const IntMatrix& m, const CosetTable& t, const T& like) {
  const T one = scalar_traits<T>::from_int(1, like);
  std::map<Word, Permutation> cache;
  return detail::specialize_blocks<T>(m, t.index(), like, [&](const Word& w, auto&& put) {
    auto it = cache.find(w);
    if (it == cache.end()) it = cache.emplace(w, t.permutation(w)).first;
    for (std::size_t i = 0; i < t.index(); ++i) put(i, it->second[i], one);
  });
}

}  // namespace l2approx
