#pragma once

// Group-ring elements and matrices over the free group on the generators (or
// its free-abelian quotient), with the standard involution
// (sum b_g g)* = sum conj(b_g) g^{-1}.
//
// Matrix convention: boundary matrices act on row vectors from the right, so a
// boundary C_{i+1} -> C_i has one row per (i+1)-cell and one column per i-cell,
// and the composite C_{i+2} -> C_{i+1} -> C_i is the product d_{i+2} * d_{i+1}.

#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "l2approx/errors.hpp"
#include "l2approx/scalar.hpp"
#include "l2approx/word.hpp"

namespace l2approx {

struct RingConfig {
  std::size_t support_cap = 1'000'000;
  GroupKind kind = GroupKind::free;
  std::size_t generators = 0;  // needed for the free-abelian normal form

  Word normalize(const Word& w) const {
    return kind == GroupKind::free_abelian ? abelian_normal_form(w, generators) : w;
  }
};

template <class C>
class GroupRingElement {
 public:
  using Terms = std::map<Word, C>;

  GroupRingElement() = default;
  explicit GroupRingElement(Terms terms) {
    for (auto& [w, c] : terms) add_term(w, c);
  }
  static GroupRingElement monomial(const Word& w, const C& c) {
    GroupRingElement e;
    e.add_term(w, c);
    return e;
  }

  const Terms& terms() const noexcept { return terms_; }
  std::size_t support_size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  // Coefficient of w (zero-like when absent; `like` supplies the domain).
  C coefficient(const Word& w, const C& like = C{}) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? scalar_traits<C>::zero(like) : it->second;
  }

  void add_term(const Word& w, const C& c) {
    if (scalar_traits<C>::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (scalar_traits<C>::is_zero(it->second)) terms_.erase(it);
    }
  }

  GroupRingElement& operator+=(const GroupRingElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  GroupRingElement& operator-=(const GroupRingElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  GroupRingElement operator-() const {
    GroupRingElement r;
    for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
    return r;
  }
  GroupRingElement scaled(const C& s) const {
    GroupRingElement r;
    for (const auto& [w, c] : terms_) r.add_term(w, c * s);
    return r;
  }

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const GroupRingElement& a, const GroupRingElement& b) { return !(a == b); }

 private:
  Terms terms_;
};

// Formal convolution with free reduction (and abelian normal form when the
// configuration says so). Throws SupportOverflow past the configured cap.
template <class C>
GroupRingElement<C> multiply(const GroupRingElement<C>& a, const GroupRingElement<C>& b,
                             const RingConfig& cfg = {}) {
  GroupRingElement<C> r;
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      r.add_term(cfg.normalize(wa * wb), ca * cb);
    }
    if (r.support_size() > cfg.support_cap) {
      throw SupportOverflow("product support " + std::to_string(r.support_size()) + " exceeds cap " +
                            std::to_string(cfg.support_cap));
    }
  }
  return r;
}

template <class C>
GroupRingElement<C> involute(const GroupRingElement<C>& a) {
  GroupRingElement<C> r;
  for (const auto& [w, c] : a.terms()) r.add_term(w.inverse(), scalar_traits<C>::conj(c));
  return r;
}

template <class C>
class GroupRingMatrix {
 public:
  using Index = std::pair<std::size_t, std::size_t>;

  GroupRingMatrix() = default;
  GroupRingMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::map<Index, GroupRingElement<C>>& entries() const noexcept { return entries_; }

  GroupRingElement<C> at(std::size_t r, std::size_t c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? GroupRingElement<C>{} : it->second;
  }
  void set(std::size_t r, std::size_t c, GroupRingElement<C> e) {
    if (r >= rows_ || c >= cols_) throw InvalidArgument("group-ring matrix index out of range");
    if (e.is_zero()) {
      entries_.erase({r, c});
    } else {
      entries_[{r, c}] = std::move(e);
    }
  }
  void add(std::size_t r, std::size_t c, const GroupRingElement<C>& e) { set(r, c, at(r, c) + e); }

  bool is_zero() const noexcept { return entries_.empty(); }

  friend bool operator==(const GroupRingMatrix& a, const GroupRingMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<Index, GroupRingElement<C>> entries_;
};

template <class C>
GroupRingMatrix<C> multiply(const GroupRingMatrix<C>& a, const GroupRingMatrix<C>& b, const RingConfig& cfg = {}) {
  if (a.cols() != b.rows()) throw InvalidArgument("group-ring matrix product: shape mismatch");
  GroupRingMatrix<C> r(a.rows(), b.cols());
  for (const auto& [ia, ea] : a.entries()) {
    for (const auto& [ib, eb] : b.entries()) {
      if (ia.second != ib.first) continue;
      r.add(ia.first, ib.second, multiply(ea, eb, cfg));
    }
  }
  return r;
}

// Transpose with each entry replaced by its involution.
template <class C>
GroupRingMatrix<C> involute(const GroupRingMatrix<C>& m) {
  GroupRingMatrix<C> r(m.cols(), m.rows());
  for (const auto& [idx, e] : m.entries()) r.set(idx.second, idx.first, involute(e));
  return r;
}

// The operator d*d on (i+1)-chains for a boundary d: C_{i+1} -> C_i. In the
// row-vector convention this is the matrix product d * involute(d).
template <class C>
GroupRingMatrix<C> half_laplacian(const GroupRingMatrix<C>& d, const RingConfig& cfg = {}) {
  return multiply(d, involute(d), cfg);
}

template <class C>
GroupRingMatrix<C> identity_matrix(std::size_t n, const C& one) {
  GroupRingMatrix<C> r(n, n);
  for (std::size_t i = 0; i < n; ++i) r.set(i, i, GroupRingElement<C>::monomial(Word{}, one));
  return r;
}

template <class C>
std::size_t total_support(const GroupRingMatrix<C>& m) {
  std::size_t s = 0;
  for (const auto& [idx, e] : m.entries()) s += e.support_size();
  return s;
}

using IntElement = GroupRingElement<Integer>;
using IntMatrix = GroupRingMatrix<Integer>;

}  // namespace l2approx
