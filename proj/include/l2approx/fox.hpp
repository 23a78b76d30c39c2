#pragma once

#include <cstddef>
#include <vector>

#include "l2approx/group_ring.hpp"
#include "l2approx/word.hpp"

namespace l2approx {

// Free differential calculus in Z[F]: d(uv)/dg = du/dg + u dv/dg.
IntElement fox_derivative(const Word& w, std::size_t generator);

// A finite free Z[pi]-chain complex given by boundary matrices.
// boundaries[j] is d_{j+1}: C_{j+1} -> C_j (rows = #(j+1)-cells, cols = #j-cells).
struct GroupComplex {
  Presentation presentation;
  std::vector<IntMatrix> boundaries;

  std::size_t top_degree() const { return boundaries.size(); }
  // Number of cells in degree j.
  std::size_t cells(std::size_t j) const;
  RingConfig ring_config(std::size_t support_cap = 1'000'000) const;

  friend bool operator==(const GroupComplex& a, const GroupComplex& b) {
    return a.presentation == b.presentation && a.boundaries == b.boundaries;
  }
};

// Cellular chain complex of the universal cover of the presentation 2-complex:
// d_1 has row (g - 1) for each generator g, d_2 has row (dr/dg)_g for each
// relator r. The 2-cell block is omitted when there are no relators.
GroupComplex presentation_complex(const Presentation& p);

// Throws NotAComplex unless consecutive products d_{j+1} d_j vanish in Z[F]
// (after the free-abelian normal form when applicable). Only meaningful as a
// symbolic check when composition vanishes already in the free group, which
// holds for presentation complexes by the fundamental identity.
void verify_complex(const GroupComplex& c);

// sum_g (dr/dg)(g - 1); equals r - 1 for every word r.
IntElement fox_fundamental_lhs(const Word& r, std::size_t generators);

// Integer polynomial c_0 + c_1 t + ... in one variable.
using TPoly = std::vector<Integer>;

// Fox Jacobian pushed through g -> t^{weights[g]}; each entry is shifted by a
// power of t so that it is an ordinary polynomial (harmless up to units).
std::vector<std::vector<TPoly>> abelianized_jacobian(const Presentation& p, const std::vector<long>& weights);

// gcd over Q[t] of the (n-1)-minors of the abelianised Jacobian, normalised
// to a primitive integer polynomial with nonzero constant term and positive
// leading coefficient. Zero when the minors all vanish. Throws DegreeCap for
// more than six generators.
TPoly alexander_polynomial(const Presentation& p, const std::vector<long>& weights);

// Normal form up to units +-t^k of Z[t, t^-1].
TPoly normalize_up_to_units(TPoly f);

}  // namespace l2approx
