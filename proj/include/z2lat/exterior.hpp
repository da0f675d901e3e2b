#pragma once

#include <cstddef>

#include "z2lat/forms.hpp"

namespace z2lat {

/// A sublattice given by basis columns in ambient coordinates.
struct SublatticeEmbedding {
  SymBilinearForm ambient;
  IntMatrix basis;
  SymBilinearForm induced;  // basis^T * ambient * basis
  bool t_acts_as_minus_one = false;

  Integer index() const {
    require(basis.square(), ErrorKind::DimensionMismatch, "index of a non-square embedding");
    return abs(det(basis));
  }
};

inline SublatticeEmbedding make_embedding(const SymBilinearForm& ambient, const IntMatrix& basis) {
  require(basis.rows() == ambient.dim(), ErrorKind::DimensionMismatch,
          "embedding basis does not match the ambient rank");
  return {ambient, basis, pullback_by(ambient, basis), false};
}

/// Even-norm sublattice {x : b(x,x) = 0 mod 2}. Since x.x = sum b_ii x_i^2
/// = sum b_ii x_i (mod 2), this is the kernel of x -> diag(b).x mod 2.
inline SublatticeEmbedding exterior_nd_form(const SymBilinearForm& b) {
  require(b.is_nondegenerate(), ErrorKind::DegenerateForm, "exterior form of a degenerate form");
  const std::size_t n = b.dim();
  IntMatrix basis;
  if (b.is_even()) {
    basis = IntMatrix::identity(n);
  } else {
    IntVector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = mod_floor(b.gram()(i, i), 2);
    basis = congruence_sublattice(w, 2);
  }
  SublatticeEmbedding e = make_embedding(b, basis);
  e.t_acts_as_minus_one = true;
  return e;
}

/// Gram of the even part of (1)^h in the basis 2e_1, e_1 + e_i (i >= 2).
inline SymBilinearForm exterior_matrix_closed_form(std::size_t h) {
  require(h >= 1, ErrorKind::BadRank, "closed form needs h >= 1");
  IntMatrix g(h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      if (i == 0 && j == 0) g(i, j) = 4;
      else if (i == 0 || j == 0) g(i, j) = 2;
      else g(i, j) = i == j ? 2 : 1;
    }
  return SymBilinearForm(g);
}

}  // namespace z2lat
