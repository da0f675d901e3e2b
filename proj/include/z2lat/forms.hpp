#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "z2lat/exactlin.hpp"

namespace z2lat {

enum class Parity { Even, Odd };

inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

/// (positive, negative, zero) counts of a rational congruence diagonalization.
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

/// Inertia by symmetric Gaussian elimination over Q. A zero diagonal with a
/// nonzero off-diagonal entry is handled by adding the paired basis vector,
/// which turns the hyperbolic pair into a nonzero pivot.
inline Inertia inertia(const IntMatrix& gram) {
  RatMatrix a = to_rational(gram);
  const std::size_t n = a.rows();
  Inertia out;
  auto sym_swap = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
  };
  std::size_t k = 0;
  for (; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, p) == 0) ++p;
    if (p == n) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) break;
      // e_i += e_j
      a.add_row(pi, pj, Rational(1));
      a.add_col(pi, pj, Rational(1));
      p = pi;
    }
    sym_swap(k, p);
    const Rational pivot = a(k, k);
    if (pivot > 0) ++out.positive;
    else ++out.negative;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = a(i, k) / pivot;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) = 0;
      a(k, i) = 0;
    }
  }
  out.zero = n - out.positive - out.negative;
  return out;
}

/// Integral symmetric bilinear form given by its Gram matrix, with the
/// classical invariants computed once on construction.
class SymBilinearForm {
 public:
  SymBilinearForm() : SymBilinearForm(IntMatrix(0, 0)) {}
  explicit SymBilinearForm(IntMatrix gram) : gram_(std::move(gram)) {
    require(gram_.square(), ErrorKind::NonSquare, "Gram matrix must be square");
    require(gram_.is_symmetric(), ErrorKind::InvalidInput, "Gram matrix must be symmetric");
    det_ = z2lat::det(gram_);
    inertia_ = z2lat::inertia(gram_);
    even_ = true;
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      if (mpz_odd_p(gram_(i, i).get_mpz_t())) even_ = false;
  }

  const IntMatrix& gram() const noexcept { return gram_; }
  std::size_t dim() const noexcept { return gram_.rows(); }
  std::size_t rank() const noexcept { return inertia_.positive + inertia_.negative; }
  const Integer& determinant() const noexcept { return det_; }
  Parity parity() const noexcept { return even_ ? Parity::Even : Parity::Odd; }
  bool is_even() const noexcept { return even_; }
  bool is_odd() const noexcept { return !even_; }
  bool is_nondegenerate() const noexcept { return det_ != 0; }
  bool is_unimodular() const noexcept { return det_ == 1 || det_ == -1; }
  bool is_positive_definite() const noexcept { return inertia_.positive == dim(); }
  const Inertia& inertia() const noexcept { return inertia_; }

  long signature() const {
    require(is_nondegenerate(), ErrorKind::DegenerateForm, "signature of a degenerate form");
    return static_cast<long>(inertia_.positive) - static_cast<long>(inertia_.negative);
  }

  Integer operator()(const IntVector& x, const IntVector& y) const { return bilinear(gram_, x, y); }
  Integer norm(const IntVector& x) const { return bilinear(gram_, x, x); }

  friend bool operator==(const SymBilinearForm& a, const SymBilinearForm& b) {
    return a.gram_ == b.gram_;
  }

 private:
  IntMatrix gram_;
  Integer det_;
  Inertia inertia_;
  bool even_ = true;
};

inline long signature(const SymBilinearForm& f) { return f.signature(); }

inline SymBilinearForm direct_sum(const SymBilinearForm& f, const SymBilinearForm& g) {
  return SymBilinearForm(block_diagonal(f.gram(), g.gram()));
}

inline SymBilinearForm scaled(const SymBilinearForm& f, const Integer& s) {
  return SymBilinearForm(s * f.gram());
}

/// Transformed form with Gram T^T G T.
inline SymBilinearForm pullback_by(const SymBilinearForm& f, const IntMatrix& t) {
  return SymBilinearForm(congruence(f.gram(), t));
}

// ---------------------------------------------------------------------------
// Standard forms

inline SymBilinearForm diagonal_ones(std::size_t n) { return SymBilinearForm(IntMatrix::identity(n)); }

inline SymBilinearForm hyperbolic() { return SymBilinearForm(IntMatrix{{0, 1}, {1, 0}}); }

/// f plus n hyperbolic planes.
inline SymBilinearForm stabilize(const SymBilinearForm& f, std::size_t n) {
  SymBilinearForm out = f;
  for (std::size_t i = 0; i < n; ++i) out = direct_sum(out, hyperbolic());
  return out;
}

/// The even unimodular root lattice E8 (Cartan matrix of the E8 diagram:
/// a chain of seven nodes with the eighth attached to the third).
inline SymBilinearForm e8() {
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = 2;
  auto link = [&](std::size_t i, std::size_t j) {
    g(i, j) = -1;
    g(j, i) = -1;
  };
  for (std::size_t i = 0; i + 1 < 7; ++i) link(i, i + 1);
  link(2, 7);
  return SymBilinearForm(g);
}

/// E8 + (1)^k.
inline SymBilinearForm e8_plus_ones(std::size_t k) { return direct_sum(e8(), diagonal_ones(k)); }

// ---------------------------------------------------------------------------
// Characteristic vectors and stable classes

/// Some xi with xi.x = x.x (mod 2) for every x.
inline IntVector characteristic_vector(const SymBilinearForm& f) {
  const std::size_t n = f.dim();
  Mod2Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = mpz_odd_p(f.gram()(i, i).get_mpz_t()) ? 1 : 0;
  auto x = solve_mod2(f.gram(), rhs);
  require(x.has_value(), ErrorKind::DegenerateForm, "no characteristic vector (form singular mod 2)");
  IntVector xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = (*x)[i];
  return xi;
}

struct StableClass {
  std::size_t rank;
  long signature;
  Parity parity;

  friend bool operator==(const StableClass& a, const StableClass& b) {
    return a.rank == b.rank && a.signature == b.signature && a.parity == b.parity;
  }
};

/// (rank, signature, parity): a complete invariant for non-singular forms up
/// to stable isometry.
inline StableClass indefinite_stable_class(const SymBilinearForm& f) {
  require(f.is_unimodular(), ErrorKind::NotUnimodular, "stable class needs a non-singular form");
  return {f.rank(), f.signature(), f.parity()};
}

// ---------------------------------------------------------------------------
// Basis improvement for definite forms

struct ReducedBasis {
  SymBilinearForm form;  // Gram R^T G R
  IntMatrix transform;   // R, unimodular
};

/// Pairwise size reduction for a positive definite Gram matrix: while some
/// |2 b_i.b_j| > b_j.b_j, replace b_i by b_i - round(b_i.b_j / b_j.b_j) b_j.
/// Terminates because every step strictly lowers a norm. Columns are then
/// sorted by increasing norm (stable).
inline ReducedBasis pair_reduce(const SymBilinearForm& f) {
  require(f.is_positive_definite(), ErrorKind::UnsupportedIndefinite,
          "pair reduction needs a positive definite form");
  const std::size_t n = f.dim();
  IntMatrix g = f.gram();
  IntMatrix r = IntMatrix::identity(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (abs(2 * g(i, j)) <= g(j, j)) continue;
        Integer q = round_div(g(i, j), g(j, j));
        if (q == 0) continue;
        // b_i <- b_i - q b_j
        r.add_col(i, j, -q);
        g.add_col(i, j, -q);
        g.add_row(i, j, -q);
        changed = true;
      }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g(a, a) < g(b, b); });
  IntMatrix p(n, n);
  for (std::size_t j = 0; j < n; ++j) p(order[j], j) = 1;
  return {SymBilinearForm(congruence(g, p)), r * p};
}

}  // namespace z2lat
