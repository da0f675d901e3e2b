#pragma once

// Discriminant groups coker(A) in Smith coordinates, quadratic linking forms
// on them, isometry search, and lifting automorphisms from coker(A) to
// coker(2A).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "z2lat/exactlin.hpp"

namespace z2lat {

/// coker(A) = Z^n / A Z^n for a non-singular square A, as a sum of cyclic
/// groups Z/d_i (d_i >= 2). The class of z has coordinates (U z)_i mod d_i
/// where U A V = D is the Smith decomposition of the presenting matrix
/// (possibly a multiple of the matrix whose decomposition is stored).
class FiniteAbelianGroup {
 public:
  using Element = std::vector<Integer>;

  FiniteAbelianGroup() = default;

  /// coker(A).
  static FiniteAbelianGroup cokernel(const IntMatrix& a) { return cokernel_scaled(a, 1); }

  /// coker(s A), presented through the Smith transforms of A itself, so that
  /// coordinates of coker(sA) reduce to those of coker(A) factor by factor.
  static FiniteAbelianGroup cokernel_scaled(const IntMatrix& a, const Integer& s) {
    require(a.square(), ErrorKind::NonSquare, "discriminant group of a non-square matrix");
    require(s >= 1, ErrorKind::InvalidInput, "scale must be positive");
    require(det(a) != 0, ErrorKind::SingularMatrix, "discriminant group of a singular matrix");
    FiniteAbelianGroup g;
    g.base_ = a;
    g.matrix_ = s * a;
    g.scale_ = s;
    g.smith_ = smith_normal_form(a);
    g.u_inverse_ = unimodular_inverse(g.smith_.U);
    const auto diag = g.smith_.diagonal();
    for (std::size_t i = 0; i < diag.size(); ++i) {
      Integer d = s * diag[i];
      if (d > 1) {
        g.positions_.push_back(i);
        g.factors_.push_back(d);
      }
    }
    return g;
  }

  /// Presenting matrix (s A).
  const IntMatrix& matrix() const noexcept { return matrix_; }
  const IntMatrix& base_matrix() const noexcept { return base_; }
  const Integer& scale() const noexcept { return scale_; }
  const SmithDecomposition& smith() const noexcept { return smith_; }
  /// Invariant factors d_1 | d_2 | ... (all >= 2).
  const std::vector<Integer>& invariants() const noexcept { return factors_; }
  /// Index in the full Smith diagonal of each kept factor.
  const std::vector<std::size_t>& positions() const noexcept { return positions_; }
  std::size_t rank() const noexcept { return factors_.size(); }

  Integer order() const {
    Integer o = 1;
    for (const auto& d : factors_) o *= d;
    return o;
  }

  Element project(const IntVector& z) const {
    IntVector uz = smith_.U * z;
    Element a(rank());
    for (std::size_t i = 0; i < rank(); ++i) a[i] = mod_floor(uz[positions_[i]], factors_[i]);
    return a;
  }

  /// Representative z in Z^n of the class with coordinates a.
  IntVector lift(const Element& a) const {
    IntVector full(base_.rows());
    for (std::size_t i = 0; i < rank(); ++i) full[positions_[i]] = a[i];
    return u_inverse_ * full;
  }

  /// U^{-1} restricted to the kept coordinates (columns).
  IntMatrix lift_matrix() const {
    IntMatrix e(base_.rows(), rank());
    for (std::size_t i = 0; i < rank(); ++i) e(positions_[i], i) = 1;
    return u_inverse_ * e;
  }

  Element reduce(Element a) const {
    for (std::size_t i = 0; i < rank(); ++i) a[i] = mod_floor(a[i], factors_[i]);
    return a;
  }
  Element add(const Element& a, const Element& b) const {
    Element c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = mod_floor(a[i] + b[i], factors_[i]);
    return c;
  }
  Element generator(std::size_t i) const {
    Element e(rank());
    e[i] = 1;
    return e;
  }
  Element zero() const { return Element(rank()); }

  Integer element_order(const Element& a) const {
    Integer o = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
      Integer g = gcd(a[i], factors_[i]);
      Integer oi = factors_[i] / g;
      o = lcm(o, oi);
    }
    return o;
  }

  /// Image of a under the coordinate matrix m (columns: images of the
  /// generators of the source group).
  Element apply(const IntMatrix& m, const Element& a) const {
    require(m.rows() == rank() && m.cols() == a.size(), ErrorKind::DimensionMismatch,
            "group map does not match the group");
    return reduce(m * a);
  }

  /// Calls visit(a) on every element, in mixed-radix order.
  void for_each(const std::function<void(const Element&)>& visit) const {
    Element a(rank());
    for (;;) {
      visit(a);
      std::size_t i = 0;
      while (i < rank() && a[i] + 1 == factors_[i]) a[i++] = 0;
      if (i == rank()) return;
      ++a[i];
    }
  }

  friend bool same_invariants(const FiniteAbelianGroup& x, const FiniteAbelianGroup& y) {
    return x.factors_ == y.factors_;
  }

 private:
  IntMatrix base_, matrix_;
  Integer scale_ = 1;
  SmithDecomposition smith_;
  IntMatrix u_inverse_;
  std::vector<std::size_t> positions_;
  std::vector<Integer> factors_;
};

inline FiniteAbelianGroup discriminant_group(const IntMatrix& a) { return FiniteAbelianGroup::cokernel(a); }

/// Q with Q + Q^T = A: strict upper triangle plus half the diagonal.
struct QuadraticRefinement {
  IntMatrix Q;
};

inline QuadraticRefinement quadratic_refinement(const IntMatrix& a) {
  require(a.square(), ErrorKind::NonSquare, "refinement of a non-square matrix");
  require(a.is_symmetric(), ErrorKind::InvalidInput, "refinement of a non-symmetric matrix");
  const std::size_t n = a.rows();
  IntMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    require(mpz_even_p(a(i, i).get_mpz_t()), ErrorKind::NotEven, "diagonal entry is odd");
    q(i, i) = a(i, i) / 2;
    for (std::size_t j = i + 1; j < n; ++j) q(i, j) = a(i, j);
  }
  return {q};
}

/// q(pi(z)) = z^T A^{-T} Q A^{-1} z mod 1 on coker(A), evaluated in Smith
/// coordinates as a^T (W^T Q W) a with W = A^{-1} U^{-1} restricted.
class QuadraticLinkingForm {
 public:
  using Element = FiniteAbelianGroup::Element;

  QuadraticLinkingForm() = default;
  QuadraticLinkingForm(FiniteAbelianGroup group, const IntMatrix& q) : group_(std::move(group)) {
    const IntMatrix& a = group_.matrix();
    require(q.rows() == a.rows() && q.cols() == a.cols(), ErrorKind::DimensionMismatch,
            "refinement does not match the form");
    require(q + q.transpose() == a, ErrorKind::NotEven, "Q + Q^T differs from A");
    const RatMatrix w = rational_inverse(a) * to_rational(group_.lift_matrix());
    const RatMatrix wt = w.transpose();
    set_scaled(wt * to_rational(q) * w, q_num_, q_den_);
    set_scaled(wt * to_rational(a) * w, b_num_, b_den_);
    verify_well_defined();
  }

  const FiniteAbelianGroup& group() const noexcept { return group_; }

  Rational q(const Element& a) const { return evaluate(q_num_, q_den_, a, a); }
  Rational b(const Element& x, const Element& y) const { return evaluate(b_num_, b_den_, x, y); }

  /// Value multiset, as a sorted list.
  std::vector<Rational> value_multiset() const {
    std::vector<Rational> v;
    group_.for_each([&](const Element& a) { v.push_back(q(a)); });
    std::sort(v.begin(), v.end());
    return v;
  }

 private:
  static void set_scaled(const RatMatrix& m, IntMatrix& num, Integer& den) {
    den = 1;
    for (const auto& x : m.data()) den = lcm(den, x.get_den());
    num = IntMatrix(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Rational s = m(i, j) * den;
        num(i, j) = s.get_num();
      }
  }

  static Rational evaluate(const IntMatrix& num, const Integer& den, const Element& x, const Element& y) {
    Integer s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      Integer row = 0;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y[j] != 0) row += num(i, j) * y[j];
      s += x[i] * row;
    }
    Rational r(mod_floor(s, den), den);
    r.canonicalize();
    return r;
  }

  // q(d_i e_i) = 0 and b(d_i e_i, e_j) = 0 for every pair of generators
  void verify_well_defined() const {
    for (std::size_t i = 0; i < group_.rank(); ++i) {
      Element di(group_.rank());
      di[i] = group_.invariants()[i];
      require(q(di) == 0, ErrorKind::InvalidInput, "quadratic form not well defined on the group");
      for (std::size_t j = 0; j < group_.rank(); ++j)
        require(b(di, group_.generator(j)) == 0, ErrorKind::InvalidInput,
                "linking pairing not well defined on the group");
    }
  }

  FiniteAbelianGroup group_;
  IntMatrix q_num_, b_num_;
  Integer q_den_ = 1, b_den_ = 1;
};

inline QuadraticLinkingForm boundary_linking_form(const IntMatrix& a, const QuadraticRefinement& r) {
  return QuadraticLinkingForm(FiniteAbelianGroup::cokernel(a), r.Q);
}

/// The form of sA with refinement sQ, on coker(sA) presented through the
/// Smith transforms of A.
inline QuadraticLinkingForm scaled_linking_form(const IntMatrix& a, const QuadraticRefinement& r, const Integer& s) {
  return QuadraticLinkingForm(FiniteAbelianGroup::cokernel_scaled(a, s), s * r.Q);
}

/// Maps between discriminant groups are coordinate matrices: column i is the
/// image of generator i.
inline bool is_group_isomorphism(const FiniteAbelianGroup& src, const FiniteAbelianGroup& dst, const IntMatrix& m) {
  if (m.rows() != dst.rank() || m.cols() != src.rank() || src.order() != dst.order()) return false;
  for (std::size_t i = 0; i < src.rank(); ++i) {
    auto img = dst.apply(m, src.generator(i));
    if (src.invariants()[i] % dst.element_order(img) != 0) return false;
  }
  // injective: only zero maps to zero
  bool injective = true;
  src.for_each([&](const FiniteAbelianGroup::Element& a) {
    if (!injective) return;
    auto img = dst.apply(m, a);
    if (std::all_of(img.begin(), img.end(), [](const Integer& x) { return x == 0; }) &&
        !std::all_of(a.begin(), a.end(), [](const Integer& x) { return x == 0; }))
      injective = false;
  });
  return injective;
}

/// q2(m a) = q1(a) for every element a, and m bijective.
inline bool is_linking_isometry(const QuadraticLinkingForm& q1, const QuadraticLinkingForm& q2, const IntMatrix& m) {
  if (!is_group_isomorphism(q1.group(), q2.group(), m)) return false;
  bool ok = true;
  q1.group().for_each([&](const FiniteAbelianGroup::Element& a) {
    if (ok && q2.q(q2.group().apply(m, a)) != q1.q(a)) ok = false;
  });
  return ok;
}

constexpr long kMaxLinkingSearchOrder = 1L << 13;

/// A group isomorphism m with q2(m x) = q1(x), or nullopt. Generator images
/// are chosen by backtracking; the identity is tried first when the groups
/// have the same invariants.
inline std::optional<IntMatrix> linking_isometry_search(const QuadraticLinkingForm& q1, const QuadraticLinkingForm& q2) {
  const FiniteAbelianGroup &g1 = q1.group(), &g2 = q2.group();
  require(g1.order() <= kMaxLinkingSearchOrder && g2.order() <= kMaxLinkingSearchOrder, ErrorKind::TooLarge,
          "linking form search limited to groups of order 2^13");
  if (!same_invariants(g1, g2)) return std::nullopt;
  if (q1.value_multiset() != q2.value_multiset()) return std::nullopt;
  const std::size_t k = g1.rank();
  IntMatrix identity = IntMatrix::identity(k);
  if (is_linking_isometry(q1, q2, identity)) return identity;

  std::vector<FiniteAbelianGroup::Element> all;
  g2.for_each([&](const FiniteAbelianGroup::Element& x) { all.push_back(x); });
  std::vector<std::vector<std::size_t>> cand(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto gi = g1.generator(i);
    const Rational qi = q1.q(gi);
    for (std::size_t t = 0; t < all.size(); ++t)
      if (g2.element_order(all[t]) == g1.invariants()[i] && q2.q(all[t]) == qi) cand[i].push_back(t);
  }
  std::vector<std::size_t> chosen(k);
  std::optional<IntMatrix> found;
  std::function<bool(std::size_t)> descend = [&](std::size_t i) -> bool {
    if (i == k) {
      IntMatrix m(k, k);
      for (std::size_t j = 0; j < k; ++j) m.set_column(j, all[chosen[j]]);
      if (!is_linking_isometry(q1, q2, m)) return false;
      found = m;
      return true;
    }
    for (std::size_t t : cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = q2.b(all[chosen[j]], all[t]) == q1.b(g1.generator(j), g1.generator(i));
      if (!ok) continue;
      chosen[i] = t;
      if (descend(i + 1)) return true;
    }
    return false;
  };
  descend(0);
  return found;
}

struct LiftedIsometry {
  IntMatrix matrix;           // on the coordinates of coker(2 A_u) -> coker(2 A_b)
  bool naive_lift = false;    // block-diagonal lift was already an isometry
  bool commutes = false;      // reduction square checked on every element
  bool isometry = false;      // q_2b(lift a) = q_2u(a) checked on every element
  bool half_relation = false; // 2 q_2(a) = q(reduction of a) on both sides
};

/// Reduction coker(2A) -> coker(A) in coordinates.
inline FiniteAbelianGroup::Element reduce_to_base(const FiniteAbelianGroup& doubled, const FiniteAbelianGroup& base,
                                                  const FiniteAbelianGroup::Element& a) {
  FiniteAbelianGroup::Element out(base.rank());
  for (std::size_t i = 0; i < base.rank(); ++i) {
    const std::size_t pos = base.positions()[i];
    auto it = std::find(doubled.positions().begin(), doubled.positions().end(), pos);
    out[i] = mod_floor(a[static_cast<std::size_t>(it - doubled.positions().begin())], base.invariants()[i]);
  }
  return out;
}

/// Lifts psi : (coker A_u, q_u) -> (coker A_b, q_b) to an isometry of the
/// doubled forms compatible with reduction. The block-diagonal lift
/// (identity on the Z/2 summands coming from unit factors, psi on the rest)
/// is tried first; otherwise generator images are searched within the
/// fibres of reduction over that lift.
inline LiftedIsometry lift_isometry_mod2(const IntMatrix& psi, const IntMatrix& a_u, const IntMatrix& a_b) {
  const QuadraticRefinement r_u = quadratic_refinement(a_u), r_b = quadratic_refinement(a_b);
  const QuadraticLinkingForm q_u = boundary_linking_form(a_u, r_u), q_b = boundary_linking_form(a_b, r_b);
  require(same_invariants(q_u.group(), q_b.group()), ErrorKind::IncompatibleCokernels,
          "cokernels have different invariant factors");
  require(q_u.group().positions() == q_b.group().positions(), ErrorKind::IncompatibleCokernels,
          "cokernels have different Smith shapes");
  require(is_group_isomorphism(q_u.group(), q_b.group(), psi), ErrorKind::InvalidInput,
          "psi is not a group isomorphism");
  const QuadraticLinkingForm q2u = scaled_linking_form(a_u, r_u, 2), q2b = scaled_linking_form(a_b, r_b, 2);
  const FiniteAbelianGroup &g2u = q2u.group(), &g2b = q2b.group();
  const FiniteAbelianGroup &gu = q_u.group(), &gb = q_b.group();
  const std::size_t n = g2u.rank();

  LiftedIsometry out;
  IntMatrix naive = IntMatrix::identity(n);
  for (std::size_t i = 0; i < gu.rank(); ++i)
    for (std::size_t j = 0; j < gu.rank(); ++j) {
      const std::size_t pi = static_cast<std::size_t>(
          std::find(g2u.positions().begin(), g2u.positions().end(), gu.positions()[i]) - g2u.positions().begin());
      const std::size_t pj = static_cast<std::size_t>(
          std::find(g2u.positions().begin(), g2u.positions().end(), gu.positions()[j]) - g2u.positions().begin());
      naive(pi, pj) = psi(i, j);
    }
  out.matrix = naive;
  out.naive_lift = is_linking_isometry(q2u, q2b, naive);

  if (!out.naive_lift) {
    // fibre of reduction over zero: coordinates that are multiples of the base factor
    std::vector<FiniteAbelianGroup::Element> kernel;
    g2b.for_each([&](const FiniteAbelianGroup::Element& x) {
      auto r = reduce_to_base(g2b, gb, x);
      if (std::all_of(r.begin(), r.end(), [](const Integer& c) { return c == 0; })) kernel.push_back(x);
    });
    std::vector<FiniteAbelianGroup::Element> images(n);
    std::optional<IntMatrix> found;
    std::function<bool(std::size_t)> descend = [&](std::size_t i) -> bool {
      if (i == n) {
        IntMatrix m(n, n);
        for (std::size_t j = 0; j < n; ++j) m.set_column(j, images[j]);
        if (!is_linking_isometry(q2u, q2b, m)) return false;
        found = m;
        return true;
      }
      const auto gi = g2u.generator(i);
      const auto base = g2b.apply(naive, gi);
      for (const auto& k : kernel) {
        auto x = g2b.add(base, k);
        if (g2u.invariants()[i] % g2b.element_order(x) != 0) continue;
        if (q2b.q(x) != q2u.q(gi)) continue;
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j) ok = q2b.b(images[j], x) == q2u.b(g2u.generator(j), gi);
        if (!ok) continue;
        images[i] = x;
        if (descend(i + 1)) return true;
      }
      return false;
    };
    descend(0);
    if (found) out.matrix = *found;
  }

  out.isometry = is_linking_isometry(q2u, q2b, out.matrix);
  bool commutes = true, half = true;
  g2u.for_each([&](const FiniteAbelianGroup::Element& a) {
    const auto down = reduce_to_base(g2u, gu, a);
    const auto lifted = g2b.apply(out.matrix, a);
    if (reduce_to_base(g2b, gb, lifted) != gb.apply(psi, down)) commutes = false;
    if (frac(2 * q2u.q(a)) != q_u.q(down)) half = false;
    if (frac(2 * q2b.q(lifted)) != q_b.q(reduce_to_base(g2b, gb, lifted))) half = false;
  });
  out.commutes = commutes;
  out.half_relation = half;
  return out;
}

}  // namespace z2lat
