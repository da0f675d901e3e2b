#pragma once

// Hermitian forms over the group ring L = Z[Z/2] = Z[T]/(T^2 - 1), on modules
// Z+^a + Z-^b + L^c (T acts as +1, -1, and freely). The involution fixes T,
// so hermitian means symmetric.

#include <cstddef>
#include <ostream>
#include <vector>

#include "z2lat/forms.hpp"
#include "z2lat/isometry.hpp"

namespace z2lat {

/// p + qT.
struct GroupRingElement {
  Integer p, q;

  GroupRingElement() = default;
  GroupRingElement(long p_) : p(p_), q(0) {}
  GroupRingElement(Integer p_, Integer q_) : p(std::move(p_)), q(std::move(q_)) {}

  static GroupRingElement t() { return {0, 1}; }

  /// Image in Z+ = L/(1 - T).
  Integer plus() const { return p + q; }
  /// Image in Z- = L/(1 + T).
  Integer minus() const { return p - q; }
  GroupRingElement conj() const { return *this; }

  GroupRingElement& operator+=(const GroupRingElement& o) {
    p += o.p;
    q += o.q;
    return *this;
  }
  GroupRingElement& operator-=(const GroupRingElement& o) {
    p -= o.p;
    q -= o.q;
    return *this;
  }
  GroupRingElement& operator*=(const GroupRingElement& o) { return *this = *this * o; }
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator-(const GroupRingElement& a) { return {-a.p, -a.q}; }
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    return {a.p * b.p + a.q * b.q, a.p * b.q + a.q * b.p};
  }
  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.p == b.p && a.q == b.q;
  }
  friend bool operator!=(const GroupRingElement& a, const GroupRingElement& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const GroupRingElement& x) {
    return os << x.p << (x.q < 0 ? "" : "+") << x.q << "T";
  }
};

using LambdaMatrix = Matrix<GroupRingElement>;

enum class Summand { Plus, Minus, Free };

struct LambdaModule {
  std::size_t a = 0, b = 0, c = 0;

  std::size_t generators() const { return a + b + c; }
  std::size_t plus_rank() const { return a + c; }
  std::size_t minus_rank() const { return b + c; }
  std::size_t underlying_rank() const { return a + b + 2 * c; }

  Summand type(std::size_t i) const {
    if (i < a) return Summand::Plus;
    if (i < a + b) return Summand::Minus;
    return Summand::Free;
  }
  /// Position of generator i in the plus part (Z+ then free), or npos.
  std::size_t plus_index(std::size_t i) const {
    switch (type(i)) {
      case Summand::Plus: return i;
      case Summand::Free: return i - b;
      default: return npos;
    }
  }
  /// Position of generator i in the minus part (Z- then free), or npos.
  std::size_t minus_index(std::size_t i) const {
    switch (type(i)) {
      case Summand::Minus: return i - a;
      case Summand::Free: return i - a;
      default: return npos;
    }
  }

  friend bool operator==(const LambdaModule& x, const LambdaModule& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

class HermitianForm {
 public:
  HermitianForm() = default;
  HermitianForm(LambdaModule module, LambdaMatrix gram) : module_(module), gram_(std::move(gram)) {
    const std::size_t n = module_.generators();
    require(gram_.rows() == n && gram_.cols() == n, ErrorKind::DimensionMismatch,
            "hermitian gram does not match the module");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const GroupRingElement& x = gram_(i, j);
        require(x == gram_(j, i).conj(), ErrorKind::InvalidInput, "gram is not hermitian");
        const Summand si = module_.type(i), sj = module_.type(j);
        if (si == Summand::Plus || sj == Summand::Plus)
          require(x.p == x.q, ErrorKind::InvalidInput, "entries on a Z+ summand must be multiples of 1+T");
        if (si == Summand::Minus || sj == Summand::Minus)
          require(x.p == -x.q, ErrorKind::InvalidInput, "entries on a Z- summand must be multiples of 1-T");
      }
  }

  const LambdaModule& module() const noexcept { return module_; }
  const LambdaMatrix& gram() const noexcept { return gram_; }

  friend bool operator==(const HermitianForm& x, const HermitianForm& y) {
    return x.module_ == y.module_ && x.gram_ == y.gram_;
  }

 private:
  LambdaModule module_;
  LambdaMatrix gram_;
};

struct FormParts {
  SymBilinearForm plus;   // on Z+^(a+c)
  SymBilinearForm minus;  // on Z-^(b+c)
};

/// lambda+ and lambda- : apply T -> 1 and T -> -1 entrywise.
inline FormParts plus_minus_parts(const HermitianForm& lambda) {
  const LambdaModule& m = lambda.module();
  IntMatrix plus(m.plus_rank(), m.plus_rank()), minus(m.minus_rank(), m.minus_rank());
  for (std::size_t i = 0; i < m.generators(); ++i)
    for (std::size_t j = 0; j < m.generators(); ++j) {
      const GroupRingElement& x = lambda.gram()(i, j);
      const std::size_t pi = m.plus_index(i), pj = m.plus_index(j);
      if (pi != LambdaModule::npos && pj != LambdaModule::npos) plus(pi, pj) = x.plus();
      const std::size_t mi = m.minus_index(i), mj = m.minus_index(j);
      if (mi != LambdaModule::npos && mj != LambdaModule::npos) minus(mi, mj) = x.minus();
    }
  return {SymBilinearForm(plus), SymBilinearForm(minus)};
}

/// Reduction mod 2 of the block of a part belonging to the free summands
/// (its last c rows and columns).
inline IntMatrix two_part(const SymBilinearForm& part, const LambdaModule& module) {
  const std::size_t c = module.c;
  require(part.dim() >= c, ErrorKind::DimensionMismatch, "part smaller than the free block");
  const std::size_t off = part.dim() - c;
  return reduce_mod(part.gram().submatrix(off, off, c, c), 2);
}

/// beta^{-1} acting on the free block of the plus part: the plus form in
/// the coordinates where the bottom map is plain reduction mod 2.
inline SymBilinearForm plus_in_canonical_coordinates(const SymBilinearForm& plus, const LambdaModule& module,
                                                      const IntMatrix& beta) {
  require(beta.rows() == module.c && beta.cols() == module.c, ErrorKind::DimensionMismatch,
          "beta must act on the free block");
  IntMatrix t = block_diagonal(IntMatrix::identity(module.a), unimodular_inverse(beta));
  return pullback_by(plus, t);
}

/// The unique hermitian form with the given parts:
/// lambda = ((1+T) lambda+ + (1-T) lambda-) / 2.
inline HermitianForm pullback(const SymBilinearForm& plus_in, const SymBilinearForm& minus,
                              const LambdaModule& m, const IntMatrix& beta) {
  require(plus_in.dim() == m.plus_rank() && minus.dim() == m.minus_rank(), ErrorKind::DimensionMismatch,
          "parts do not match the module");
  const SymBilinearForm plus = plus_in_canonical_coordinates(plus_in, m, beta);
  const std::size_t n = m.generators();
  LambdaMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t pi = m.plus_index(i), pj = m.plus_index(j);
      const std::size_t mi = m.minus_index(i), mj = m.minus_index(j);
      const bool has_plus = pi != LambdaModule::npos && pj != LambdaModule::npos;
      const bool has_minus = mi != LambdaModule::npos && mj != LambdaModule::npos;
      const Integer p = has_plus ? plus.gram()(pi, pj) : Integer(0);
      const Integer q = has_minus ? minus.gram()(mi, mj) : Integer(0);
      require(mpz_even_p(Integer(p - q).get_mpz_t()), ErrorKind::PullbackMismatch,
              "parts disagree mod 2 at entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      g(i, j) = GroupRingElement((p + q) / 2, (p - q) / 2);
    }
  return HermitianForm(m, g);
}

inline HermitianForm pullback(const SymBilinearForm& plus, const SymBilinearForm& minus, const LambdaModule& m) {
  return pullback(plus, minus, m, IntMatrix::identity(m.c));
}

/// H(L): module (0,0,2), gram [[0,1],[1,0]].
inline HermitianForm hyperbolic_lambda() {
  return HermitianForm({0, 0, 2}, LambdaMatrix{{GroupRingElement(0), GroupRingElement(1)},
                                               {GroupRingElement(1), GroupRingElement(0)}});
}

/// Position of each generator of x and y inside the canonical order of x + y.
struct SumLayout {
  std::vector<std::size_t> left, right;
};

inline SumLayout sum_layout(const LambdaModule& x, const LambdaModule& y) {
  SumLayout s;
  for (std::size_t i = 0; i < x.generators(); ++i) {
    switch (x.type(i)) {
      case Summand::Plus: s.left.push_back(i); break;
      case Summand::Minus: s.left.push_back(y.a + i); break;
      case Summand::Free: s.left.push_back(y.a + y.b + i); break;
    }
  }
  for (std::size_t j = 0; j < y.generators(); ++j) {
    switch (y.type(j)) {
      case Summand::Plus: s.right.push_back(x.a + j); break;
      case Summand::Minus: s.right.push_back(x.a + x.b + j); break;
      case Summand::Free: s.right.push_back(x.a + x.b + x.c + j); break;
    }
  }
  return s;
}

/// Orthogonal sum, regrouped into canonical summand order.
inline HermitianForm direct_sum(const HermitianForm& x, const HermitianForm& y) {
  const LambdaModule m{x.module().a + y.module().a, x.module().b + y.module().b, x.module().c + y.module().c};
  const SumLayout s = sum_layout(x.module(), y.module());
  LambdaMatrix g(m.generators(), m.generators());
  for (std::size_t i = 0; i < s.left.size(); ++i)
    for (std::size_t j = 0; j < s.left.size(); ++j) g(s.left[i], s.left[j]) = x.gram()(i, j);
  for (std::size_t i = 0; i < s.right.size(); ++i)
    for (std::size_t j = 0; j < s.right.size(); ++j) g(s.right[i], s.right[j]) = y.gram()(i, j);
  return HermitianForm(m, g);
}

inline HermitianForm stabilize(const HermitianForm& x, std::size_t n) {
  HermitianForm out = x;
  for (std::size_t i = 0; i < n; ++i) out = direct_sum(out, hyperbolic_lambda());
  return out;
}

/// Permutation P with parts(x + y)_plus = P^T (x_plus + y_plus) P; likewise
/// for the minus parts with minus = true.
inline IntMatrix part_sum_permutation(const LambdaModule& x, const LambdaModule& y, bool minus) {
  const SumLayout s = sum_layout(x, y);
  const LambdaModule m{x.a + y.a, x.b + y.b, x.c + y.c};
  auto index = [&](const LambdaModule& mod, std::size_t i) {
    return minus ? mod.minus_index(i) : mod.plus_index(i);
  };
  const std::size_t n = minus ? m.minus_rank() : m.plus_rank();
  IntMatrix p(n, n);
  for (std::size_t i = 0; i < x.generators(); ++i) {
    const std::size_t src = index(x, i);
    if (src != LambdaModule::npos) p(src, index(m, s.left[i])) = 1;
  }
  const std::size_t offset = minus ? x.minus_rank() : x.plus_rank();
  for (std::size_t j = 0; j < y.generators(); ++j) {
    const std::size_t src = index(y, j);
    if (src != LambdaModule::npos) p(offset + src, index(m, s.right[j])) = 1;
  }
  return p;
}

/// The Z-valued form on the underlying free abelian group, basis: Z+
/// generators, Z- generators, then (f, Tf) for each free generator. Its
/// entries are the coefficients of 1 in lambda.
inline SymBilinearForm underlying_form(const HermitianForm& lambda) {
  const LambdaModule& m = lambda.module();
  std::vector<std::pair<std::size_t, bool>> basis;  // generator, multiplied by T
  for (std::size_t i = 0; i < m.a + m.b; ++i) basis.push_back({i, false});
  for (std::size_t i = m.a + m.b; i < m.generators(); ++i) {
    basis.push_back({i, false});
    basis.push_back({i, true});
  }
  IntMatrix g(basis.size(), basis.size());
  for (std::size_t u = 0; u < basis.size(); ++u)
    for (std::size_t v = 0; v < basis.size(); ++v) {
      GroupRingElement x = lambda.gram()(basis[u].first, basis[v].first);
      if (basis[u].second != basis[v].second) x = GroupRingElement::t() * x;
      g(u, v) = x.p;
    }
  return SymBilinearForm(g);
}

/// A L-linear map given by its matrix on generators (columns are images of
/// source generators in target coordinates).
struct HermitianIsometry {
  LambdaMatrix matrix;
};

/// R^T lambda' R, the pullback of the target form along R.
inline LambdaMatrix pull_back_gram(const LambdaMatrix& target_gram, const LambdaMatrix& r) {
  LambdaMatrix rt(r.cols(), r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) rt(j, i) = r(i, j).conj();
  return rt * target_gram * r;
}

/// Checks that R maps source to target isometrically and respects the
/// summand types (images of Z+ generators are T-fixed, of Z- generators
/// T-negated).
inline bool verify_hermitian_isometry(const HermitianForm& source, const HermitianForm& target,
                                      const LambdaMatrix& r) {
  const LambdaModule &ms = source.module(), &mt = target.module();
  if (r.rows() != mt.generators() || r.cols() != ms.generators()) return false;
  for (std::size_t j = 0; j < ms.generators(); ++j) {
    const Summand s = ms.type(j);
    for (std::size_t i = 0; i < mt.generators(); ++i) {
      const GroupRingElement& x = r(i, j);
      const Summand t = mt.type(i);
      if (s == Summand::Plus && t == Summand::Free && x.p != x.q) return false;
      if (s == Summand::Minus && t == Summand::Free && x.p != -x.q) return false;
      if (s == Summand::Plus && t == Summand::Minus && x.minus() != 0) return false;
      if (s == Summand::Minus && t == Summand::Plus && x.plus() != 0) return false;
    }
  }
  LambdaMatrix pulled = pull_back_gram(target.gram(), r);
  for (std::size_t i = 0; i < ms.generators(); ++i)
    for (std::size_t j = 0; j < ms.generators(); ++j)
      if (pulled(i, j) != source.gram()(i, j)) return false;
  return true;
}

/// Glue isometries of the parts into a L-isometry source -> target, using
/// (a, b) -> ((1+T) a + (1-T) b) / 2 on free coordinates. alpha_plus and
/// alpha_minus map source part coordinates to target part coordinates:
/// alpha^T target_part alpha = source_part.
inline HermitianIsometry glue_isometry(const HermitianForm& source, const HermitianForm& target,
                                       const IntMatrix& alpha_plus, const IntMatrix& alpha_minus) {
  const LambdaModule &ms = source.module(), &mt = target.module();
  require(alpha_plus.rows() == mt.plus_rank() && alpha_plus.cols() == ms.plus_rank() &&
              alpha_minus.rows() == mt.minus_rank() && alpha_minus.cols() == ms.minus_rank(),
          ErrorKind::DimensionMismatch, "part isometries do not match the modules");
  LambdaMatrix r(mt.generators(), ms.generators());
  for (std::size_t j = 0; j < ms.generators(); ++j) {
    IntVector a(mt.plus_rank()), b(mt.minus_rank());
    if (std::size_t pj = ms.plus_index(j); pj != LambdaModule::npos) a = alpha_plus.column(pj);
    if (std::size_t mj = ms.minus_index(j); mj != LambdaModule::npos) b = alpha_minus.column(mj);
    for (std::size_t i = 0; i < mt.generators(); ++i) {
      switch (mt.type(i)) {
        case Summand::Plus: r(i, j) = GroupRingElement(a[mt.plus_index(i)], 0); break;
        case Summand::Minus: r(i, j) = GroupRingElement(b[mt.minus_index(i)], 0); break;
        case Summand::Free: {
          const Integer& x = a[mt.plus_index(i)];
          const Integer& y = b[mt.minus_index(i)];
          require(mpz_even_p(Integer(x - y).get_mpz_t()), ErrorKind::GlueIncompatible,
                  "part isometries disagree mod 2 on the free block");
          r(i, j) = GroupRingElement((x + y) / 2, (x - y) / 2);
          break;
        }
      }
    }
  }
  require(verify_hermitian_isometry(source, target, r), ErrorKind::GlueIncompatible,
          "glued map is not an isometry");
  return {r};
}

struct PullbackSquare {
  HermitianForm lambda;
  SymBilinearForm plus;
  SymBilinearForm minus;
  IntMatrix beta;
};

/// lambda(x, y) = (1-T) Q(x-, y-) on Z- + L^(h-1): minus part 2Q, plus part 0.
inline PullbackSquare surface_exterior_form(const SymBilinearForm& qnd) {
  require(qnd.is_nondegenerate(), ErrorKind::DegenerateForm, "surface form must be non-degenerate");
  const std::size_t h = qnd.dim();
  require(h >= 1, ErrorKind::BadRank, "surface form needs rank >= 1");
  const LambdaModule m{0, 1, h - 1};
  LambdaMatrix g(h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) g(i, j) = GroupRingElement(qnd.gram()(i, j), -qnd.gram()(i, j));
  HermitianForm lambda(m, g);
  FormParts parts = plus_minus_parts(lambda);
  return {lambda, parts.plus, parts.minus, IntMatrix::identity(h - 1)};
}

}  // namespace z2lat
