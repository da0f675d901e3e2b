#pragma once

// Sublattices M_d(L; x), integral overlattices of a sublattice through its
// glue group M*/M, and the odd unimodular lattices sharing an even part.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "z2lat/discriminant.hpp"
#include "z2lat/exterior.hpp"
#include "z2lat/isometry.hpp"

namespace z2lat {

/// {m in L : m.x = 0 mod d}.
inline SublatticeEmbedding m_d_sublattice(const SymBilinearForm& l, const IntVector& x, const Integer& d) {
  require(d >= 1, ErrorKind::InvalidInput, "d must be positive");
  require(x.size() == l.dim(), ErrorKind::DimensionMismatch, "vector does not lie in the lattice");
  return make_embedding(l, congruence_sublattice(l.gram() * x, d));
}

/// [x] has order d in L/dL.
inline bool is_d_primitive(const SymBilinearForm& l, const IntVector& x, const Integer& d) {
  require(x.size() == l.dim(), ErrorKind::DimensionMismatch, "vector does not lie in the lattice");
  return gcd(vector_gcd(x), d) == 1 && d >= 2;
}

struct DualOverlatticeData {
  SublatticeEmbedding base;
  RatMatrix dual_basis;  // M* in M coordinates: columns of G_M^{-1}
  FiniteAbelianGroup glue_group;

  /// Representative of the class a of M*/M, in M coordinates.
  RatVector glue_vector(const FiniteAbelianGroup::Element& a) const {
    IntVector z = glue_group.lift(a);
    RatVector y(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = 0; j < z.size(); ++j) y[i] += dual_basis(i, j) * z[j];
    return y;
  }

  /// Pairing of two glue representatives (rational, defined modulo Z).
  Rational pairing(const FiniteAbelianGroup::Element& a, const FiniteAbelianGroup::Element& b) const {
    IntVector za = glue_group.lift(a), zb = glue_group.lift(b);
    Rational s = 0;
    for (std::size_t i = 0; i < za.size(); ++i)
      for (std::size_t j = 0; j < zb.size(); ++j) s += za[i] * dual_basis(i, j) * zb[j];
    return s;
  }
};

inline DualOverlatticeData dual_overlattice_data(const SublatticeEmbedding& base) {
  const IntMatrix& g = base.induced.gram();
  require(base.induced.is_nondegenerate(), ErrorKind::DegenerateForm, "glue group of a degenerate lattice");
  return {base, rational_inverse(g), FiniteAbelianGroup::cokernel(g)};
}

struct Overlattice {
  SymBilinearForm form;       // Gram in a Hermite basis
  RatMatrix basis_in_ambient; // columns in ambient coordinates
  RatMatrix basis_in_base;    // columns in coordinates of the base sublattice
  bool equals_ambient = false;
  Parity parity = Parity::Even;
};

constexpr long kMaxGlueOrder = 1L << 8;

/// All integral unimodular lattices N with M in N in M*, one per isotropic
/// subgroup H of M*/M with |H|^2 = |M*/M|.
inline std::vector<Overlattice> unimodular_overlattices(const DualOverlatticeData& data) {
  const FiniteAbelianGroup& g = data.glue_group;
  require(g.order() <= kMaxGlueOrder, ErrorKind::TooLarge, "glue group larger than 2^8");
  const long order = g.order().get_si();
  std::vector<FiniteAbelianGroup::Element> elems;
  g.for_each([&](const FiniteAbelianGroup::Element& a) { elems.push_back(a); });
  auto index_of = [&](const FiniteAbelianGroup::Element& a) {
    return static_cast<std::size_t>(std::lower_bound(elems.begin(), elems.end(), a,
                                                     [&](const auto& x, const auto& y) {
                                                       return std::lexicographical_compare(
                                                           x.rbegin(), x.rend(), y.rbegin(), y.rend());
                                                     }) -
                                    elems.begin());
  };
  auto integral = [](const Rational& r) { return r.get_den() == 1; };

  std::vector<bool> isotropic(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) isotropic[i] = integral(data.pairing(elems[i], elems[i]));

  // isotropic subgroups, grown one generator at a time
  using Subgroup = std::vector<std::size_t>;
  std::set<Subgroup> seen{{0}};
  std::vector<Subgroup> frontier{{0}}, targets;
  long target_size = 1;
  while (target_size * target_size < order) ++target_size;
  if (target_size * target_size != order) return {};
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const Subgroup& s : frontier) {
      if (static_cast<long>(s.size()) == target_size) {
        targets.push_back(s);
        continue;
      }
      for (std::size_t e = 1; e < elems.size(); ++e) {
        if (!isotropic[e] || std::binary_search(s.begin(), s.end(), e)) continue;
        bool ok = true;
        for (std::size_t x : s)
          if (!integral(data.pairing(elems[x], elems[e]))) {
            ok = false;
            break;
          }
        if (!ok) continue;
        // closure of s and e
        std::vector<std::size_t> members = s;
        std::vector<bool> in(elems.size());
        for (std::size_t x : s) in[x] = true;
        for (std::size_t i = 0; i < members.size() || !in[e]; ++i) {
          if (!in[e]) {
            in[e] = true;
            members.push_back(e);
          }
          for (std::size_t j = 0; j <= i && j < members.size(); ++j) {
            std::size_t c = index_of(g.add(elems[members[i]], elems[members[j]]));
            if (!in[c]) {
              in[c] = true;
              members.push_back(c);
            }
          }
        }
        std::sort(members.begin(), members.end());
        if (static_cast<long>(members.size()) > target_size) continue;
        bool all_isotropic = true;
        for (std::size_t x : members)
          for (std::size_t y : members)
            if (!integral(data.pairing(elems[x], elems[y]))) all_isotropic = false;
        if (!all_isotropic || !integral(data.pairing(elems[e], elems[e]))) continue;
        if (seen.insert(members).second) next.push_back(members);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Overlattice> out;
  const std::size_t n = data.base.induced.dim();
  const IntMatrix& ambient_basis = data.base.basis;
  for (const Subgroup& s : targets) {
    std::vector<RatVector> gens;
    for (std::size_t i = 0; i < n; ++i) {
      RatVector e(n);
      e[i] = 1;
      gens.push_back(e);
    }
    for (std::size_t x : s) gens.push_back(data.glue_vector(elems[x]));
    Integer den = 1;
    for (const auto& v : gens)
      for (const auto& c : v) den = lcm(den, c.get_den());
    IntMatrix scaled(n, gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) scaled(i, j) = Rational(gens[j][i] * den).get_num();
    IntMatrix h = hermite_basis(scaled);
    RatMatrix in_base(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) in_base(i, j) = Rational(h(i, j), den);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) in_base(i, j).canonicalize();
    RatMatrix gram_q = in_base.transpose() * to_rational(data.base.induced.gram()) * in_base;
    auto gram = to_integer(gram_q);
    require(gram.has_value(), ErrorKind::InvalidInput, "internal: overlattice is not integral");
    Overlattice o;
    o.form = SymBilinearForm(*gram);
    require(o.form.is_unimodular(), ErrorKind::InvalidInput, "internal: overlattice is not unimodular");
    o.basis_in_base = in_base;
    o.basis_in_ambient = to_rational(ambient_basis) * in_base;
    o.equals_ambient = to_integer(o.basis_in_ambient).has_value();
    o.parity = o.form.parity();
    out.push_back(std::move(o));
  }
  return out;
}

/// Overlattices of the even part M_2(L) of an odd lattice L.
inline std::vector<Overlattice> even_part_overlattices(const SymBilinearForm& l) {
  return unimodular_overlattices(dual_overlattice_data(exterior_nd_form(l)));
}

/// 2-neighbours of L: the overlattices of M_2(L) other than L itself.
inline std::vector<Overlattice> two_neighbors(const SymBilinearForm& l) {
  std::vector<Overlattice> out;
  for (Overlattice& o : even_part_overlattices(l))
    if (!o.equals_ambient) out.push_back(std::move(o));
  return out;
}

/// The lattice D_n^+ spanned by D_n and (1/2, ..., 1/2), for 4 | n.
inline SymBilinearForm gamma_lattice(std::size_t n) {
  require(n >= 4 && n % 4 == 0, ErrorKind::BadRank, "Gamma_n needs n divisible by 4");
  // generators scaled by 2
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    IntVector v(n);
    v[i] = 2;
    v[i + 1] = -2;
    gens.push_back(v);
  }
  IntVector w(n);
  w[n - 2] = 2;
  w[n - 1] = 2;
  gens.push_back(w);
  gens.push_back(IntVector(n, 1));
  IntMatrix basis = hermite_basis(IntMatrix::from_columns(n, gens));
  IntMatrix g = basis.transpose() * basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      require(g(i, j) % 4 == 0, ErrorKind::InvalidInput, "internal: Gamma_n not integral");
      g(i, j) /= 4;
    }
  return SymBilinearForm(g);
}

/// Standard representative matching a label, used for naming classes.
struct NamedClass {
  std::string label;
  SymBilinearForm representative;
};

/// Named candidates of rank h: (1)^h, E8+(1)^m, Gamma12+(1)^m.
inline std::vector<NamedClass> standard_odd_classes(std::size_t h) {
  std::vector<NamedClass> out;
  out.push_back({"(1)^" + std::to_string(h), diagonal_ones(h)});
  if (h >= 9) out.push_back({"E8+(1)^" + std::to_string(h - 8), e8_plus_ones(h - 8)});
  if (h >= 12) {
    SymBilinearForm g = gamma_lattice(12);
    std::string label = "Gamma12";
    if (h > 12) {
      g = direct_sum(g, diagonal_ones(h - 12));
      label += "+(1)^" + std::to_string(h - 12);
    }
    out.push_back({label, g});
  }
  return out;
}

/// Label of a positive definite unimodular form among the standard classes
/// (checked by an explicit isometry), or "unclassified".
inline std::string class_label(const SymBilinearForm& f) {
  for (const auto& c : standard_odd_classes(f.dim()))
    if (c.representative.parity() == f.parity() && is_isometric_definite(c.representative, f)) return c.label;
  if (f.dim() == 8 && is_isometric_definite(e8(), f)) return "E8";
  return "unclassified";
}

struct SharedExteriorClass {
  SymBilinearForm form;
  std::string label;
  bool is_input = false;
};

/// Odd unimodular forms, up to isometry, whose even part is isometric to that
/// of b: the odd overlattices of M_2(L_b), deduplicated. The class of b
/// itself comes first.
inline std::vector<SharedExteriorClass> classify_sharing_exterior(const SymBilinearForm& b) {
  require(b.is_odd(), ErrorKind::NotOdd, "classification needs an odd form");
  require(b.is_unimodular(), ErrorKind::NotUnimodular, "classification needs a unimodular form");
  require(b.is_positive_definite(), ErrorKind::UnsupportedIndefinite, "classification needs a definite form");
  require(b.dim() <= 14, ErrorKind::TooLarge, "classification limited to rank 14");
  std::vector<SharedExteriorClass> out{{b, class_label(b), true}};
  for (const Overlattice& o : even_part_overlattices(b)) {
    if (o.parity != Parity::Odd || o.equals_ambient) continue;
    bool fresh = true;
    for (const auto& c : out)
      if (is_isometric_definite(c.form, o.form)) {
        fresh = false;
        break;
      }
    if (fresh) out.push_back({o.form, class_label(o.form), false});
  }
  return out;
}

}  // namespace z2lat
