#pragma once

// Realization certificates for odd positive definite unimodular forms b:
// the minus-part isometry of the once stabilized doubled exterior forms, its
// compatible plus-part lift, the glued hermitian isometry, and the
// classification of odd forms sharing the exterior form of b.

#include <random>
#include <string>
#include <vector>

#include "z2lat/discriminant.hpp"
#include "z2lat/hermitian.hpp"
#include "z2lat/isometry.hpp"
#include "z2lat/json_io.hpp"
#include "z2lat/neighbors.hpp"

namespace z2lat {

constexpr std::size_t kMaxCertifyRank = 14;
constexpr int kCertificateVersion = 1;

inline void require_realizable_input(const SymBilinearForm& b) {
  require(b.dim() >= 1 && b.dim() <= kMaxCertifyRank, ErrorKind::BadRank, "rank must lie in 1..14");
  require(b.is_odd(), ErrorKind::NotOdd, "form must be odd");
  require(b.is_unimodular(), ErrorKind::NotUnimodular, "form must be unimodular");
  require(b.is_positive_definite(), ErrorKind::UnsupportedIndefinite, "form must be positive definite");
}

namespace detail {

/// Basis of the null space of a symmetric matrix over Z/2, as 0/1 vectors.
inline std::vector<IntVector> kernel_mod2(const IntMatrix& a_in) {
  const std::size_t n = a_in.cols();
  IntMatrix a = reduce_mod(a_in, 2);
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < a.rows(); ++c) {
    std::size_t p = row;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, row);
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (r != row && a(r, c) != 0) a.add_row(r, row, 1);
    a = reduce_mod(a, 2);
    pivot_cols.push_back(c);
    ++row;
  }
  std::vector<IntVector> out;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    IntVector v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = a(r, free);
    out.push_back(v);
  }
  return out;
}

/// Unimodular matrix with first column c, for primitive c.
inline IntMatrix complete_to_basis(const IntVector& c) {
  const std::size_t n = c.size();
  SmithDecomposition s = smith_normal_form(IntMatrix::from_columns(n, {c}));
  IntMatrix w = unimodular_inverse(s.U);
  // U c V = D with D = (1, 0, ...)^T and V = (+-1)
  if (s.V(0, 0) < 0) w.negate_col(0);
  require(w.column(0) == c, ErrorKind::InvalidInput, "internal: vector is not primitive");
  return w;
}

}  // namespace detail

/// The even sublattice M_2(L_b) in a basis whose first vector r is in the
/// radical of b_ext mod 2 with b(r, r) = 0 mod 4, as 2e_1 is for (1)^h.
/// Minus-part isometries then descend mod 2 modulo the first generator.
inline SublatticeEmbedding adapted_exterior(const SymBilinearForm& b) {
  SublatticeEmbedding e = exterior_nd_form(b);
  const IntMatrix& g = e.induced.gram();
  const std::size_t h = g.rows();
  auto suitable = [&](const IntVector& v) {
    const IntVector gv = g * v;
    for (const auto& x : gv)
      if (mpz_odd_p(x.get_mpz_t())) return false;
    return mod_floor(bilinear(g, v, v), 4) == 0;
  };
  IntVector first(h);
  first[0] = 1;
  if (suitable(first)) return e;
  const std::vector<IntVector> kernel = detail::kernel_mod2(g);
  for (std::size_t mask = 1; mask < (std::size_t{1} << kernel.size()); ++mask) {
    IntVector v(h);
    for (std::size_t i = 0; i < kernel.size(); ++i)
      if (mask >> i & 1)
        for (std::size_t j = 0; j < h; ++j) v[j] += kernel[i][j];
    for (auto& x : v) x = mod_floor(x, 2);
    if (!suitable(v)) continue;
    return make_embedding(b, e.basis * detail::complete_to_basis(v));
  }
  return e;
}

/// 2 q_ext + H for the standard form (1)^h and for b; the minus parts of the
/// once stabilized surface forms.
struct MinusForms {
  SymBilinearForm standard_exterior;  // u_ext
  SymBilinearForm exterior;           // b_ext
  SymBilinearForm standard;           // 2 u_ext + H
  SymBilinearForm target;             // 2 b_ext + H
};

inline MinusForms minus_forms(const SymBilinearForm& b) {
  const SymBilinearForm u_ext = exterior_matrix_closed_form(b.dim());
  const SymBilinearForm b_ext = adapted_exterior(b).induced;
  return {u_ext, b_ext, direct_sum(scaled(u_ext, 2), hyperbolic()), direct_sum(scaled(b_ext, 2), hyperbolic())};
}

struct FormInvariants {
  std::size_t rank = 0;
  long signature = 0;
  Parity parity = Parity::Even;
  bool operator==(const FormInvariants&) const = default;
};

inline FormInvariants form_invariants(const SymBilinearForm& f) { return {f.rank(), f.signature(), f.parity()}; }

struct LinkingWitness {
  std::vector<Integer> invariants;  // of coker(A_u) = coker(A_b)
  IntMatrix psi;                    // (coker A_u, q_u) -> (coker A_b, q_b)
  LiftedIsometry lift;              // on the doubled forms
};

struct AlphaMinusInvariants {
  FormInvariants standard, target;
  LinkingWitness linking;
};

/// Rank, signature and parity of the two stabilized minus forms, and an
/// exhaustively checked isometry of the doubled boundary linking forms.
/// Any failure throws naming the invariant.
inline AlphaMinusInvariants verify_alpha_minus_invariants(const SymBilinearForm& b) {
  require_realizable_input(b);
  const MinusForms m = minus_forms(b);
  AlphaMinusInvariants out{form_invariants(m.standard), form_invariants(m.target), {}};
  require(out.standard == out.target, ErrorKind::InvalidInput, "stable invariants (rank, signature, parity) differ");
  const IntMatrix& a_u = m.standard_exterior.gram();
  const IntMatrix& a_b = m.exterior.gram();
  const QuadraticLinkingForm q_u = boundary_linking_form(a_u, quadratic_refinement(a_u));
  const QuadraticLinkingForm q_b = boundary_linking_form(a_b, quadratic_refinement(a_b));
  auto psi = linking_isometry_search(q_u, q_b);
  require(psi.has_value(), ErrorKind::InvalidInput, "boundary linking forms are not isometric");
  out.linking.invariants = q_u.group().invariants();
  out.linking.psi = *psi;
  out.linking.lift = lift_isometry_mod2(*psi, a_u, a_b);
  require(out.linking.lift.commutes, ErrorKind::InvalidInput, "lifted linking isometry does not commute with reduction");
  require(out.linking.lift.isometry, ErrorKind::InvalidInput, "lifted map is not an isometry of the doubled forms");
  require(out.linking.lift.half_relation, ErrorKind::InvalidInput, "doubled forms fail q = 2 q_2 on reduction");
  return out;
}

/// Reduction mod 2 modulo the Z- summand is well defined on alpha and its
/// inverse: the image of the first generator is even off the first row.
inline bool descends_mod2(const IntMatrix& alpha) {
  auto even_off_first = [](const IntMatrix& m) {
    for (std::size_t i = 1; i < m.rows(); ++i)
      if (mpz_odd_p(m(i, 0).get_mpz_t())) return false;
    return true;
  };
  return even_off_first(alpha) && even_off_first(unimodular_inverse(alpha));
}

/// alpha^T target alpha = standard, unimodular, descending mod 2.
inline bool verify_alpha_minus(const SymBilinearForm& standard, const SymBilinearForm& target, const IntMatrix& alpha) {
  if (!verify_isometry(target, standard, alpha)) return false;
  return descends_mod2(alpha);
}

struct AlphaMinusSearch {
  std::string status;  // "explicit" or "invariants-verified"
  std::optional<IntMatrix> matrix;
  std::uint64_t planes_tried = 0;
};

struct AlphaMinusOptions {
  std::uint64_t budget = 128;            // hyperbolic planes tried
  std::uint64_t node_budget = 200000;    // per definite isometry search
  std::uint64_t seed = 0;
};

namespace detail {

/// w with v.w = 1, given gcd(v) = 1.
inline IntVector unit_dual(const IntVector& v) {
  IntVector w(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ExtendedGcd e = extended_gcd(g, v[i]);
    for (std::size_t j = 0; j < i; ++j) w[j] *= e.s;
    w[i] = e.t;
    g = e.g;
  }
  require(g == 1, ErrorKind::InvalidInput, "internal: vector is not primitive");
  return w;
}

inline std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  return out;
}

}  // namespace detail

/// Searches for alpha with alpha^T (2 b_ext + H) alpha = 2 u_ext + H that
/// descends mod 2. Each trial splits off a hyperbolic plane spanned by an
/// isotropic vector e' = (x, a, c) and its partner, then looks for a definite
/// isometry from 2 u_ext onto the orthogonal complement. The first trial uses
/// the given plane. Budget exhaustion gives status "invariants-verified".
inline AlphaMinusSearch search_alpha_minus(const SymBilinearForm& b, const AlphaMinusOptions& opt = {}) {
  require_realizable_input(b);
  const MinusForms m = minus_forms(b);
  const std::size_t h = b.dim(), n = h + 2;
  const IntMatrix& g = m.target.gram();
  const SymBilinearForm doubled_u = scaled(m.standard_exterior, 2);
  std::mt19937_64 rng(opt.seed);
  AlphaMinusSearch out{"invariants-verified", std::nullopt, 0};

  auto try_plane = [&](const IntVector& e, const IntVector& f) -> std::optional<IntMatrix> {
    IntMatrix pairing(2, n);
    const IntVector ge = g * e, gf = g * f;
    for (std::size_t i = 0; i < n; ++i) {
      pairing(0, i) = ge[i];
      pairing(1, i) = gf[i];
    }
    const IntMatrix k = integer_kernel(pairing);
    const SymBilinearForm complement(congruence(g, k));
    if (!complement.is_positive_definite()) return std::nullopt;
    auto assemble = [&](const IntMatrix& t) {
      IntMatrix alpha(n, n);
      const IntMatrix kt = k * t;
      for (std::size_t j = 0; j < h; ++j) alpha.set_column(j, kt.column(j));
      alpha.set_column(h, e);
      alpha.set_column(h + 1, f);
      return alpha;
    };
    IsometrySearchOptions so;
    so.node_budget = opt.node_budget;
    so.accept = [&](const IntMatrix& t) { return descends_mod2(assemble(t)); };
    // the image of the Z- generator must agree with its target mod 2
    IntVector first(h);
    first[0] = 1;
    so.pinned = {first};
    so.pinned_image = [&](std::size_t, const IntVector& y) {
      const IntVector z = k * y;
      for (std::size_t i = 0; i < n; ++i)
        if (mpz_odd_p(Integer(z[i] - (i == 0 ? 1 : 0)).get_mpz_t())) return false;
      return true;
    };
    auto r = search_isometry_definite(complement, doubled_u, so);
    if (!r.isometry) return std::nullopt;
    return assemble(r.isometry->matrix);
  };

  if (m.target == m.standard) {
    out.status = "explicit";
    out.matrix = IntMatrix::identity(n);
    out.planes_tried = 1;
    return out;
  }
  IntVector e(n), f(n);
  e[h] = 1;
  f[h + 1] = 1;
  std::uniform_int_distribution<int> coord(-2, 2);
  while (out.planes_tried < opt.budget) {
    ++out.planes_tried;
    if (auto alpha = try_plane(e, f)) {
      require(verify_alpha_minus(m.standard, m.target, *alpha), ErrorKind::InvalidInput,
              "internal: alpha_minus failed to verify");
      out.status = "explicit";
      out.matrix = alpha;
      return out;
    }
    // next isotropic vector (x, a, -x^T b_ext x / a), a primitive pairing
    for (;;) {
      IntVector x(h);
      for (auto& c : x) c = coord(rng);
      const Integer norm = bilinear(m.exterior.gram(), x, x);
      if (norm == 0) continue;
      const std::vector<Integer> ds = detail::divisors(norm);
      Integer a = ds[rng() % ds.size()];
      if (rng() % 2) a = -a;
      e = IntVector(n);
      for (std::size_t i = 0; i < h; ++i) e[i] = x[i];
      e[h] = a;
      e[h + 1] = -norm / a;
      const IntVector ge = g * e;
      if (vector_gcd(ge) != 1) continue;
      const IntVector w = detail::unit_dual(ge);
      const Integer half = bilinear(g, w, w) / 2;
      f = w;
      for (std::size_t i = 0; i < n; ++i) f[i] -= half * e[i];
      break;
    }
  }
  return out;
}

/// The alpha_2 determined by alpha_minus: drop the Z- coordinate, reduce mod 2.
inline IntMatrix alpha_two(const IntMatrix& alpha_minus) {
  const std::size_t n = alpha_minus.rows();
  return reduce_mod(alpha_minus.submatrix(1, 1, n - 1, n - 1), 2);
}

/// (0)^{h-1} + H, the plus part of the once stabilized surface form.
inline SymBilinearForm zero_plus_hyperbolic(std::size_t h1) {
  return direct_sum(SymBilinearForm(IntMatrix(h1, h1)), hyperbolic());
}

enum class HyperbolicBlock { P1, P2, P3, P4, P5, P6 };

inline IntMatrix hyperbolic_block(HyperbolicBlock p) {
  switch (p) {
    case HyperbolicBlock::P1: return IntMatrix{{1, 0}, {0, 1}};
    case HyperbolicBlock::P2: return IntMatrix{{0, 1}, {1, 0}};
    case HyperbolicBlock::P3: return IntMatrix{{1, 1}, {0, 1}};
    case HyperbolicBlock::P4: return IntMatrix{{1, 0}, {1, 1}};
    case HyperbolicBlock::P5: return IntMatrix{{1, 1}, {1, 0}};
    case HyperbolicBlock::P6: return IntMatrix{{0, 1}, {1, 1}};
  }
  return {};
}

/// Integral unimodular matrix reducing to a given invertible matrix mod 2,
/// built from elementary operations.
inline IntMatrix unimodular_lift_mod2(const IntMatrix& a2) {
  const std::size_t n = a2.rows();
  IntMatrix m = reduce_mod(a2, 2);
  IntMatrix x = IntMatrix::identity(n);  // x * a2 = identity mod 2 at the end
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    require(p < n, ErrorKind::InvalidInput, "block A is not invertible mod 2");
    if (p != c) {
      m.swap_rows(p, c);
      x.swap_rows(p, c);
    }
    for (std::size_t r = 0; r < n; ++r)
      if (r != c && m(r, c) != 0) {
        m.add_row(r, c, 1);
        x.add_row(r, c, -1);
      }
    m = reduce_mod(m, 2);
  }
  return unimodular_inverse(x);
}

/// Lifts alpha_2 = (A B; C D) on (Z/2)^{h-1} + H(Z/2) to an integral
/// isometry (A' B'; 0 D') of (0)^{h-1} + H. D must be P1 or P2, the only
/// blocks that lift to isometries of H.
inline FormIsometry lift_alpha_plus(const IntMatrix& alpha2_in) {
  require(alpha2_in.square() && alpha2_in.rows() >= 2, ErrorKind::DimensionMismatch,
          "alpha_2 must be square of size at least 2");
  const IntMatrix alpha2 = reduce_mod(alpha2_in, 2);
  const std::size_t n = alpha2.rows(), h1 = n - 2;
  const IntMatrix d = alpha2.submatrix(h1, h1, 2, 2);
  require(d == hyperbolic_block(HyperbolicBlock::P1) || d == hyperbolic_block(HyperbolicBlock::P2),
          ErrorKind::ForbiddenBlock, "hyperbolic block is not P1 or P2");
  require(alpha2.submatrix(h1, 0, 2, h1).is_zero(), ErrorKind::InvalidInput, "block C is not zero");
  IntMatrix t(n, n);
  const IntMatrix a = h1 == 0 ? IntMatrix(0, 0) : unimodular_lift_mod2(alpha2.submatrix(0, 0, h1, h1));
  for (std::size_t i = 0; i < h1; ++i)
    for (std::size_t j = 0; j < h1; ++j) t(i, j) = a(i, j);
  for (std::size_t i = 0; i < h1; ++i)
    for (std::size_t j = h1; j < n; ++j) t(i, j) = alpha2(i, j);
  for (std::size_t i = h1; i < n; ++i)
    for (std::size_t j = h1; j < n; ++j) t(i, j) = d(i - h1, j - h1);
  const SymBilinearForm g = zero_plus_hyperbolic(h1);
  require(verify_isometry(g, g, t), ErrorKind::InvalidInput, "internal: lifted block matrix is not an isometry");
  return {t};
}

/// The once stabilized surface form for the exterior form q_ext.
inline HermitianForm stabilized_surface_form(const SymBilinearForm& q_ext) {
  return stabilize(surface_exterior_form(q_ext).lambda, 1);
}

struct CertifyOptions {
  AlphaMinusOptions alpha_minus;
};

inline ordered_json fingerprint_to_json(const NormCountFingerprint& f) {
  ordered_json counts = ordered_json::object();
  for (const auto& [norm, count] : f.counts) counts[std::to_string(norm)] = integer_to_json(count);
  return {{"counts", counts}, {"min_norm", integer_to_json(f.min_norm)}};
}

inline const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

inline ordered_json invariants_to_json(const FormInvariants& f) {
  return {{"rank", f.rank}, {"signature", f.signature}, {"parity", parity_name(f.parity)}};
}

/// Standard representative for a label from standard_odd_classes.
inline std::optional<SymBilinearForm> standard_representative(const std::string& label, std::size_t h) {
  for (const auto& c : standard_odd_classes(h))
    if (c.label == label) return c.representative;
  return std::nullopt;
}

/// Runs the whole chain and records every witness. Status is
/// "ambiguous-index-two" when another odd form shares the exterior form.
inline ordered_json certify(const SymBilinearForm& b, const CertifyOptions& opt = {}) {
  require_realizable_input(b);
  const std::size_t h = b.dim();
  const MinusForms m = minus_forms(b);
  const SublatticeEmbedding ext = adapted_exterior(b);
  const AlphaMinusInvariants inv = verify_alpha_minus_invariants(b);

  ordered_json c;
  c["version"] = kCertificateVersion;
  c["status"] = "";
  c["input"] = form_to_json(b);
  c["h"] = h;
  c["h_mod_8"] = h % 8;
  c["exterior"] = {{"basis", matrix_to_json(ext.basis)},
                   {"gram", matrix_to_json(ext.induced.gram())},
                   {"index", integer_to_json(ext.index())}};
  c["stable_invariants"] = {{"standard", invariants_to_json(inv.standard)},
                            {"input", invariants_to_json(inv.target)},
                            {"equal", inv.standard == inv.target}};
  ordered_json invariants = ordered_json::array();
  for (const auto& d : inv.linking.invariants) invariants.push_back(integer_to_json(d));
  c["linking"] = {{"group", invariants},
                  {"psi", matrix_to_json(inv.linking.psi)},
                  {"psi_lift", matrix_to_json(inv.linking.lift.matrix)},
                  {"naive_lift", inv.linking.lift.naive_lift},
                  {"exhaustive_check", inv.linking.lift.commutes && inv.linking.lift.isometry &&
                                           inv.linking.lift.half_relation}};

  const AlphaMinusSearch am = search_alpha_minus(b, opt.alpha_minus);
  c["alpha_minus"] = {{"status", am.status},
                      {"matrix", am.matrix ? matrix_to_json(*am.matrix) : ordered_json(nullptr)},
                      {"planes_tried", am.planes_tried}};
  c["alpha_plus"] = nullptr;
  c["glued"] = nullptr;
  if (am.matrix) {
    const FormIsometry plus = lift_alpha_plus(alpha_two(*am.matrix));
    c["alpha_plus"] = {{"matrix", matrix_to_json(plus.matrix)}};
    const HermitianForm source = stabilized_surface_form(m.standard_exterior);
    const HermitianForm target = stabilized_surface_form(m.exterior);
    const HermitianIsometry glued = glue_isometry(source, target, plus.matrix, *am.matrix);
    c["glued"] = {{"matrix", lambda_matrix_to_json(glued.matrix)}};
  }

  ordered_json classes = ordered_json::array();
  const auto shared = classify_sharing_exterior(b);
  for (const auto& s : shared) {
    ordered_json entry = {{"label", s.label}, {"gram", matrix_to_json(s.form.gram())}, {"is_input", s.is_input}};
    entry["witness"] = nullptr;
    if (auto rep = standard_representative(s.label, h))
      if (auto iso = is_isometric_definite(*rep, s.form)) entry["witness"] = matrix_to_json(iso->matrix);
    classes.push_back(entry);
  }
  c["classification"] = classes;
  c["status"] = shared.size() > 1 ? "ambiguous-index-two" : "realized";

  const SymBilinearForm u = diagonal_ones(h);
  const auto to_standard = is_isometric_definite(u, b);
  const NormCountFingerprint fb = fingerprint(b), fu = fingerprint(u);
  c["knotted"] = !to_standard.has_value();
  ordered_json evidence = {{"fingerprint_input", fingerprint_to_json(fb)},
                           {"fingerprint_standard", fingerprint_to_json(fu)},
                           {"exterior_roots_input", integer_to_json(count_vectors_of_norm(m.exterior, 2))},
                           {"exterior_roots_standard", integer_to_json(count_vectors_of_norm(m.standard_exterior, 2))}};
  if (to_standard) {
    evidence["kind"] = "isometry";
    evidence["isometry"] = matrix_to_json(to_standard->matrix);
  } else {
    evidence["kind"] = fb == fu ? "exhaustive-search" : "fingerprint";
  }
  c["knotted_evidence"] = evidence;
  c["surface"] = {{"genus", h}, {"euler", -2 * static_cast<long>(h)}};
  return c;
}

struct CertificateCheck {
  bool ok = true;
  std::vector<std::string> failures;
  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      failures.push_back(what);
    }
  }
};

/// Re-checks a certificate from its JSON alone: every recorded matrix is
/// tested against forms rebuilt from the input Gram matrix.
inline CertificateCheck verify_certificate(const ordered_json& c) {
  CertificateCheck r;
  try {
    const SymBilinearForm b = form_from_json(c.at("input"));
    const std::size_t h = b.dim();
    r.expect(b.is_odd() && b.is_unimodular() && b.is_positive_definite(), "input is odd unimodular definite");
    r.expect(c.at("h").get<std::size_t>() == h, "h matches the input rank");
    r.expect(c.at("h_mod_8").get<std::size_t>() == h % 8, "h_mod_8");
    r.expect(c.at("surface").at("genus").get<long>() == static_cast<long>(h), "surface genus equals h");
    r.expect(c.at("surface").at("euler").get<long>() == -2 * static_cast<long>(h), "surface Euler number is -2h");

    // exterior sublattice
    const IntMatrix basis = matrix_from_json(c.at("exterior").at("basis"));
    const SymBilinearForm b_ext(matrix_from_json(c.at("exterior").at("gram")));
    r.expect(basis.rows() == h && basis.cols() == h, "exterior basis shape");
    r.expect(congruence(b.gram(), basis) == b_ext.gram(), "exterior gram is the restriction of b");
    const Integer index = abs(det(basis));
    r.expect(index == (b.is_even() ? 1 : 2) && integer_from_json(c.at("exterior").at("index")) == index,
             "exterior index");
    for (std::size_t j = 0; j < basis.cols(); ++j) {
      const IntVector x = basis.column(j);
      r.expect(mpz_even_p(bilinear(b.gram(), x, x).get_mpz_t()), "exterior basis vectors have even norm");
    }

    // stable invariants
    const SymBilinearForm u_ext = exterior_matrix_closed_form(h);
    const SymBilinearForm standard = direct_sum(scaled(u_ext, 2), hyperbolic());
    const SymBilinearForm target = direct_sum(scaled(b_ext, 2), hyperbolic());
    r.expect(form_invariants(standard) == form_invariants(target), "stable invariants agree");

    // linking forms
    const IntMatrix &a_u = u_ext.gram(), &a_b = b_ext.gram();
    const QuadraticRefinement r_u = quadratic_refinement(a_u), r_b = quadratic_refinement(a_b);
    const QuadraticLinkingForm q_u = boundary_linking_form(a_u, r_u), q_b = boundary_linking_form(a_b, r_b);
    const IntMatrix psi = matrix_from_json(c.at("linking").at("psi"));
    r.expect(is_linking_isometry(q_u, q_b, psi), "psi is a linking form isometry");
    const QuadraticLinkingForm q2u = scaled_linking_form(a_u, r_u, 2), q2b = scaled_linking_form(a_b, r_b, 2);
    const IntMatrix lift = matrix_from_json(c.at("linking").at("psi_lift"));
    r.expect(is_linking_isometry(q2u, q2b, lift), "lifted psi is an isometry of the doubled forms");
    if (lift.rows() == q2b.group().rank() && lift.cols() == q2u.group().rank()) {
      bool commutes = true;
      q2u.group().for_each([&](const FiniteAbelianGroup::Element& a) {
        const auto down = reduce_to_base(q2u.group(), q_u.group(), a);
        const auto up = q2b.group().apply(lift, a);
        if (reduce_to_base(q2b.group(), q_b.group(), up) != q_b.group().apply(psi, down)) commutes = false;
      });
      r.expect(commutes, "lifted psi commutes with reduction");
    }

    // alpha_minus, alpha_plus, gluing
    const auto& am = c.at("alpha_minus");
    const std::string status = am.at("status").get<std::string>();
    r.expect(status == "explicit" || status == "invariants-verified", "alpha_minus status");
    r.expect((status == "explicit") == !am.at("matrix").is_null(), "alpha_minus matrix present iff explicit");
    if (!am.at("matrix").is_null()) {
      const IntMatrix alpha = matrix_from_json(am.at("matrix"));
      r.expect(verify_alpha_minus(standard, target, alpha), "alpha_minus is a descending isometry");
      r.expect(!c.at("alpha_plus").is_null(), "alpha_plus present with alpha_minus");
      if (!c.at("alpha_plus").is_null()) {
        const IntMatrix plus = matrix_from_json(c.at("alpha_plus").at("matrix"));
        const SymBilinearForm zh = zero_plus_hyperbolic(h - 1);
        r.expect(verify_isometry(zh, zh, plus), "alpha_plus is an isometry of (0) + H");
        r.expect(reduce_mod(plus, 2) == alpha_two(alpha), "alpha_plus reduces to alpha_2");
      }
      r.expect(!c.at("glued").is_null(), "glued isometry present with alpha_minus");
      if (!c.at("glued").is_null()) {
        const LambdaMatrix g = lambda_matrix_from_json(c.at("glued").at("matrix"));
        r.expect(verify_hermitian_isometry(stabilized_surface_form(u_ext), stabilized_surface_form(b_ext), g),
                 "glued map is a hermitian isometry");
      }
    }

    // classification
    const auto& classes = c.at("classification");
    r.expect(classes.is_array() && !classes.empty(), "classification is non-empty");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const auto& e = classes[i];
      const SymBilinearForm f(matrix_from_json(e.at("gram")));
      r.expect(e.at("is_input").get<bool>() == (i == 0), "input class comes first");
      if (i == 0) r.expect(f == b, "first class is the input");
      r.expect(f.dim() == h && f.is_odd() && f.is_unimodular() && f.is_positive_definite(),
               "class is odd unimodular definite of rank h");
      r.expect(form_invariants(scaled(exterior_nd_form(f).induced, 2)) == form_invariants(scaled(b_ext, 2)),
               "class shares the exterior invariants");
      if (!e.at("witness").is_null()) {
        auto rep = standard_representative(e.at("label").get<std::string>(), h);
        r.expect(rep && verify_isometry(*rep, f, matrix_from_json(e.at("witness"))), "class label witness");
      }
    }
    const std::string cert_status = c.at("status").get<std::string>();
    r.expect(cert_status == (classes.size() > 1 ? "ambiguous-index-two" : "realized"), "status matches classification");

    // knottedness
    const bool knotted = c.at("knotted").get<bool>();
    const auto& ev = c.at("knotted_evidence");
    const std::string kind = ev.at("kind").get<std::string>();
    if (!knotted) {
      r.expect(kind == "isometry" && verify_isometry(diagonal_ones(h), b, matrix_from_json(ev.at("isometry"))),
               "unknotted verdict carries an isometry to (1)^h");
    } else if (kind == "fingerprint") {
      r.expect(!(fingerprint(b) == fingerprint(diagonal_ones(h))), "fingerprints differ");
    } else {
      r.expect(!is_isometric_definite(diagonal_ones(h), b).has_value(), "no isometry to (1)^h");
    }
  } catch (const std::exception& e) {
    r.expect(false, std::string("malformed certificate: ") + e.what());
  }
  return r;
}

}  // namespace z2lat
