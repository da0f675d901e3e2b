#pragma once

// Isometry testing for positive definite forms by backtracking over images
// of short generating vectors, pruned by inner products with the images
// already chosen.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "z2lat/forms.hpp"
#include "z2lat/roots.hpp"

namespace z2lat {

/// Unimodular T with T^T * gram_f * T = gram_g.
struct FormIsometry {
  IntMatrix matrix;
};

inline bool verify_isometry(const SymBilinearForm& f, const SymBilinearForm& g, const IntMatrix& t) {
  if (t.rows() != f.dim() || t.cols() != g.dim() || !t.square()) return false;
  if (congruence(f.gram(), t) != g.gram()) return false;
  Integer d = det(t);
  return d == 1 || d == -1;
}

struct IsometrySearchOptions {
  std::uint64_t node_budget = 0;                    // 0 = unlimited
  std::function<bool(const IntMatrix&)> accept;     // extra filter on complete isometries
  // target vectors whose images are chosen first, with a filter on those
  // images (given in source coordinates)
  std::vector<IntVector> pinned;
  std::function<bool(std::size_t, const IntVector&)> pinned_image;
};

struct IsometrySearchResult {
  std::optional<FormIsometry> isometry;
  bool budget_exhausted = false;
  bool rejected_by_invariants = false;
  std::uint64_t nodes = 0;
};

namespace detail {

inline long to_long(const Integer& x) {
  require(x.fits_slong_p(), ErrorKind::TooLarge, "entry too large for the isometry search");
  return x.get_si();
}

/// Number of vectors w in a fixed list with v.w = k, for each k > 0; an
/// isometry preserves it. gv is gram * v.
using VectorFingerprint = std::vector<std::pair<long, long>>;

inline VectorFingerprint vector_fingerprint(const std::vector<long>& gv, const std::vector<std::vector<long>>& list) {
  std::map<long, long> counts;
  for (const auto& w : list) {
    long s = 0;
    for (std::size_t r = 0; r < gv.size(); ++r) s += gv[r] * w[r];
    if (s > 0) ++counts[s];
  }
  return {counts.begin(), counts.end()};
}

inline std::vector<std::vector<long>> small_vectors(const SymBilinearForm& f, const Integer& norm) {
  std::vector<std::vector<long>> out;
  for (const IntVector& v : vectors_of_norm(f, norm)) {
    std::vector<long> x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x[i] = to_long(v[i]);
    out.push_back(std::move(x));
  }
  return out;
}

class DefiniteIsometrySearch {
 public:
  // target: Gram of the m vectors whose images are sought
  // the first `pinned` target vectors are placed first and their images
  // filtered by level_filter
  // target_fingerprints, when given, are taken against the source vectors
  // of norm fingerprint_norm.
  DefiniteIsometrySearch(const IntMatrix& source, const IntMatrix& target, const IsometrySearchOptions& opt,
                         std::size_t pinned = 0,
                         std::function<bool(std::size_t, const std::vector<long>&)> level_filter = {},
                         std::vector<VectorFingerprint> target_fingerprints = {}, const Integer& fingerprint_norm = 0)
      : n_(source.rows()), m_(target.rows()), pinned_(pinned), src_(source), tgt_(target), opt_(opt),
        level_filter_(std::move(level_filter)), tfp_(std::move(target_fingerprints)) {
    // pinned first; then by norm, preferring vectors meeting many chosen ones
    std::vector<bool> used(m_);
    for (std::size_t i = 0; i < pinned_; ++i) {
      order_.push_back(i);
      used[i] = true;
    }
    while (order_.size() < m_) {
      std::size_t best = m_;
      long best_links = -1;
      for (std::size_t r = 0; r < m_; ++r) {
        if (used[r]) continue;
        long links = 0;
        for (std::size_t c : order_) links += tgt_(r, c) != 0;
        if (best == m_ || tgt_(r, r) < tgt_(best, best) || (tgt_(r, r) == tgt_(best, best) && links > best_links)) {
          best = r;
          best_links = links;
        }
      }
      order_.push_back(best);
      used[best] = true;
    }
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) tgt_small_.push_back(to_long(tgt_(i, j)));
    if (!tfp_.empty()) src_shortest_ = small_vectors(SymBilinearForm(src_), fingerprint_norm);
  }

  /// A count mismatch for any needed norm means no isometry.
  bool candidate_counts_match(const SymBilinearForm& target_lattice, const SymBilinearForm& target) {
    std::map<Integer, bool> seen;
    for (std::size_t i = 0; i < m_; ++i) {
      const Integer& norm = target.gram()(i, i);
      if (seen[norm]) continue;
      seen[norm] = true;
      if (candidates(norm).vectors.size() != vectors_of_norm(target_lattice, norm).size()) return false;
    }
    return true;
  }

  std::optional<IntMatrix> run(IsometrySearchResult& stats) {
    images_.assign(m_, nullptr);
    image_w_.assign(m_, nullptr);
    std::optional<IntMatrix> found;
    descend(0, stats, found);
    return found;
  }

 private:
  struct Candidates {
    std::vector<std::vector<long>> vectors;
    std::vector<std::vector<long>> gram_times;  // source * vector
    std::vector<VectorFingerprint> fingerprints;
  };

  const Candidates& candidates(const Integer& norm) {
    auto it = cache_.find(norm);
    if (it != cache_.end()) return it->second;
    Candidates c;
    SymBilinearForm sf(src_);
    for (const IntVector& v : vectors_of_norm(sf, norm)) {
      std::vector<long> small(n_), w(n_);
      for (std::size_t i = 0; i < n_; ++i) small[i] = to_long(v[i]);
      IntVector gv = src_ * v;
      for (std::size_t i = 0; i < n_; ++i) w[i] = to_long(gv[i]);
      if (!tfp_.empty()) c.fingerprints.push_back(vector_fingerprint(w, src_shortest_));
      c.vectors.push_back(std::move(small));
      c.gram_times.push_back(std::move(w));
    }
    return cache_.emplace(norm, std::move(c)).first->second;
  }

  bool descend(std::size_t level, IsometrySearchResult& stats, std::optional<IntMatrix>& found) {
    if (level == m_) {
      IntMatrix t(n_, m_);
      for (std::size_t j = 0; j < m_; ++j)
        for (std::size_t i = 0; i < n_; ++i) t(i, j) = (*images_[j])[i];
      if (opt_.accept && !opt_.accept(t)) return false;
      found = t;
      return true;
    }
    const std::size_t j = order_[level];
    const Candidates& cand = candidates(tgt_(j, j));
    for (std::size_t k = 0; k < cand.vectors.size(); ++k) {
      const std::vector<long>& v = cand.vectors[k];
      if (!tfp_.empty() && cand.fingerprints[k] != tfp_[j]) continue;
      bool ok = true;
      for (std::size_t l = 0; l < level && ok; ++l) {
        const std::size_t i = order_[l];
        const std::vector<long>& w = *image_w_[i];
        long s = 0;
        for (std::size_t r = 0; r < n_; ++r) s += w[r] * v[r];
        ok = s == tgt_small_[i * m_ + j];
      }
      if (!ok) continue;
      if (j < pinned_ && level_filter_ && !level_filter_(j, v)) continue;
      ++stats.nodes;
      if (opt_.node_budget != 0 && stats.nodes > opt_.node_budget) {
        stats.budget_exhausted = true;
        return true;
      }
      images_[j] = &v;
      image_w_[j] = &cand.gram_times[k];
      if (descend(level + 1, stats, found)) return true;
    }
    images_[j] = nullptr;
    image_w_[j] = nullptr;
    return false;
  }

  std::size_t n_, m_, pinned_;
  IntMatrix src_, tgt_;
  IsometrySearchOptions opt_;
  std::function<bool(std::size_t, const std::vector<long>&)> level_filter_;
  std::vector<VectorFingerprint> tfp_;
  std::vector<std::vector<long>> src_shortest_;
  std::vector<std::size_t> order_;
  std::vector<long> tgt_small_;
  std::map<Integer, Candidates> cache_;
  std::vector<const std::vector<long>*> images_, image_w_;
};

}  // namespace detail

/// Short vectors generating the lattice of f, taken greedily by increasing
/// norm (then enumeration order); a vector is kept when it raises the rank
/// or, at full rank, lowers the index of the span. Returned as columns.
inline IntMatrix short_generating_set(const SymBilinearForm& f) {
  const std::size_t n = f.dim();
  std::vector<IntVector> chosen;
  std::size_t rank = 0;
  Integer index = 0;  // index of the span once full rank
  RatMatrix span_inverse;
  Integer max_norm = 0;
  for (std::size_t i = 0; i < n; ++i) max_norm = std::max(max_norm, f.gram()(i, i));
  ShortVectorEnumerator e(f);
  for (Integer norm = 1; norm <= max_norm && index != 1; ++norm) {
    std::vector<IntVector> level;
    e.for_each(norm, [&](const IntVector& x, const Integer& q) {
      if (q == norm) level.push_back(x);
      return true;
    });
    for (const IntVector& v : level) {
      if (index == 1) break;
      if (rank == n) {
        bool inside = true;
        for (std::size_t i = 0; i < n && inside; ++i) {
          Rational c = 0;
          for (std::size_t j = 0; j < n; ++j) c += span_inverse(i, j) * v[j];
          inside = c.get_den() == 1;
        }
        if (inside) continue;
      }
      std::vector<IntVector> trial = chosen;
      trial.push_back(v);
      ColumnEchelon ce = column_echelon(IntMatrix::from_columns(n, trial));
      if (ce.rank == rank && rank < n) continue;
      chosen = std::move(trial);
      rank = ce.rank;
      if (rank == n) {
        IntMatrix h = ce.H.submatrix(0, 0, n, n);
        index = abs(det(h));
        span_inverse = rational_inverse(h);
      }
    }
  }
  require(index == 1, ErrorKind::InvalidInput, "internal: short vectors failed to generate");
  return IntMatrix::from_columns(n, chosen);
}

/// Full search with statistics. Invariants (rank, determinant, parity,
/// norm-count fingerprint) are compared before any backtracking. The images
/// searched for are those of a short generating set of g; they determine T.
inline IsometrySearchResult search_isometry_definite(const SymBilinearForm& f, const SymBilinearForm& g,
                                                     const IsometrySearchOptions& opt = {}) {
  require(f.is_positive_definite() && g.is_positive_definite(), ErrorKind::UnsupportedIndefinite,
          "isometry testing needs positive definite forms");
  IsometrySearchResult result;
  if (f.dim() != g.dim() || f.determinant() != g.determinant() || f.parity() != g.parity()) {
    result.rejected_by_invariants = true;
    return result;
  }
  const std::size_t n = f.dim();
  if (n == 0) {
    result.isometry = FormIsometry{IntMatrix(0, 0)};
    return result;
  }
  const ReducedBasis rf = pair_reduce(f), rg = pair_reduce(g);
  if (!(fingerprint(rf.form) == fingerprint(rg.form))) {
    result.rejected_by_invariants = true;
    return result;
  }
  const IntMatrix rg_inverse = unimodular_inverse(rg.transform);
  IntMatrix gens = short_generating_set(rg.form);
  if (!opt.pinned.empty()) {
    std::vector<IntVector> cols;
    for (const IntVector& p : opt.pinned) cols.push_back(rg_inverse * p);
    for (std::size_t j = 0; j < gens.cols(); ++j) cols.push_back(gens.column(j));
    gens = IntMatrix::from_columns(n, cols);
  }
  // gens * combine = identity
  ColumnEchelon ce = column_echelon(gens);
  const IntMatrix combine = ce.V.submatrix(0, 0, gens.cols(), n) * unimodular_inverse(ce.H.submatrix(0, 0, n, n));
  // images of gens (reduced source coordinates) -> isometry in original coordinates
  auto assemble = [&](const IntMatrix& images) { return rf.transform * images * combine * rg_inverse; };

  IsometrySearchOptions inner = opt;
  if (opt.accept) {
    inner.accept = [&](const IntMatrix& images) { return opt.accept(assemble(images)); };
  }
  const SymBilinearForm target(congruence(rg.form.gram(), gens));
  std::function<bool(std::size_t, const std::vector<long>&)> level_filter;
  if (opt.pinned_image) {
    level_filter = [&](std::size_t j, const std::vector<long>& v) {
      IntVector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = v[i];
      return opt.pinned_image(j, rf.transform * x);
    };
  }
  Integer fp_norm = target.gram()(0, 0);
  for (std::size_t j = 0; j < gens.cols(); ++j) fp_norm = std::min(fp_norm, target.gram()(j, j));
  const auto target_shortest = detail::small_vectors(rg.form, fp_norm);
  std::vector<detail::VectorFingerprint> tfp;
  for (std::size_t j = 0; j < gens.cols(); ++j) {
    const IntVector gv = rg.form.gram() * gens.column(j);
    std::vector<long> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = detail::to_long(gv[i]);
    tfp.push_back(detail::vector_fingerprint(w, target_shortest));
  }
  detail::DefiniteIsometrySearch search(rf.form.gram(), target.gram(), inner, opt.pinned.size(), level_filter,
                                        std::move(tfp), fp_norm);
  if (!search.candidate_counts_match(rg.form, target)) {
    result.rejected_by_invariants = true;
    return result;
  }
  auto images = search.run(result);
  if (!images) return result;
  IntMatrix full = assemble(*images);
  require(verify_isometry(f, g, full), ErrorKind::InvalidInput, "internal: isometry failed to verify");
  result.isometry = FormIsometry{full};
  return result;
}

/// An isometry from f to g, or nullopt when none exists.
inline std::optional<FormIsometry> is_isometric_definite(const SymBilinearForm& f, const SymBilinearForm& g) {
  return search_isometry_definite(f, g).isometry;
}

}  // namespace z2lat
