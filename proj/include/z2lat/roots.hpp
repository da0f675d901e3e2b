#pragma once

// Short vector enumeration in positive definite forms (Fincke-Pohst with
// exact rational bounds) and the root counts built on top of it.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "z2lat/exterior.hpp"
#include "z2lat/forms.hpp"

namespace z2lat {

/// Worker count for parallel enumeration: Z2LAT_THREADS if set, else the
/// hardware concurrency.
inline unsigned worker_threads() {
  if (const char* env = std::getenv("Z2LAT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 8u);
}

class ShortVectorEnumerator {
 public:
  explicit ShortVectorEnumerator(const SymBilinearForm& f) : n_(f.dim()), diag_(n_), mu_(n_, n_) {
    require(f.is_positive_definite(), ErrorKind::UnsupportedIndefinite,
            "enumeration needs a positive definite form");
    // q(x) = sum_i diag_i (x_i + sum_{j>i} mu_ij x_j)^2
    RatMatrix q = to_rational(f.gram());
    for (std::size_t i = 0; i < n_; ++i) {
      diag_[i] = q(i, i);
      for (std::size_t j = i + 1; j < n_; ++j) mu_(i, j) = q(i, j) / q(i, i);
      for (std::size_t k = i + 1; k < n_; ++k)
        for (std::size_t l = k; l < n_; ++l) {
          q(k, l) -= q(i, k) * mu_(i, l);
          q(l, k) = q(k, l);
        }
    }
  }

  std::size_t dim() const noexcept { return n_; }

  /// Calls visit(x, norm) for every nonzero x with x^T G x <= bound. The
  /// visitor returns false to stop early.
  template <typename Visit>
  void for_each(const Integer& bound, Visit&& visit) const {
    if (n_ == 0) return;
    IntVector x(n_);
    bool stop = false;
    recurse(n_ - 1, Rational(bound), Rational(bound), x, visit, stop, nullptr);
  }

  /// Same, restricted to vectors whose last coordinate equals top.
  template <typename Visit>
  void for_each_with_top(const Integer& bound, const Integer& top, Visit&& visit) const {
    if (n_ == 0) return;
    IntVector x(n_);
    bool stop = false;
    recurse(n_ - 1, Rational(bound), Rational(bound), x, visit, stop, &top);
  }

  /// Inclusive range containing every feasible last coordinate.
  std::pair<Integer, Integer> top_range(const Integer& bound) const {
    Integer s = isqrt_floor(Rational(bound) / diag_[n_ - 1]);
    return {-s - 1, s + 1};
  }

 private:
  static Integer isqrt_floor(const Rational& t) {
    Integer fl = floor_rational(t);
    if (fl <= 0) return 0;
    Integer s;
    mpz_sqrt(s.get_mpz_t(), fl.get_mpz_t());
    return s;
  }

  template <typename Visit>
  void recurse(std::size_t i, const Rational& bound, const Rational& remaining, IntVector& x,
               Visit& visit, bool& stop, const Integer* top) const {
    Rational center = 0;
    for (std::size_t j = i + 1; j < n_; ++j)
      if (x[j] != 0) center -= mu_(i, j) * x[j];
    const Integer s = isqrt_floor(remaining / diag_[i]);
    const Integer base = floor_rational(center);
    Integer lo = base - s - 1, hi = base + s + 1;
    if (top != nullptr && i == n_ - 1) {
      if (*top < lo || *top > hi) return;
      lo = hi = *top;
    }
    Rational t, contribution;
    for (Integer v = lo; v <= hi && !stop; ++v) {
      t = Rational(v) - center;
      contribution = diag_[i] * t * t;
      if (contribution > remaining) continue;
      x[i] = v;
      Rational left = remaining - contribution;
      if (i == 0) {
        bool nonzero = std::any_of(x.begin(), x.end(), [](const Integer& c) { return c != 0; });
        if (nonzero) {
          Rational norm = bound - left;
          if (!visit(static_cast<const IntVector&>(x), norm.get_num())) stop = true;
        }
      } else {
        recurse(i - 1, bound, left, x, visit, stop, top);
      }
    }
    x[i] = 0;
  }

  std::size_t n_;
  std::vector<Rational> diag_;
  RatMatrix mu_;
};

/// All vectors (both signs) with x^T G x == norm.
inline std::vector<IntVector> vectors_of_norm(const SymBilinearForm& f, const Integer& norm) {
  std::vector<IntVector> out;
  ShortVectorEnumerator(f).for_each(norm, [&](const IntVector& x, const Integer& q) {
    if (q == norm) out.push_back(x);
    return true;
  });
  return out;
}

/// Number of lattice vectors of the given norm, v and -v counted separately.
inline Integer count_vectors_of_norm(const SymBilinearForm& f, const Integer& norm) {
  require(f.is_positive_definite(), ErrorKind::UnsupportedIndefinite,
          "vector counting needs a positive definite form");
  if (f.dim() == 0 || norm <= 0) return 0;
  ShortVectorEnumerator e(f);
  auto [lo, hi] = e.top_range(norm);
  const unsigned threads = worker_threads();
  Integer span = hi - lo + 1;
  if (threads <= 1 || span < 2) {
    Integer count = 0;
    e.for_each(norm, [&](const IntVector&, const Integer& q) {
      if (q == norm) ++count;
      return true;
    });
    return count;
  }
  // one slot per top-level value, summed in order
  std::vector<Integer> tops;
  for (Integer v = lo; v <= hi; ++v) tops.push_back(v);
  std::vector<Integer> partial(tops.size());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < tops.size(); k += threads) {
        Integer c = 0;
        e.for_each_with_top(norm, tops[k], [&](const IntVector&, const Integer& q) {
          if (q == norm) ++c;
          return true;
        });
        partial[k] = c;
      }
    });
  }
  for (auto& t : pool) t.join();
  Integer total = 0;
  for (const auto& c : partial) total += c;
  return total;
}

struct NormCountFingerprint {
  std::map<long, Integer> counts;  // norm -> count, norms 1..3
  Integer min_norm;

  friend bool operator==(const NormCountFingerprint& a, const NormCountFingerprint& b) {
    return a.counts == b.counts && a.min_norm == b.min_norm;
  }
};

inline NormCountFingerprint fingerprint(const SymBilinearForm& f) {
  require(f.is_positive_definite(), ErrorKind::UnsupportedIndefinite,
          "fingerprint needs a positive definite form");
  NormCountFingerprint fp;
  for (long n = 1; n <= 3; ++n) fp.counts[n] = 0;
  if (f.dim() == 0) return fp;
  Integer min_norm = f.gram()(0, 0);
  for (std::size_t i = 0; i < f.dim(); ++i) min_norm = std::min(min_norm, f.gram()(i, i));
  ShortVectorEnumerator(f).for_each(std::max<Integer>(3, min_norm),
                                    [&](const IntVector&, const Integer& q) {
                                      if (q <= 3) ++fp.counts[q.get_si()];
                                      if (q < min_norm) min_norm = q;
                                      return true;
                                    });
  fp.min_norm = min_norm;
  return fp;
}

inline Integer binomial2(long k) { return Integer(k) * (k - 1) / 2; }

/// Roots of E8 + ext((1)^k) and of ext((1)^(k+8)): 240 + 4 C(k,2) and
/// 4 C(k+8,2).
inline std::pair<Integer, Integer> closed_form_counts(long k) {
  require(k >= 0, ErrorKind::InvalidInput, "k must be non-negative");
  return {240 + 4 * binomial2(k), 4 * binomial2(k + 8)};
}

struct SubstitutionReport {
  bool bijective = false;
  std::size_t form_solutions = 0;     // x^T B x = 2
  std::size_t squares_solutions = 0;  // X1^2 + x2^2 + ... + xk^2 = 2
};

/// Checks the change of variables X1 = 2 x1 + x2 + ... + xk that turns
/// x^T B x = 2 (B the exterior matrix of (1)^k) into a sum of squares.
inline SubstitutionReport substitution_check(long k) {
  require(k >= 2 && k <= 8, ErrorKind::InvalidInput, "substitution check supports 2 <= k <= 8");
  const SymBilinearForm b = exterior_matrix_closed_form(static_cast<std::size_t>(k));
  const std::vector<IntVector> lhs = vectors_of_norm(b, 2);
  const std::vector<IntVector> rhs = vectors_of_norm(diagonal_ones(static_cast<std::size_t>(k)), 2);

  SubstitutionReport report;
  report.form_solutions = lhs.size();
  report.squares_solutions = rhs.size();

  auto forward = [](const IntVector& x) {
    IntVector y = x;
    Integer tail = 0;
    for (std::size_t i = 1; i < x.size(); ++i) tail += x[i];
    y[0] = 2 * x[0] + tail;
    return y;
  };
  std::vector<IntVector> image;
  for (const auto& x : lhs) image.push_back(forward(x));
  std::sort(image.begin(), image.end());
  std::vector<IntVector> target = rhs;
  std::sort(target.begin(), target.end());
  bool ok = image == target && std::adjacent_find(image.begin(), image.end()) == image.end();

  // inverse: X1 - (x2 + ... + xk) is even and fixes x1
  for (const auto& y : rhs) {
    Integer tail = 0;
    for (std::size_t i = 1; i < y.size(); ++i) tail += y[i];
    Integer diff = y[0] - tail;
    if (mpz_odd_p(diff.get_mpz_t())) {
      ok = false;
      continue;
    }
    IntVector x = y;
    x[0] = diff / 2;
    if (b.norm(x) != 2) ok = false;
  }
  report.bijective = ok;
  return report;
}

}  // namespace z2lat
