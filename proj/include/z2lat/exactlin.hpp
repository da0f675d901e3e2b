#pragma once

// Exact integer and rational linear algebra. Everything here works on GMP
// integers; there is no floating point path and no fixed-width arithmetic.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "z2lat/error.hpp"

namespace z2lat {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      require(row.size() == cols_, ErrorKind::InvalidInput, "ragged matrix literal");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void set_column(std::size_t j, const std::vector<T>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  static Matrix from_columns(std::size_t rows, const std::vector<std::vector<T>>& columns) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix s(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
    return s;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
  }
  bool is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, ErrorKind::DimensionMismatch, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    T tmp;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          tmp = aik * b(k, j);
          c(i, j) += tmp;
        }
      }
    return c;
  }
  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    require(a.cols_ == v.size(), ErrorKind::DimensionMismatch, "matrix-vector shape mismatch");
    std::vector<T> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
    return out;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::DimensionMismatch,
            "matrix sum shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::DimensionMismatch,
            "matrix difference shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  const std::vector<T>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

// ---------------------------------------------------------------------------
// Scalar helpers

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Nearest integer to a/b, ties toward +infinity.
inline Integer round_div(const Integer& a, const Integer& b) {
  Integer num = 2 * a + b, den = 2 * b;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return floor_div(num, den);
}

inline Integer floor_rational(const Rational& r) {
  return floor_div(r.get_num(), r.get_den());
}

inline Integer round_rational(const Rational& r) {
  return round_div(r.get_num(), r.get_den());
}

/// Representative of r in [0, 1).
inline Rational frac(const Rational& r) {
  Rational out = r - Rational(floor_rational(r));
  out.canonicalize();
  return out;
}

struct ExtendedGcd {
  Integer g, s, t;  // g = s*a + t*b, g >= 0
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  ExtendedGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer vector_gcd(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  require(a.size() == b.size(), ErrorKind::DimensionMismatch, "dot product length mismatch");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// x^T G y for an integer Gram matrix.
inline Integer bilinear(const IntMatrix& gram, const IntVector& x, const IntVector& y) {
  return dot(x, gram * y);
}

inline RatMatrix to_rational(const IntMatrix& a) {
  RatMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rational(a(i, j));
  return r;
}

/// Integer matrix from a rational one; fails if any entry is non-integral.
inline std::optional<IntMatrix> to_integer(const RatMatrix& a) {
  IntMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).get_den() != 1) return std::nullopt;
      r(i, j) = a(i, j).get_num();
    }
  return r;
}

inline IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

/// Symmetric congruence T^T G T.
inline IntMatrix congruence(const IntMatrix& gram, const IntMatrix& t) {
  return t.transpose() * gram * t;
}

// ---------------------------------------------------------------------------
// Determinant and inverse

/// Exact determinant by Bareiss fraction-free elimination.
inline Integer det(const IntMatrix& a) {
  require(a.square(), ErrorKind::NonSquare, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline Rational det(const RatMatrix& a) {
  require(a.square(), ErrorKind::NonSquare, "determinant of a non-square matrix");
  RatMatrix m = a;
  const std::size_t n = m.rows();
  Rational d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      m.swap_rows(p, k);
      d = -d;
    }
    d *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return d;
}

/// Exact inverse over Q by Gauss-Jordan elimination.
inline RatMatrix rational_inverse(const RatMatrix& a) {
  require(a.square(), ErrorKind::NonSquare, "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix m = a;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    require(p < n, ErrorKind::SingularMatrix, "matrix is singular");
    m.swap_rows(p, k);
    inv.swap_rows(p, k);
    Rational pivot_inv = 1 / m(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) *= pivot_inv;
      inv(k, j) *= pivot_inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      Rational f = m(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

inline RatMatrix rational_inverse(const IntMatrix& a) { return rational_inverse(to_rational(a)); }

/// Inverse of a unimodular integer matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
  auto inv = to_integer(rational_inverse(a));
  require(inv.has_value(), ErrorKind::InvalidInput, "matrix is not unimodular");
  return *inv;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithDecomposition {
  IntMatrix U;  // unimodular, rows x rows
  IntMatrix V;  // unimodular, cols x cols
  IntMatrix D;  // diagonal, d_1 | d_2 | ... , all >= 0

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

/// U * A * V = D. Pivot choice: smallest nonzero absolute value in the active
/// block, ties broken by lowest row then lowest column.
inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  require(!a.empty(), ErrorKind::InvalidInput, "Smith normal form of an empty matrix");
  const std::size_t m = a.rows(), n = a.cols();
  SmithDecomposition s{IntMatrix::identity(m), IntMatrix::identity(n), a};
  IntMatrix& d = s.D;
  const std::size_t k_max = std::min(m, n);

  for (std::size_t t = 0; t < k_max; ++t) {
    for (;;) {
      // smallest nonzero pivot in the active block
      std::size_t pi = m, pj = n;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d(i, j) == 0) continue;
          Integer v = abs(d(i, j));
          if (pi == m || v < best) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (pi == m) return s;
      d.swap_rows(t, pi);
      s.U.swap_rows(t, pi);
      d.swap_cols(t, pj);
      s.V.swap_cols(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Integer q = floor_div(d(i, t), d(t, t));
        d.add_row(i, t, -q);
        s.U.add_row(i, t, -q);
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Integer q = floor_div(d(t, j), d(t, t));
        d.add_col(j, t, -q);
        s.V.add_col(j, t, -q);
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // divisibility of the remaining block by the pivot
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      d.add_row(t, bad, Integer(1));
      s.U.add_row(t, bad, Integer(1));
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      s.U.negate_row(t);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Hermite forms and lattices spanned by integer columns

struct ColumnEchelon {
  IntMatrix H;       // A * V, nonzero columns first
  IntMatrix V;       // unimodular
  std::size_t rank;  // number of nonzero columns of H
};

/// Column echelon form by extended-gcd column operations.
inline ColumnEchelon column_echelon(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  ColumnEchelon e{a, IntMatrix::identity(n), 0};
  std::size_t p = 0;
  for (std::size_t i = 0; i < m && p < n; ++i) {
    for (std::size_t j = p + 1; j < n; ++j) {
      if (e.H(i, j) == 0) continue;
      if (e.H(i, p) == 0) {
        e.H.swap_cols(p, j);
        e.V.swap_cols(p, j);
        continue;
      }
      const Integer x = e.H(i, p), y = e.H(i, j);
      ExtendedGcd g = extended_gcd(x, y);
      const Integer xg = x / g.g, yg = y / g.g;
      // [col_p, col_j] <- [s*col_p + t*col_j, -yg*col_p + xg*col_j]
      for (IntMatrix* mat : {&e.H, &e.V}) {
        for (std::size_t r = 0; r < mat->rows(); ++r) {
          Integer cp = (*mat)(r, p), cj = (*mat)(r, j);
          (*mat)(r, p) = g.s * cp + g.t * cj;
          (*mat)(r, j) = -yg * cp + xg * cj;
        }
      }
    }
    if (e.H(i, p) != 0) ++p;
  }
  e.rank = p;
  return e;
}

/// Basis (as columns) of the integer kernel {x : A x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  ColumnEchelon e = column_echelon(a);
  const std::size_t n = a.cols();
  IntMatrix k(n, n - e.rank);
  for (std::size_t j = e.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - e.rank) = e.V(i, j);
  return k;
}

/// Canonical basis of a full-rank lattice given by generating columns: the
/// upper-triangular column Hermite form with positive diagonal and entries
/// right of each pivot reduced into [0, pivot).
inline IntMatrix hermite_basis(const IntMatrix& generators) {
  const std::size_t n = generators.rows();
  IntMatrix g = generators;
  std::vector<bool> used(g.cols(), false);
  std::vector<std::size_t> pivot_col(n);
  for (std::size_t ii = n; ii-- > 0;) {
    std::size_t p = g.cols();
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (used[j] || g(ii, j) == 0) continue;
      if (p == g.cols()) {
        p = j;
        continue;
      }
      const Integer x = g(ii, p), y = g(ii, j);
      ExtendedGcd eg = extended_gcd(x, y);
      const Integer xg = x / eg.g, yg = y / eg.g;
      for (std::size_t r = 0; r < n; ++r) {
        Integer cp = g(r, p), cj = g(r, j);
        g(r, p) = eg.s * cp + eg.t * cj;
        g(r, j) = -yg * cp + xg * cj;
      }
    }
    require(p < g.cols(), ErrorKind::SingularMatrix, "generators do not span a full-rank lattice");
    used[p] = true;
    pivot_col[ii] = p;
    if (g(ii, p) < 0) g.negate_col(p);
  }
  IntMatrix h(n, n);
  for (std::size_t j = 0; j < n; ++j) h.set_column(j, g.column(pivot_col[j]));
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t ii = j; ii-- > 0;) {
      Integer q = floor_div(h(ii, j), h(ii, ii));
      h.add_col(j, ii, -q);
    }
  return h;
}

// ---------------------------------------------------------------------------
// Linear algebra over Z/2

using Mod2Vector = std::vector<int>;

/// Some x with A x = rhs (mod 2), or nullopt if the system is inconsistent.
inline std::optional<Mod2Vector> solve_mod2(const IntMatrix& a, const Mod2Vector& rhs) {
  require(a.rows() == rhs.size(), ErrorKind::DimensionMismatch, "solve_mod2 shape mismatch");
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<int>> aug(m, std::vector<int>(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = mpz_odd_p(a(i, j).get_mpz_t()) ? 1 : 0;
    aug[i][n] = rhs[i] & 1;
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && aug[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(aug[p], aug[r]);
    for (std::size_t i = 0; i < m; ++i)
      if (i != r && aug[i][c])
        for (std::size_t j = c; j <= n; ++j) aug[i][j] ^= aug[r][j];
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (aug[i][n]) return std::nullopt;
  Mod2Vector x(n, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][n];
  return x;
}

/// Rank of A over Z/2.
inline std::size_t rank_mod2(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<int>> w(m, std::vector<int>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i][j] = mpz_odd_p(a(i, j).get_mpz_t()) ? 1 : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && w[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(w[p], w[r]);
    for (std::size_t i = r + 1; i < m; ++i)
      if (w[i][c])
        for (std::size_t j = c; j < n; ++j) w[i][j] ^= w[r][j];
    ++r;
  }
  return r;
}

inline IntMatrix reduce_mod(const IntMatrix& a, const Integer& modulus) {
  IntMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = mod_floor(a(i, j), modulus);
  return r;
}

/// Sublattice {x in Z^n : w . x = 0 (mod d)}, returned as its Hermite basis.
inline IntMatrix congruence_sublattice(const IntVector& w, const Integer& d) {
  const std::size_t n = w.size();
  if (d == 1) return IntMatrix::identity(n);
  // kernel of [w | d] projected onto the first n coordinates
  IntMatrix row(1, n + 1);
  for (std::size_t i = 0; i < n; ++i) row(0, i) = w[i];
  row(0, n) = d;
  IntMatrix k = integer_kernel(row);
  IntMatrix gens(n, k.cols());
  for (std::size_t j = 0; j < k.cols(); ++j)
    for (std::size_t i = 0; i < n; ++i) gens(i, j) = k(i, j);
  return hermite_basis(gens);
}

}  // namespace z2lat
