#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "freeloci/errors.hpp"
#include "freeloci/scalar.hpp"

namespace freeloci {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix of exact scalars. The 0x0 matrix is a valid value.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Scalar>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw PreconditionError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
    return m;
  }
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  /// Matrix unit E_{ij} (0-based indices).
  static Matrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
    Matrix m(rows, cols);
    m(i, j) = 1;
    return m;
  }
  static Matrix diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
    return m;
  }
  static Matrix column(const Vector& v) {
    Matrix m(v.size(), 1);
    for (std::size_t k = 0; k < v.size(); ++k) m(k, 0) = v[k];
    return m;
  }
  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& cols) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Scalar>& entries() const noexcept { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
  }
  bool is_real() const {
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_real(); });
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j).conj();
    return t;
  }
  Matrix conj() const {
    Matrix t = *this;
    for (auto& s : t.data_) s = s.conj();
    return t;
  }

  Scalar trace() const {
    Scalar t;
    for (std::size_t k = 0; k < std::min(rows_, cols_); ++k) t += (*this)(k, k);
    return t;
  }

  Vector col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  /// Row-major flattening, used to treat matrices as vectors of an algebra.
  const Vector& vec() const noexcept { return data_; }
  static Matrix unvec(std::size_t rows, std::size_t cols, Vector v) {
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(v);
    return m;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const {
    Matrix b(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const Scalar& s) {
    for (auto& e : data_) e *= s;
    return *this;
  }
  Matrix operator-() const {
    Matrix m = *this;
    for (auto& e : m.data_) e = -e;
    return m;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }
  friend Matrix operator*(const Scalar& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Scalar& bkj = b(k, j);
          if (!bkj.is_zero()) c(i, j) += aik * bkj;
        }
      }
    return c;
  }

  friend Vector operator*(const Matrix& a, const Vector& v) {
    if (a.cols_ != v.size()) throw PreconditionError("matrix-vector shape mismatch");
    Vector r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (!a(i, k).is_zero() && !v[k].is_zero()) r[i] += a(i, k) * v[k];
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

using MatrixTuple = std::vector<Matrix>;

inline bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

inline Vector operator+(Vector a, const Vector& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}
inline Vector operator-(Vector a, const Vector& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
  return a;
}
inline Vector operator*(const Scalar& s, Vector a) {
  for (auto& e : a) e *= s;
  return a;
}
inline Scalar dot(const Vector& a, const Vector& b) {
  Scalar s;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!a[k].is_zero() && !b[k].is_zero()) s += a[k] * b[k];
  return s;
}
inline Vector unit_vector(std::size_t n, std::size_t k) {
  Vector v(n);
  v[k] = 1;
  return v;
}

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Scalar& s = a(i, j);
      if (s.is_zero()) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          if (!b(p, q).is_zero()) k(i * b.rows() + p, j * b.cols() + q) = s * b(p, q);
    }
  return k;
}

inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

inline Matrix power(const Matrix& m, std::size_t e) {
  Matrix r = Matrix::identity(m.rows());
  for (std::size_t k = 0; k < e; ++k) r = r * m;
  return r;
}

inline bool is_nilpotent(const Matrix& m) { return power(m, m.rows()).is_zero(); }

inline bool all_square_of_size(const MatrixTuple& t, std::size_t n) {
  return std::all_of(t.begin(), t.end(),
                     [n](const Matrix& m) { return m.rows() == n && m.cols() == n; });
}

// ---------------------------------------------------------------------------
// Elimination

namespace detail {

/// Rows of `m` scaled by the lcm of their denominators so that every entry is a
/// (Gaussian) integer. Returns the product of the scale factors.
inline mpz_class integerize_rows(const Matrix& m, std::vector<std::vector<mpz_class>>& out) {
  mpz_class scale = 1;
  out.assign(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).re().get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const mpq_class& q = m(i, j).re();
      out[i][j] = q.get_num() * (l / q.get_den());
    }
    scale *= l;
  }
  return scale;
}

/// Fraction-free Bareiss elimination on an integer matrix. Returns the rank; if
/// `det` is non-null and the matrix is square, stores the determinant.
inline std::size_t bareiss_integer(std::vector<std::vector<mpz_class>> a, std::size_t cols,
                                   mpz_class* det) {
  const std::size_t rows = a.size();
  mpz_class prev = 1;
  int sign = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && sgn(a[piv][col]) == 0) ++piv;
    if (piv == rows) {
      if (det) *det = 0;
      continue;
    }
    if (piv != rank) {
      std::swap(a[piv], a[rank]);
      sign = -sign;
    }
    const mpz_class& p = a[rank][col];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const mpz_class aic = a[i][col];
      for (std::size_t j = col + 1; j < cols; ++j) {
        mpz_class v = p * a[i][j] - aic * a[rank][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(v);
      }
      a[i][col] = 0;
    }
    prev = p;
    ++rank;
  }
  if (det) {
    if (rank < rows || rows != cols)
      *det = 0;
    else
      *det = rows == 0 ? mpz_class(1) : mpz_class(a[rows - 1][cols - 1] * sign);
  }
  return rank;
}

/// Bareiss elimination over Scalar (used when entries are not real). Divisions are
/// exact field divisions, so the result is exact regardless of integrality.
inline std::size_t bareiss_scalar(Matrix a, Scalar* det) {
  const std::size_t rows = a.rows(), cols = a.cols();
  Scalar prev = 1;
  int sign = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a(piv, col).is_zero()) ++piv;
    if (piv == rows) continue;
    if (piv != rank) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(rank, j));
      sign = -sign;
    }
    const Scalar p = a(rank, col);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const Scalar aic = a(i, col);
      for (std::size_t j = col + 1; j < cols; ++j)
        a(i, j) = (p * a(i, j) - aic * a(rank, j)) / prev;
      a(i, col) = 0;
    }
    prev = p;
    ++rank;
  }
  if (det) {
    if (rank < rows || rows != cols)
      *det = 0;
    else
      *det = rows == 0 ? Scalar(1) : Scalar(sign) * a(rows - 1, cols - 1);
  }
  return rank;
}

}  // namespace detail

/// Exact determinant via fraction-free elimination. det of the 0x0 matrix is 1.
inline Scalar det(const Matrix& m) {
  if (!m.is_square()) throw PreconditionError("determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  if (m.is_real()) {
    std::vector<std::vector<mpz_class>> a;
    mpz_class scale = detail::integerize_rows(m, a);
    mpz_class d;
    detail::bareiss_integer(std::move(a), m.cols(), &d);
    return Scalar(mpq_class(d, scale));
  }
  Scalar d;
  detail::bareiss_scalar(m, &d);
  return d;
}

inline std::size_t rank(const Matrix& m) {
  if (m.is_real()) {
    std::vector<std::vector<mpz_class>> a;
    detail::integerize_rows(m, a);
    return detail::bareiss_integer(std::move(a), m.cols(), nullptr);
  }
  return detail::bareiss_scalar(m, nullptr);
}

/// Reduced row echelon form with the list of pivot columns.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

inline Echelon rref(Matrix a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c).is_zero()) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
    const Scalar inv = a(r, c).inverse();
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const Scalar f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (!a(r, j).is_zero()) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

struct RankKernel {
  std::size_t rank = 0;
  std::vector<Vector> kernel;  // basis of the right null space
};

/// Rank and a basis of {v : m v = 0}; rank + kernel.size() == m.cols().
inline RankKernel rank_kernel(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  RankKernel out;
  out.rank = e.pivots.size();
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = 1;
    for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.reduced(k, free);
    out.kernel.push_back(std::move(v));
  }
  return out;
}

inline std::vector<Vector> kernel(const Matrix& m) { return rank_kernel(m).kernel; }

inline std::size_t kernel_dimension(const Matrix& m) { return m.cols() - rank(m); }

/// Affine solution set of m x = rhs: a particular solution and a kernel basis.
struct LinearSolution {
  Vector particular;
  std::vector<Vector> kernel;
};

inline std::optional<LinearSolution> solve(const Matrix& m, const Vector& rhs) {
  if (rhs.size() != m.rows()) throw PreconditionError("right-hand side has wrong length");
  Matrix aug(m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = rhs[i];
  Echelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  LinearSolution sol;
  sol.particular.assign(m.cols(), Scalar());
  for (std::size_t k = 0; k < e.pivots.size(); ++k)
    sol.particular[e.pivots[k]] = e.reduced(k, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = 1;
    for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.reduced(k, free);
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Matrix::identity(n));
  Echelon e = rref(aug);
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  return e.reduced.block(0, n, n, n);
}

/// Solves m * X = rhs for a matrix X when m is invertible.
inline std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& rhs) {
  const std::size_t n = m.rows();
  Matrix aug(n, n + rhs.cols());
  aug.set_block(0, 0, m);
  aug.set_block(0, n, rhs);
  Echelon e = rref(aug);
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  return e.reduced.block(0, n, n, rhs.cols());
}

/// Solves m * X = rhs for m of full column rank; nullopt when inconsistent.
inline std::optional<Matrix> solve_full_column_rank(const Matrix& m, const Matrix& rhs) {
  if (rhs.rows() != m.rows()) throw PreconditionError("right-hand side has wrong height");
  const std::size_t c = m.cols();
  Matrix aug(m.rows(), c + rhs.cols());
  aug.set_block(0, 0, m);
  aug.set_block(0, c, rhs);
  Echelon e = rref(aug);
  if (e.pivots.size() != c || (c > 0 && e.pivots[c - 1] != c - 1)) return std::nullopt;
  return e.reduced.block(0, c, c, rhs.cols());
}

/// Incrementally built subspace of k^n that can express members in terms of the
/// vectors that were accepted into it (in insertion order).
class LinearSpan {
 public:
  explicit LinearSpan(std::size_t ambient = 0) : ambient_(ambient) {}

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// Adds v if it is independent of the current span; returns whether it was added.
  bool insert(const Vector& v) {
    auto [residual, combo] = reduce(v);
    std::size_t pivot = 0;
    while (pivot < residual.size() && residual[pivot].is_zero()) ++pivot;
    if (pivot == residual.size()) return false;
    // residual = accepted_new + sum_k combo_k * accepted_k
    combo.push_back(1);
    const Scalar inv = residual[pivot].inverse();
    for (auto& s : residual) s *= inv;
    for (auto& s : combo) s *= inv;
    for (auto& row : combos_) row.emplace_back();
    rows_.push_back(std::move(residual));
    combos_.push_back(std::move(combo));
    pivots_.push_back(pivot);
    return true;
  }

  bool contains(const Vector& v) const { return is_zero(reduce(v).first); }

  /// Coordinates of v with respect to the accepted vectors, or nullopt if v is not
  /// in the span.
  std::optional<Vector> coordinates(const Vector& v) const {
    auto [residual, combo] = reduce(v);
    if (!is_zero(residual)) return std::nullopt;
    // v + sum combo_k accepted_k == 0  =>  v = -combo
    for (auto& s : combo) s = -s;
    return combo;
  }

 private:
  // Returns (residual, combo) with residual = v + sum_k combo_k * accepted_k.
  std::pair<Vector, Vector> reduce(const Vector& v) const {
    if (v.size() != ambient_) throw PreconditionError("vector has wrong ambient dimension");
    Vector residual = v;
    Vector combo(rows_.size());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Scalar f = residual[pivots_[k]];
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < ambient_; ++j)
        if (!rows_[k][j].is_zero()) residual[j] -= f * rows_[k][j];
      for (std::size_t j = 0; j < combo.size(); ++j)
        if (!combos_[k][j].is_zero()) combo[j] -= f * combos_[k][j];
    }
    return {std::move(residual), std::move(combo)};
  }

  std::size_t ambient_;
  std::vector<Vector> rows_;    // echelon rows, pivot entry 1
  std::vector<Vector> combos_;  // rows_[k] = sum_j combos_[k][j] * accepted_j
  std::vector<std::size_t> pivots_;
};

/// Coordinates with respect to a fixed list of independent vectors. Uses a square
/// invertible block on pivot positions and checks the reconstruction, which keeps
/// entries small compared to running echelon updates.
class CoordinateFrame {
 public:
  CoordinateFrame() = default;
  CoordinateFrame(std::size_t ambient, std::vector<Vector> vectors) : ambient_(ambient), vectors_(std::move(vectors)) {
    const std::size_t m = vectors_.size();
    Matrix t(m, ambient_);
    for (std::size_t k = 0; k < m; ++k) {
      if (vectors_[k].size() != ambient_) throw PreconditionError("vector has wrong ambient dimension");
      for (std::size_t j = 0; j < ambient_; ++j) t(k, j) = vectors_[k][j];
    }
    pivots_ = rref(t).pivots;
    if (pivots_.size() != m) throw InvariantViolation("coordinate frame vectors are dependent");
    Matrix square(m, m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t k = 0; k < m; ++k) square(r, k) = vectors_[k][pivots_[r]];
    inverse_ = *inverse(square);
  }

  std::size_t size() const noexcept { return vectors_.size(); }
  std::size_t ambient() const noexcept { return ambient_; }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }

  std::optional<Vector> coordinates(const Vector& v) const {
    if (v.size() != ambient_) throw PreconditionError("vector has wrong ambient dimension");
    const std::size_t m = vectors_.size();
    Vector c(m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t k = 0; k < m; ++k)
        if (!inverse_(r, k).is_zero() && !v[pivots_[k]].is_zero()) c[r] += inverse_(r, k) * v[pivots_[k]];
    Vector back(ambient_);
    for (std::size_t k = 0; k < m; ++k)
      if (!c[k].is_zero())
        for (std::size_t j = 0; j < ambient_; ++j)
          if (!vectors_[k][j].is_zero()) back[j] += c[k] * vectors_[k][j];
    if (back != v) return std::nullopt;
    return c;
  }
  bool contains(const Vector& v) const { return coordinates(v).has_value(); }

 private:
  std::size_t ambient_ = 0;
  std::vector<Vector> vectors_;
  std::vector<std::size_t> pivots_;
  Matrix inverse_;
};

}  // namespace freeloci
