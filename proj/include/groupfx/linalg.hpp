#pragma once

#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace groupfx {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Small and simple; everything here
/// works on matrices with at most a few hundred columns.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {
    assert(rows >= 0 && cols >= 0);
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  Vector col(int j) const {
    Vector v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(int j, const Vector& v) {
    assert(static_cast<int>(v.size()) == rows_);
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix stored as a packed lower triangle, so entries (i,j) and
/// (j,i) are the same storage cell and symmetry holds exactly by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int order) : order_(order), data_(static_cast<size_t>(order) * (order + 1) / 2, 0.0) {
    assert(order >= 0);
  }

  static SymMatrix identity(int order) {
    SymMatrix m(order);
    for (int i = 0; i < order; ++i) m.set(i, i, 1.0);
    return m;
  }

  /// Builds from a dense matrix; rejects inputs that are not symmetric to
  /// within `tol` (absolute, default exact). The stored value is m(i,j).
  static SymMatrix from_matrix(const Matrix& m, double tol = 0.0);

  int order() const { return order_; }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, double v) { data_[index(i, j)] = v; }

  Matrix to_matrix() const {
    Matrix m(order_, order_);
    for (int i = 0; i < order_; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = (*this)(i, j);
    return m;
  }

  double frobenius_norm() const;
  double max_diag() const;

 private:
  size_t index(int i, int j) const {
    assert(i >= 0 && i < order_ && j >= 0 && j < order_);
    if (i < j) std::swap(i, j);
    return static_cast<size_t>(i) * (i + 1) / 2 + j;
  }

  int order_ = 0;
  std::vector<double> data_;
};

/// Cholesky hit a pivot at or below the positive-definiteness threshold.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  NotPositiveDefiniteError(int pivot_index, double pivot_value);
  int pivot_index;
  double pivot_value;
};

/// A triangular-factor diagonal fell below 1e-10 times the largest one.
class RankDeficientError : public std::runtime_error {
 public:
  explicit RankDeficientError(int column_index, double diag_value);
  int column_index;
};

/// Full spectrum of a symmetric matrix. Eigenvalues sorted descending;
/// column k of `vectors` pairs with `values[k]`. Each eigenvector is fixed
/// so its entry of largest magnitude (lowest index on ties) is non-negative,
/// which makes the output deterministic.
struct EigenResult {
  Vector values;
  Matrix vectors;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Converges when
/// the off-diagonal Frobenius norm drops to 1e-13 of the input norm; gives up
/// after 100 sweeps with a diagnostic naming the residual off-diagonal norm.
EigenResult sym_eigen(const SymMatrix& m);

/// Inverse of a symmetric positive definite matrix via Cholesky.
/// Pivot <= 1e-12 * (largest diagonal) throws NotPositiveDefiniteError.
SymMatrix invert_spd(const SymMatrix& m);

/// Lower-triangular Cholesky factor L with m = L Lᵀ. Same pivot rule as
/// invert_spd.
Matrix cholesky_lower(const SymMatrix& m);

struct OlsSolution {
  Vector coefficients;
  SymMatrix unscaled_covariance;  // (XᵀX)⁻¹ recovered from the triangular factor
  Vector residuals;
};

/// Least squares fit of y on the columns of x via Householder QR; the normal
/// equations are never formed. Requires rows > cols; throws RankDeficientError
/// naming the offending column when the design is numerically rank deficient.
OlsSolution ols_solve(const Matrix& x, const Vector& y);

/// (xᵀ M x) / (xᵀ x); throws std::invalid_argument for the zero vector.
double rayleigh_quotient(const SymMatrix& m, const Vector& x);

// Small vector/matrix helpers shared across modules.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
Vector matvec(const Matrix& m, const Vector& v);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
Vector matvec_sym(const SymMatrix& m, const Vector& v);
/// xᵀ M x for symmetric M.
double quad_form(const SymMatrix& m, const Vector& x);
/// 1ᵀ M 1.
double quad_form_ones(const SymMatrix& m);

}  // namespace groupfx
