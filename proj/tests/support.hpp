#pragma once

// Shared helpers for the test suites. The solvers here are deliberately
// independent of the library's factorizations so they can serve as oracles.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "groupfx/linalg.hpp"
#include "groupfx/rng.hpp"

namespace testsupport {

using groupfx::Matrix;
using groupfx::SymMatrix;
using groupfx::Vector;

/// Gaussian elimination with partial pivoting; no triangular factors shared
/// with the library code under test.
inline Vector gauss_solve(Matrix a, Vector b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw std::invalid_argument("gauss_solve: shape");
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) throw std::runtime_error("gauss_solve: singular");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  Vector x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

/// Least squares by explicitly formed normal equations + gauss_solve.
/// Numerically worse than the library path on purpose; fine as an oracle on
/// well-conditioned problems.
inline Vector normal_equations_ols(const Matrix& x, const Vector& y) {
  const int k = x.cols();
  Matrix xtx(k, k);
  Vector xty(k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int r = 0; r < x.rows(); ++r) s += x(r, i) * x(r, j);
      xtx(i, j) = s;
    }
    double s = 0.0;
    for (int r = 0; r < x.rows(); ++r) s += x(r, i) * y[r];
    xty[i] = s;
  }
  return gauss_solve(xtx, xty);
}

inline Matrix random_matrix(groupfx::Rng& rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * rng.next_uniform();
  return m;
}

inline SymMatrix random_symmetric(groupfx::Rng& rng, int order) {
  SymMatrix m(order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, -1.0 + 2.0 * rng.next_uniform());
  return m;
}

/// Random full-rank correlation matrix: G Gᵀ with Gaussian G (extra columns
/// keep it comfortably positive definite), rescaled to unit diagonal.
inline SymMatrix random_correlation(groupfx::Rng& rng, int order) {
  Matrix g(order, order + 2);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order + 2; ++j) g(i, j) = rng.next_gaussian();
  SymMatrix a(order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < order + 2; ++k) s += g(i, k) * g(j, k);
      a.set(i, j, s);
    }
  SymMatrix r(order);
  for (int i = 0; i < order; ++i) {
    r.set(i, i, 1.0);
    for (int j = 0; j < i; ++j) r.set(i, j, a(i, j) / std::sqrt(a(i, i) * a(j, j)));
  }
  return r;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j <= i; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// Two-sided t tail probability by adaptive Simpson quadrature over the
/// density; an oracle for the incomplete-beta implementation.
inline double t_tail_by_quadrature(double t, int df) {
  double nu = df;
  // log normalizing constant via lgamma (libm), independent of the library's
  // hand-rolled gammln.
  double logc = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI);
  auto density = [&](double x) { return std::exp(logc - 0.5 * (nu + 1.0) * std::log1p(x * x / nu)); };
  double a = std::abs(t);
  double b = a + 400.0;  // tail beyond is ~x^(-nu-1), negligible at these dfs
  const int steps = 40000;  // even
  double h = (b - a) / steps;
  double sum = density(a) + density(b);
  for (int i = 1; i < steps; ++i) sum += density(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return 2.0 * sum * h / 3.0;
}

}  // namespace testsupport
