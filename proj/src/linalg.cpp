#include "groupfx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace groupfx {

namespace {

constexpr int kJacobiMaxSweeps = 100;
constexpr double kJacobiTol = 1e-13;        // of the input Frobenius norm
constexpr double kCholeskyPivotTol = 1e-12; // of the largest diagonal
constexpr double kRankTol = 1e-10;          // of the largest |R| diagonal

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

void apply_sign_convention(Matrix& vectors) {
  for (int k = 0; k < vectors.cols(); ++k) {
    int lead = 0;
    double best = std::abs(vectors(0, k));
    for (int i = 1; i < vectors.rows(); ++i) {
      double m = std::abs(vectors(i, k));
      if (m > best) {
        best = m;
        lead = i;
      }
    }
    if (vectors(lead, k) < 0.0)
      for (int i = 0; i < vectors.rows(); ++i) vectors(i, k) = -vectors(i, k);
  }
}

}  // namespace

SymMatrix SymMatrix::from_matrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: input is not square");
  SymMatrix out(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j <= i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol)
        throw std::invalid_argument("SymMatrix: input is not symmetric at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      out.set(i, j, m(i, j));
    }
  }
  return out;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < order_; ++i) {
    s += (*this)(i, i) * (*this)(i, i);
    for (int j = 0; j < i; ++j) s += 2.0 * (*this)(i, j) * (*this)(i, j);
  }
  return std::sqrt(s);
}

double SymMatrix::max_diag() const {
  double m = 0.0;
  for (int i = 0; i < order_; ++i) m = std::max(m, (*this)(i, i));
  return m;
}

NotPositiveDefiniteError::NotPositiveDefiniteError(int pivot_index_, double pivot_value_)
    : std::runtime_error("matrix is not positive definite: pivot " + std::to_string(pivot_index_) + " = " +
                         std::to_string(pivot_value_)),
      pivot_index(pivot_index_),
      pivot_value(pivot_value_) {}

RankDeficientError::RankDeficientError(int column_index_, double diag_value_)
    : std::runtime_error("design is rank deficient at column " + std::to_string(column_index_) +
                         " (triangular diagonal " + std::to_string(diag_value_) + ")"),
      column_index(column_index_) {}

EigenResult sym_eigen(const SymMatrix& m) {
  const int n = m.order();
  if (n < 1) throw std::invalid_argument("sym_eigen: empty matrix");

  Matrix a = m.to_matrix();
  Matrix v = Matrix::identity(n);
  const double threshold = kJacobiTol * m.frobenius_norm();

  bool converged = false;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;  // avoid theta*theta overflow
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);

        double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          double arp = a(r, p), arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
        for (int r = 0; r < n; ++r) {
          double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > threshold) {
    std::ostringstream msg;
    msg << "sym_eigen did not converge after " << kJacobiMaxSweeps
        << " sweeps; residual off-diagonal norm " << off_diagonal_norm(a);
    throw std::runtime_error(msg.str());
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenResult result;
  result.values.resize(n);
  result.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    result.values[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) result.vectors(i, k) = v(i, order[k]);
  }
  apply_sign_convention(result.vectors);
  return result;
}

Matrix cholesky_lower(const SymMatrix& m) {
  const int n = m.order();
  if (n < 1) throw std::invalid_argument("cholesky_lower: empty matrix");
  const double pivot_floor = kCholeskyPivotTol * m.max_diag();

  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= pivot_floor) throw NotPositiveDefiniteError(j, d);
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

SymMatrix invert_spd(const SymMatrix& m) {
  const int n = m.order();
  Matrix l = cholesky_lower(m);

  // Invert L by forward substitution, then m⁻¹ = L⁻ᵀ L⁻¹.
  Matrix linv(n, n);
  for (int j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += l(i, k) * linv(k, j);
      linv(i, j) = -s / l(i, i);
    }
  }
  SymMatrix inv(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = i; k < n; ++k) s += linv(k, i) * linv(k, j);
      inv.set(i, j, s);
    }
  }
  return inv;
}

OlsSolution ols_solve(const Matrix& x, const Vector& y) {
  const int n = x.rows();
  const int k = x.cols();
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("ols_solve: y length does not match rows");
  if (n <= k) throw std::invalid_argument("ols_solve: need more rows than columns");
  if (k < 1) throw std::invalid_argument("ols_solve: empty design");

  // Householder QR, JAMA-style: reflectors stored below the diagonal,
  // R's diagonal kept separately.
  Matrix qr = x;
  Vector rdiag(k, 0.0);
  for (int j = 0; j < k; ++j) {
    double nrm = 0.0;
    for (int i = j; i < n; ++i) nrm = std::hypot(nrm, qr(i, j));
    if (nrm != 0.0) {
      if (qr(j, j) < 0.0) nrm = -nrm;
      for (int i = j; i < n; ++i) qr(i, j) /= nrm;
      qr(j, j) += 1.0;
      for (int c = j + 1; c < k; ++c) {
        double s = 0.0;
        for (int i = j; i < n; ++i) s += qr(i, j) * qr(i, c);
        s = -s / qr(j, j);
        for (int i = j; i < n; ++i) qr(i, c) += s * qr(i, j);
      }
    }
    rdiag[j] = -nrm;
  }

  double max_diag = 0.0;
  for (int j = 0; j < k; ++j) max_diag = std::max(max_diag, std::abs(rdiag[j]));
  for (int j = 0; j < k; ++j)
    if (std::abs(rdiag[j]) < kRankTol * max_diag || rdiag[j] == 0.0) throw RankDeficientError(j, rdiag[j]);

  // Apply Qᵀ to y, then back-substitute R b = (Qᵀy)₁..k.
  Vector qty = y;
  for (int j = 0; j < k; ++j) {
    double s = 0.0;
    for (int i = j; i < n; ++i) s += qr(i, j) * qty[i];
    s = -s / qr(j, j);
    for (int i = j; i < n; ++i) qty[i] += s * qr(i, j);
  }
  Vector beta(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = qty[i];
    for (int j = i + 1; j < k; ++j) s -= qr(i, j) * beta[j];
    beta[i] = s / rdiag[i];
  }

  // (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ from the triangular factor.
  Matrix rinv(k, k);
  for (int c = 0; c < k; ++c) {
    rinv(c, c) = 1.0 / rdiag[c];
    for (int i = c - 1; i >= 0; --i) {
      double s = 0.0;
      for (int j = i + 1; j <= c; ++j) s += qr(i, j) * rinv(j, c);
      rinv(i, c) = -s / rdiag[i];
    }
  }
  SymMatrix cov(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int c = std::max(i, j); c < k; ++c) s += rinv(i, c) * rinv(j, c);
      cov.set(i, j, s);
    }

  OlsSolution sol;
  sol.coefficients = std::move(beta);
  sol.unscaled_covariance = std::move(cov);
  sol.residuals.resize(n);
  for (int i = 0; i < n; ++i) {
    double fit = 0.0;
    for (int j = 0; j < k; ++j) fit += x(i, j) * sol.coefficients[j];
    sol.residuals[i] = y[i] - fit;
  }
  return sol;
}

double rayleigh_quotient(const SymMatrix& m, const Vector& x) {
  if (static_cast<int>(x.size()) != m.order()) throw std::invalid_argument("rayleigh_quotient: dimension mismatch");
  double xx = dot(x, x);
  if (xx == 0.0) throw std::invalid_argument("rayleigh_quotient: zero vector");
  return quad_form(m, x) / xx;
}

double dot(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

Vector matvec(const Matrix& m, const Vector& v) {
  assert(static_cast<int>(v.size()) == m.cols());
  Vector out(m.rows(), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

Vector matvec_sym(const SymMatrix& m, const Vector& v) {
  assert(static_cast<int>(v.size()) == m.order());
  Vector out(m.order(), 0.0);
  for (int i = 0; i < m.order(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.order(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double quad_form(const SymMatrix& m, const Vector& x) {
  assert(static_cast<int>(x.size()) == m.order());
  double s = 0.0;
  for (int i = 0; i < m.order(); ++i) {
    s += m(i, i) * x[i] * x[i];
    for (int j = 0; j < i; ++j) s += 2.0 * m(i, j) * x[i] * x[j];
  }
  return s;
}

double quad_form_ones(const SymMatrix& m) {
  Vector ones(m.order(), 1.0);
  return quad_form(m, ones);
}

}  // namespace groupfx
