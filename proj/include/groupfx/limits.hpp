#pragma once

#include <cstdint>
#include <vector>

#include "groupfx/linalg.hpp"

namespace groupfx {

/// One point of the equicorrelation trace toward the fully-correlated limit.
/// quad_form is 1ᵀR⁻¹1, eigvec_gap the distance of the top eigenvector from
/// the normalized ones vector, perturbation_norm the spectral distance from
/// the all-ones matrix, var_ratio the equal-weight effect variance per unit
/// error variance (quad_form / q²).
struct LimitTracePoint {
  double rho = 0.0;
  double lambda1 = 0.0;
  double eigvec_gap = 0.0;
  double quad_form = 0.0;
  double perturbation_norm = 0.0;
  double var_ratio = 0.0;
};

struct SimulationReport {
  int q = 0;
  int n = 0;
  double rho = 0.0;
  double sigma = 0.0;
  long n_reps = 0;
  uint64_t seed = 0;
  double empirical_var = 0.0;    // sample variance of the equal-weight effect
  double theoretical_var = 0.0;  // block-formula value on the realized design
  double ratio = 0.0;            // empirical / theoretical (NaN when sigma = 0)
  Vector per_coefficient_var;    // empirical variances of individual slopes
};

/// Unit diagonal, all off-diagonals rho. rho must lie in (-1/(q-1), 1),
/// the open interval where the matrix is positive definite.
SymMatrix equicorrelation_matrix(int q, double rho);

/// Evaluates one LimitTracePoint per grid value (grid strictly ascending),
/// all computed numerically from the matrix, never from closed forms.
std::vector<LimitTracePoint> limit_trace(int q, const Vector& rho_grid);

/// n x q design whose sample correlation approximates `target`: Gaussian
/// rows pushed through the target's Cholesky factor, then centered and
/// length-normalized column-wise. Deterministic for a fixed seed.
Matrix random_correlated_design(int n, const SymMatrix& target, uint64_t seed);

/// Monte Carlo check of the equal-weight effect variance: one fixed design
/// per report, fresh Gaussian noise per replication (stream derived from
/// (seed, replication index)), moments accumulated in index order.
SimulationReport simulate_group_effect(int q, int n, double rho, const Vector& beta_prime, double sigma,
                                       long n_reps, uint64_t seed);

}  // namespace groupfx
