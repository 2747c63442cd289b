#pragma once

#include <string>
#include <vector>

#include "groupfx/dataset.hpp"
#include "groupfx/linalg.hpp"

namespace groupfx {

/// Degrees-of-freedom accounting for the centered (no explicit intercept)
/// model: `paper` uses n - k, `conventional` charges the absorbed intercept
/// as well, n - k - 1. Coefficients are identical either way; only sigma and
/// the inference columns move.
enum class DfConvention { paper, conventional };

struct FitResult {
  std::vector<std::string> predictor_names;
  Vector coefficients;            // standardized-model slopes
  SymMatrix unscaled_covariance;  // (X'ᵀX')⁻¹
  SymMatrix cross_product;        // X'ᵀX', the predictor correlation matrix
  double sigma2_hat = 0.0;
  int df = 0;
  double rss = 0.0;
  Vector std_errors;
  Vector t_values;  // NaN on exact fits
  Vector p_values;  // NaN on exact fits
  Vector residuals;
  bool exact_fit = false;
};

/// Coefficients mapped back to the raw scale of the original columns.
struct RawCoefficients {
  double intercept = 0.0;
  Vector slopes;
};

/// OLS on the standardized design (no intercept column; centering absorbs
/// it). Exact fits (rss <= 1e-18 * |y'|^2) report sigma = 0 with t/p
/// suppressed instead of dividing by zero.
FitResult fit_standardized(const StandardizedDataset& sd, DfConvention dfc = DfConvention::paper);

/// slope_i = coefficient_i / scale_i; intercept = ybar - sum(mean_i * slope_i).
RawCoefficients destandardize(const FitResult& fit, const Standardization& s);

/// Two-sided tail probability P(|T_df| >= |t|) via the regularized
/// incomplete beta function; relative error <= 1e-8.
double t_tail_prob(double t, int df);

}  // namespace groupfx
