#pragma once

#include <optional>
#include <vector>

#include "groupfx/correlation.hpp"
#include "groupfx/regression.hpp"

namespace groupfx {

/// A group effect: weights over the members of an arranged group, normalized
/// so the absolute weights sum to one. A single weight of 1 degenerates to an
/// individual coefficient.
struct GroupEffectSpec {
  GroupArrangement arrangement;
  Vector weights;
};

enum class EffectScale { standardized, raw };

struct EffectEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double t_value = 0.0;   // NaN on exact fits
  double p_value = 0.0;   // NaN on exact fits
  std::optional<double> variance_floor;  // only claimed for equal-weight averages
  Vector weights_used;
  EffectScale scale = EffectScale::standardized;
  bool exact_fit = false;
};

/// Point estimate and inference for sum(w_i * coefficient_i) over the group
/// members. The fit must already be in the arrangement's sign basis (flips
/// applied to the design before fitting). The variance is computed from the
/// fit's full inverse cross-product and cross-checked internally against the
/// Schur-complement block route; disagreement beyond 1e-10 relative is a
/// numerical fault and throws.
EffectEstimate weighted_effect(const FitResult& fit, const GroupEffectSpec& spec);

/// w*_i = s_i / sum(s_j) over the group, renormalized to sum exactly to 1.
Vector variability_weights(const Standardization& s, const std::vector<int>& group);

/// The variability-weighted effect on the raw scale: sum(w*_i * slope_i).
/// Its variance floor is sigma^2 / (sum of the group's scales)^2.
EffectEstimate variability_weighted_effect(const RawCoefficients& raw, const FitResult& fit,
                                           const Standardization& s, const GroupArrangement& arrangement);

/// Lower bound sigma2 / q^2 on the variance of the equal-weight effect of a
/// q-member group that is uncorrelated with the remaining predictors.
double variance_floor(int q, double sigma2);

}  // namespace groupfx
