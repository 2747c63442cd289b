#include "groupfx/effects.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace groupfx {

namespace {

constexpr double kWeightNormTol = 1e-12;
constexpr double kRouteAgreementTol = 1e-10;

void check_weights(const Vector& weights, size_t q) {
  if (weights.size() != q) throw std::invalid_argument("group effect: weight count does not match group size");
  double abs_sum = 0.0;
  for (double w : weights) abs_sum += std::abs(w);
  if (std::abs(abs_sum - 1.0) > kWeightNormTol)
    throw std::invalid_argument("group effect: absolute weights must sum to 1");
}

bool all_equal(const Vector& weights) {
  for (double w : weights)
    if (std::abs(w - weights[0]) > kWeightNormTol) return false;
  return true;
}

// Variance of the effect per unit sigma^2, via the full (X'ᵀX')⁻¹.
double unscaled_variance_full(const FitResult& fit, const std::vector<int>& members, const Vector& weights) {
  double v = 0.0;
  for (size_t a = 0; a < members.size(); ++a)
    for (size_t b = 0; b < members.size(); ++b)
      v += weights[a] * weights[b] * fit.unscaled_covariance(members[a], members[b]);
  return v;
}

// Same quantity through the block inverse: wᵀ [r11 - r12 r22⁻¹ r21]⁻¹ w.
double unscaled_variance_schur(const FitResult& fit, const GroupArrangement& arrangement, const Vector& weights) {
  GroupArrangement in_basis = arrangement;  // fit is already sign-arranged
  in_basis.signs.assign(in_basis.member_indices.size(), 1);
  CorrelationStructure cs = make_correlation_structure(fit.cross_product, fit.predictor_names);
  PartitionedCorrelation part = partition(cs, in_basis);
  SymMatrix schur_inv = invert_spd(part.schur);
  return quad_form(schur_inv, weights);
}

EffectEstimate finish_estimate(const FitResult& fit, double estimate, double unscaled_variance,
                               std::optional<double> floor, Vector weights_used, EffectScale scale) {
  EffectEstimate e;
  e.estimate = estimate;
  e.weights_used = std::move(weights_used);
  e.scale = scale;
  e.exact_fit = fit.exact_fit;
  e.variance_floor = floor;
  if (fit.exact_fit) {
    e.std_error = 0.0;
    e.t_value = std::numeric_limits<double>::quiet_NaN();
    e.p_value = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  e.std_error = std::sqrt(fit.sigma2_hat * unscaled_variance);
  e.t_value = e.estimate / e.std_error;
  e.p_value = t_tail_prob(e.t_value, fit.df);
  return e;
}

}  // namespace

EffectEstimate weighted_effect(const FitResult& fit, const GroupEffectSpec& spec) {
  const std::vector<int>& members = spec.arrangement.member_indices;
  const int p1 = static_cast<int>(fit.coefficients.size());
  check_weights(spec.weights, members.size());
  for (int idx : members)
    if (idx < 0 || idx >= p1) throw std::out_of_range("group effect: member index outside the fitted design");

  double estimate = 0.0;
  for (size_t a = 0; a < members.size(); ++a) estimate += spec.weights[a] * fit.coefficients[members[a]];

  double v_full = unscaled_variance_full(fit, members, spec.weights);
  double v_schur = unscaled_variance_schur(fit, spec.arrangement, spec.weights);
  if (std::abs(v_full - v_schur) > kRouteAgreementTol * std::max(std::abs(v_full), std::abs(v_schur)))
    throw std::runtime_error("group effect variance: full-inverse and block routes disagree");

  std::optional<double> floor;
  if (all_equal(spec.weights)) {
    double sum_w = 0.0;
    for (double w : spec.weights) sum_w += w;
    double q = static_cast<double>(members.size());
    floor = fit.sigma2_hat * (sum_w * sum_w) / (q * q);
  }
  return finish_estimate(fit, estimate, v_full, floor, spec.weights, EffectScale::standardized);
}

Vector variability_weights(const Standardization& s, const std::vector<int>& group) {
  if (group.empty()) throw std::invalid_argument("variability_weights: empty group");
  double total = 0.0;
  for (int idx : group) {
    if (idx < 0 || idx >= static_cast<int>(s.scales.size()))
      throw std::out_of_range("variability_weights: member index out of range");
    total += s.scales[idx];
  }
  Vector w(group.size());
  double renorm = 0.0;
  for (size_t a = 0; a < group.size(); ++a) {
    w[a] = s.scales[group[a]] / total;
    renorm += w[a];
  }
  for (double& v : w) v /= renorm;  // absorb division rounding
  return w;
}

EffectEstimate variability_weighted_effect(const RawCoefficients& raw, const FitResult& fit,
                                           const Standardization& s, const GroupArrangement& arrangement) {
  const std::vector<int>& members = arrangement.member_indices;
  if (members.empty()) throw std::invalid_argument("variability_weighted_effect: empty group");
  Vector w = variability_weights(s, members);

  double estimate = 0.0;
  double scale_sum = 0.0;
  for (size_t a = 0; a < members.size(); ++a) {
    estimate += w[a] * raw.slopes[members[a]];
    scale_sum += s.scales[members[a]];
  }

  // In standardized coordinates w*_i beta_i = beta'_i / sum(s), so the
  // contrast vector has 1/sum(s) at every member position.
  Vector contrast(members.size(), 1.0 / scale_sum);
  double v_full = unscaled_variance_full(fit, members, contrast);
  double v_schur = unscaled_variance_schur(fit, arrangement, contrast);
  if (std::abs(v_full - v_schur) > kRouteAgreementTol * std::max(std::abs(v_full), std::abs(v_schur)))
    throw std::runtime_error("group effect variance: full-inverse and block routes disagree");

  std::optional<double> floor = fit.sigma2_hat / (scale_sum * scale_sum);
  return finish_estimate(fit, estimate, v_full, floor, std::move(w), EffectScale::raw);
}

double variance_floor(int q, double sigma2) {
  if (q < 1) throw std::invalid_argument("variance_floor: q must be >= 1");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("variance_floor: sigma2 must be positive");
  return sigma2 / (static_cast<double>(q) * q);
}

}  // namespace groupfx
