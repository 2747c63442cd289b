#include "groupfx/regression.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace groupfx {

namespace {

// Lanczos-style log-gamma, the usual six-coefficient table. Good to ~1e-10
// relative, plenty for 1e-8 tail probabilities.
double gammln(double xx) {
  static const double cof[6] = {76.18009172947146,     -86.50532032941677,   24.01409824083091,
                                -1.231739572450155,    0.1208650973866179e-2, -0.5395239384953e-5};
  double x = xx;
  double y = xx;
  double tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (int j = 0; j <= 5; ++j) ser += cof[j] / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-14;
  constexpr double kFpMin = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

// Regularized incomplete beta I_x(a, b).
double betai(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("betai: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double bt = std::exp(gammln(a + b) - gammln(a) - gammln(b) + a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double t_tail_prob(double t, int df) {
  if (df < 1) throw std::invalid_argument("t_tail_prob: df must be >= 1");
  if (t == 0.0) return 1.0;
  double nu = df;
  return betai(0.5 * nu, 0.5, nu / (nu + t * t));
}

FitResult fit_standardized(const StandardizedDataset& sd, DfConvention dfc) {
  const int n = sd.x.rows();
  const int k = sd.x.cols();

  OlsSolution sol = ols_solve(sd.x, sd.y);

  FitResult fit;
  fit.predictor_names = sd.predictor_names;
  fit.coefficients = std::move(sol.coefficients);
  fit.unscaled_covariance = std::move(sol.unscaled_covariance);
  fit.residuals = std::move(sol.residuals);

  fit.cross_product = SymMatrix(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int row = 0; row < n; ++row) s += sd.x(row, i) * sd.x(row, j);
      fit.cross_product.set(i, j, s);
    }

  fit.df = (dfc == DfConvention::paper) ? n - k : n - k - 1;
  if (fit.df < 1) throw std::invalid_argument("fit_standardized: no residual degrees of freedom");

  fit.rss = dot(fit.residuals, fit.residuals);
  double y_norm2 = dot(sd.y, sd.y);
  fit.exact_fit = fit.rss <= 1e-18 * y_norm2;

  fit.std_errors.resize(k);
  fit.t_values.resize(k);
  fit.p_values.resize(k);
  if (fit.exact_fit) {
    fit.sigma2_hat = 0.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < k; ++j) {
      fit.std_errors[j] = 0.0;
      fit.t_values[j] = nan;
      fit.p_values[j] = nan;
    }
    return fit;
  }

  fit.sigma2_hat = fit.rss / fit.df;
  for (int j = 0; j < k; ++j) {
    fit.std_errors[j] = std::sqrt(fit.sigma2_hat * fit.unscaled_covariance(j, j));
    fit.t_values[j] = fit.coefficients[j] / fit.std_errors[j];
    fit.p_values[j] = t_tail_prob(fit.t_values[j], fit.df);
  }
  return fit;
}

RawCoefficients destandardize(const FitResult& fit, const Standardization& s) {
  const int k = static_cast<int>(fit.coefficients.size());
  if (static_cast<int>(s.scales.size()) != k)
    throw std::invalid_argument("destandardize: standardization does not match fit");

  RawCoefficients raw;
  raw.slopes.resize(k);
  double shift = 0.0;
  for (int j = 0; j < k; ++j) {
    raw.slopes[j] = fit.coefficients[j] / s.scales[j];
    shift += s.means[j] * raw.slopes[j];
  }
  raw.intercept = s.response_mean - shift;
  return raw;
}

}  // namespace groupfx
