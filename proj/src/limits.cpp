#include "groupfx/limits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "groupfx/regression.hpp"
#include "groupfx/rng.hpp"

namespace groupfx {

namespace {

// Streaming mean/variance (Welford); exactly zero variance for a constant
// stream, which the sigma = 0 contract relies on.
struct RunningMoments {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  double sample_variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
};

void check_equicorrelation_args(int q, double rho) {
  if (q < 2) throw std::invalid_argument("equicorrelation: q must be >= 2");
  double lower = -1.0 / (q - 1);
  if (!(rho > lower && rho < 1.0))
    throw std::invalid_argument("equicorrelation: rho = " + std::to_string(rho) +
                                " outside the positive-definite range (" + std::to_string(lower) + ", 1)");
}

}  // namespace

SymMatrix equicorrelation_matrix(int q, double rho) {
  check_equicorrelation_args(q, rho);
  SymMatrix r(q);
  for (int i = 0; i < q; ++i) {
    r.set(i, i, 1.0);
    for (int j = 0; j < i; ++j) r.set(i, j, rho);
  }
  return r;
}

std::vector<LimitTracePoint> limit_trace(int q, const Vector& rho_grid) {
  if (rho_grid.empty()) throw std::invalid_argument("limit_trace: empty grid");
  for (size_t i = 1; i < rho_grid.size(); ++i)
    if (!(rho_grid[i] > rho_grid[i - 1])) throw std::invalid_argument("limit_trace: grid must be ascending");

  std::vector<LimitTracePoint> trace;
  trace.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    SymMatrix r = equicorrelation_matrix(q, rho);
    EigenResult eig = sym_eigen(r);

    LimitTracePoint pt;
    pt.rho = rho;
    pt.lambda1 = eig.values[0];
    double gap2 = 0.0;
    double inv_sqrt_q = 1.0 / std::sqrt(static_cast<double>(q));
    for (int i = 0; i < q; ++i) {
      double d = eig.vectors(i, 0) - inv_sqrt_q;
      gap2 += d * d;
    }
    pt.eigvec_gap = std::sqrt(gap2);
    pt.quad_form = quad_form_ones(invert_spd(r));

    SymMatrix perturbation(q);  // all-ones matrix minus r: zero diagonal, 1 - rho off
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < i; ++j) perturbation.set(i, j, 1.0 - rho);
    EigenResult pe = sym_eigen(perturbation);
    double norm = 0.0;
    for (double v : pe.values) norm = std::max(norm, std::abs(v));
    pt.perturbation_norm = norm;

    pt.var_ratio = pt.quad_form / (static_cast<double>(q) * q);
    trace.push_back(pt);
  }
  return trace;
}

Matrix random_correlated_design(int n, const SymMatrix& target, uint64_t seed) {
  const int q = target.order();
  if (q < 1) throw std::invalid_argument("random_correlated_design: empty target");
  if (n <= q + 1) throw std::invalid_argument("random_correlated_design: need n > order + 1");

  Matrix chol = cholesky_lower(target);  // propagates positive-definiteness errors
  Rng rng = Rng::stream(seed, 0);

  // Row i gets L * z_i; variates drawn row-major so the stream layout is
  // independent of how columns are processed later.
  Matrix x(n, q);
  Vector z(q);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < q; ++j) z[j] = rng.next_gaussian();
    for (int j = 0; j < q; ++j) {
      double s = 0.0;
      for (int k = 0; k <= j; ++k) s += chol(j, k) * z[k];
      x(i, j) = s;
    }
  }

  for (int j = 0; j < q; ++j) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += x(i, j);
    mean /= n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
      x(i, j) -= mean;
      ss += x(i, j) * x(i, j);
    }
    double len = std::sqrt(ss);
    for (int i = 0; i < n; ++i) x(i, j) /= len;
  }
  return x;
}

SimulationReport simulate_group_effect(int q, int n, double rho, const Vector& beta_prime, double sigma,
                                       long n_reps, uint64_t seed) {
  check_equicorrelation_args(q, rho);
  if (static_cast<int>(beta_prime.size()) != q)
    throw std::invalid_argument("simulate_group_effect: beta_prime must have q entries");
  if (sigma < 0.0) throw std::invalid_argument("simulate_group_effect: sigma must be >= 0");
  if (n_reps < 2) throw std::invalid_argument("simulate_group_effect: need at least 2 replications");

  SimulationReport report;
  report.q = q;
  report.n = n;
  report.rho = rho;
  report.sigma = sigma;
  report.n_reps = n_reps;
  report.seed = seed;

  // One design, held fixed across replications.
  Matrix design = random_correlated_design(n, equicorrelation_matrix(q, rho), seed);
  Vector signal = matvec(design, beta_prime);

  StandardizedDataset sd;
  sd.x = design;
  sd.predictor_names.reserve(q);
  for (int j = 0; j < q; ++j) sd.predictor_names.push_back("x" + std::to_string(j + 1));
  sd.y.resize(n);

  RunningMoments effect_moments;
  std::vector<RunningMoments> coefficient_moments(q);
  for (long rep = 0; rep < n_reps; ++rep) {
    Rng noise = Rng::stream(seed, static_cast<uint64_t>(rep) + 1);
    double noise_mean = 0.0;
    for (int i = 0; i < n; ++i) {
      sd.y[i] = signal[i] + sigma * noise.next_gaussian();
      noise_mean += sd.y[i];
    }
    noise_mean /= n;
    for (int i = 0; i < n; ++i) sd.y[i] -= noise_mean;

    FitResult fit = fit_standardized(sd);
    double effect = 0.0;
    for (int j = 0; j < q; ++j) {
      effect += fit.coefficients[j];
      coefficient_moments[j].add(fit.coefficients[j]);
    }
    effect_moments.add(effect / q);
  }

  report.empirical_var = effect_moments.sample_variance();
  report.per_coefficient_var.resize(q);
  for (int j = 0; j < q; ++j) report.per_coefficient_var[j] = coefficient_moments[j].sample_variance();

  // Block-formula variance on the realized design; with the whole design in
  // the group, the block is the full sample correlation matrix.
  SymMatrix sample_corr(q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int row = 0; row < n; ++row) s += design(row, i) * design(row, j);
      sample_corr.set(i, j, s);
    }
  report.theoretical_var = sigma * sigma / (static_cast<double>(q) * q) * quad_form_ones(invert_spd(sample_corr));
  report.ratio = report.theoretical_var > 0.0 ? report.empirical_var / report.theoretical_var
                                              : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace groupfx
