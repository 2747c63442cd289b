#include "groupfx/regression.hpp"

#include <cmath>

#include "doctest.h"
#include "groupfx/pipeline.hpp"
#include "support.hpp"

using namespace groupfx;

namespace {

struct HaldFit {
  ArrangedDataset ad;
  StandardizedDataset sd;
  Standardization st;
  FitResult fit;
};

HaldFit fit_hald_renamed(DfConvention dfc = DfConvention::paper) {
  HaldFit h;
  h.ad = arrange_dataset(hald_dataset(), 0.8, /*rename=*/true);
  auto pair = standardize(h.ad.data);
  h.sd = pair.first;
  h.st = pair.second;
  h.fit = fit_standardized(h.sd, dfc);
  return h;
}

}  // namespace

TEST_CASE("fit_standardized: Hald renamed reproduces the reference display") {
  HaldFit h = fit_hald_renamed();
  const double est[4] = {31.607, -2.261, 27.500, 8.353};
  const double se[4] = {14.308, 15.788, 36.784, 38.762};
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(h.fit.coefficients[j] - est[j]) <= 1e-3);
    CHECK(std::abs(h.fit.std_errors[j] - se[j]) <= 1e-3);
  }
  CHECK(h.fit.df == 9);
  CHECK(std::abs(std::sqrt(h.fit.sigma2_hat) - 2.306) <= 1e-3);
  CHECK(std::abs(h.fit.t_values[0] - 2.209) <= 1e-3);
  CHECK(std::abs(h.fit.p_values[0] - 0.0545) <= 1e-4);
}

TEST_CASE("fit_standardized: conventional df rescales inference only") {
  HaldFit paper = fit_hald_renamed(DfConvention::paper);
  HaldFit conv = fit_hald_renamed(DfConvention::conventional);
  CHECK(conv.fit.df == 8);
  double ratio = std::sqrt(static_cast<double>(paper.fit.df) / conv.fit.df);
  for (int j = 0; j < 4; ++j) {
    CHECK(conv.fit.coefficients[j] == doctest::Approx(paper.fit.coefficients[j]).epsilon(1e-14));
    CHECK(conv.fit.unscaled_covariance(j, j) ==
          doctest::Approx(paper.fit.unscaled_covariance(j, j)).epsilon(1e-14));
    CHECK(conv.fit.std_errors[j] == doctest::Approx(paper.fit.std_errors[j] * ratio).epsilon(1e-12));
  }
  CHECK(std::sqrt(conv.fit.sigma2_hat) == doctest::Approx(2.446).epsilon(1e-3));
}

TEST_CASE("fit_standardized: exact fit is flagged, not divided by zero") {
  Rng rng(0x5EEDF001);
  Matrix raw = testsupport::random_matrix(rng, 10, 2);
  Dataset d;
  d.predictor_names = {"a", "b"};
  d.response_name = "y";
  d.x = raw;
  d.y = Vector(10, 0.0);
  auto [sd0, st0] = standardize(d);
  Vector beta = {3.0, -0.5};
  StandardizedDataset sd = sd0;
  sd.y = matvec(sd.x, beta);  // exactly in the column span, already centered

  FitResult fit = fit_standardized(sd);
  CHECK(fit.exact_fit);
  CHECK(fit.sigma2_hat == 0.0);
  CHECK(fit.rss <= 1e-18 * dot(sd.y, sd.y));
  for (int j = 0; j < 2; ++j) {
    CHECK(fit.std_errors[j] == 0.0);
    CHECK(std::isnan(fit.t_values[j]));
    CHECK(std::isnan(fit.p_values[j]));
  }
  CHECK(fit.coefficients[0] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("fit_standardized: orthonormal design gives identical standard errors") {
  StandardizedDataset sd;
  sd.predictor_names = {"a", "b"};
  sd.x = Matrix(4, 2);
  double cols[4][2] = {{0.5, 0.5}, {-0.5, 0.5}, {0.5, -0.5}, {-0.5, -0.5}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) sd.x(i, j) = cols[i][j];
  sd.y = {1.0, -0.5, 0.25, -0.75};

  FitResult fit = fit_standardized(sd);
  double sigma = std::sqrt(fit.sigma2_hat);
  CHECK(fit.std_errors[0] == doctest::Approx(sigma).epsilon(1e-12));
  CHECK(fit.std_errors[1] == doctest::Approx(sigma).epsilon(1e-12));
}

TEST_CASE("fit_standardized: FitResult internal identities") {
  HaldFit h = fit_hald_renamed();
  for (int j = 0; j < 4; ++j) {
    CHECK(h.fit.std_errors[j] ==
          doctest::Approx(std::sqrt(h.fit.sigma2_hat * h.fit.unscaled_covariance(j, j))).epsilon(1e-14));
    CHECK(h.fit.t_values[j] == doctest::Approx(h.fit.coefficients[j] / h.fit.std_errors[j]).epsilon(1e-14));
  }
  CHECK(h.fit.rss == doctest::Approx(h.fit.sigma2_hat * h.fit.df).epsilon(1e-14));

  // residual orthogonality
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(dot(h.sd.x.col(j), h.fit.residuals)) <= 1e-8 * norm2(h.sd.y));

  // covariance consistency against a direct inverse of the cross-product
  SymMatrix direct = invert_spd(h.fit.cross_product);
  for (int j = 0; j < 4; ++j)
    CHECK(std::sqrt(h.fit.sigma2_hat * direct(j, j)) == doctest::Approx(h.fit.std_errors[j]).epsilon(1e-9));
}

TEST_CASE("destandardize: Hald slopes and intercept match a raw-data oracle") {
  HaldFit h = fit_hald_renamed();
  RawCoefficients raw = destandardize(h.fit, h.st);

  CHECK(raw.slopes[0] == doctest::Approx(31.607 / 20.377).epsilon(1e-4));  // 1.5511

  // oracle: straight normal-equations OLS with an explicit intercept column
  // on the renamed raw data
  const Dataset& d = h.ad.data;
  Matrix design(d.n(), 5);
  for (int i = 0; i < d.n(); ++i) {
    design(i, 0) = 1.0;
    for (int j = 0; j < 4; ++j) design(i, j + 1) = d.x(i, j);
  }
  Vector oracle = testsupport::normal_equations_ols(design, d.y);
  CHECK(raw.intercept == doctest::Approx(oracle[0]).epsilon(1e-8));
  for (int j = 0; j < 4; ++j) CHECK(raw.slopes[j] == doctest::Approx(oracle[j + 1]).epsilon(1e-8));
}

TEST_CASE("destandardize: identity transform passes coefficients through") {
  StandardizedDataset sd;
  sd.predictor_names = {"a", "b"};
  sd.x = Matrix(4, 2);
  double cols[4][2] = {{0.5, 0.5}, {-0.5, 0.5}, {0.5, -0.5}, {-0.5, -0.5}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) sd.x(i, j) = cols[i][j];
  sd.y = {1.0, -0.5, 0.25, -0.75};
  FitResult fit = fit_standardized(sd);

  Standardization st;
  st.means = {0.0, 0.0};
  st.scales = {1.0, 1.0};
  st.response_mean = 4.25;
  RawCoefficients raw = destandardize(fit, st);
  CHECK(raw.slopes[0] == doctest::Approx(fit.coefficients[0]).epsilon(1e-15));
  CHECK(raw.slopes[1] == doctest::Approx(fit.coefficients[1]).epsilon(1e-15));
  CHECK(raw.intercept == doctest::Approx(4.25));
}

TEST_CASE("predictions are invariant under standardization") {
  HaldFit h = fit_hald_renamed();
  RawCoefficients raw = destandardize(h.fit, h.st);
  const Dataset& d = h.ad.data;
  for (int i = 0; i < d.n(); ++i) {
    double raw_pred = raw.intercept;
    for (int j = 0; j < 4; ++j) raw_pred += raw.slopes[j] * d.x(i, j);
    double std_pred = h.st.response_mean;
    for (int j = 0; j < 4; ++j) std_pred += h.fit.coefficients[j] * h.sd.x(i, j);
    CHECK(raw_pred == doctest::Approx(std_pred).epsilon(1e-8));
  }
}

TEST_CASE("t_tail_prob: anchors and symmetry") {
  CHECK(t_tail_prob(0.0, 5) == 1.0);
  CHECK(std::abs(t_tail_prob(2.209, 9) - 0.0545) <= 1e-4);
  CHECK(t_tail_prob(10.072, 9) < 1e-5);
  CHECK(t_tail_prob(-3.1, 7) == doctest::Approx(t_tail_prob(3.1, 7)).epsilon(1e-15));
  CHECK_THROWS_AS(t_tail_prob(1.0, 0), std::invalid_argument);
}

TEST_CASE("t_tail_prob: agrees with direct quadrature of the density") {
  // df >= 3 keeps the truncated-tail error of the quadrature far below the
  // comparison tolerance
  const double ts[] = {0.5, 1.0, 2.209, 3.7};
  const int dfs[] = {3, 9, 30};
  for (double t : ts)
    for (int df : dfs) {
      double p = t_tail_prob(t, df);
      double q = testsupport::t_tail_by_quadrature(t, df);
      CHECK(std::abs(p - q) <= 1e-6);
    }
}

TEST_CASE("t_tail_prob: decreasing in |t|") {
  double prev = 1.0;
  for (double t = 0.25; t < 8.0; t += 0.25) {
    double p = t_tail_prob(t, 9);
    CHECK(p < prev);
    prev = p;
  }
}
