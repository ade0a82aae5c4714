#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "citrank/errors.hpp"
#include "citrank/fit.hpp"
#include "citrank/record.hpp"
#include "citrank/rng.hpp"

using namespace citrank::fit;
using citrank::MetricSummary;
using citrank::SplitMix64;

namespace {

// Independent oracle: solve the 3x3 normal equations (X^T X) a = X^T y by
// Gaussian elimination with partial pivoting. Deliberately a different route
// than the implementation's QR.
std::array<double, 3> normal_equations_fit(const RegressionDataset& data) {
  double xtx[3][3] = {};
  double xty[3] = {};
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double row[3] = {1.0, data.x1[i], data.x2[i]};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) xtx[a][b] += row[a] * row[b];
      xty[a] += row[a] * data.y[i];
    }
  }
  double aug[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) aug[r][c] = xtx[r][c];
    aug[r][3] = xty[r];
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    }
    std::swap(aug[col], aug[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = aug[r][col] / aug[col][col];
      for (int c = col; c < 4; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  std::array<double, 3> coef{};
  for (int r = 2; r >= 0; --r) {
    double acc = aug[r][3];
    for (int c = r + 1; c < 3; ++c) acc -= aug[r][c] * coef[static_cast<std::size_t>(c)];
    coef[static_cast<std::size_t>(r)] = acc / aug[r][r];
  }
  return coef;
}

RegressionDataset exact_model_dataset(double a0, double a1, double a2,
                                      std::size_t n) {
  RegressionDataset data;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = 10.0 + 37.0 * static_cast<double>(i);
    const double x2 = 1.0 + 0.9 * static_cast<double>((i * i) % 17);
    data.x1.push_back(x1);
    data.x2.push_back(x2);
    data.y.push_back(a0 + a1 * x1 + a2 * x2);
    data.source_ids.push_back("r" + std::to_string(i));
  }
  return data;
}

MetricSummary uniform_researcher(std::int64_t h) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(h), h);
  return citrank::summarize(citrank::normalize_record("u", counts));
}

}  // namespace

TEST_CASE("sample_stats: frozen examples and empty input") {
  const std::vector<double> ones{1, 1, 1};
  auto [mean1, std1] = sample_stats(ones);
  CHECK(mean1 == doctest::Approx(1.0));
  CHECK(std1 == doctest::Approx(0.0));

  const std::vector<double> pair{0, 2};
  auto [mean2, std2] = sample_stats(pair);
  CHECK(mean2 == doctest::Approx(1.0));
  CHECK(std2 == doctest::Approx(1.0));  // population convention

  CHECK_THROWS_AS((void)sample_stats(std::vector<double>{}),
                  citrank::EmptyInput);
}

TEST_CASE("build_dataset drops zero-citation researchers") {
  std::vector<MetricSummary> summaries;
  MetricSummary zero;
  zero.researcher_id = "silent";
  zero.n_papers = 4;
  summaries.push_back(zero);
  summaries.push_back(
      citrank::summarize(citrank::normalize_record("a", {10, 8, 5, 4, 3})));
  // One usable row is below the 3-row floor.
  CHECK_THROWS_AS((void)build_dataset(summaries), citrank::TooFewPoints);

  summaries.push_back(
      citrank::summarize(citrank::normalize_record("b", {9, 9})));
  summaries.push_back(
      citrank::summarize(citrank::normalize_record("c", {2, 1, 1})));
  const auto data = build_dataset(summaries);
  REQUIRE(data.size() == 3);
  CHECK(data.source_ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(data.x1[0] == doctest::Approx(std::sqrt(30.0)).epsilon(1e-15));
  CHECK(data.x2[0] == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(data.y[0] == doctest::Approx(4.0 / std::sqrt(30.0)).epsilon(1e-15));
}

TEST_CASE("ols_fit recovers exact coefficients to 1e-9") {
  const auto data = exact_model_dataset(0.584, 0.00023, -0.020, 10);
  const auto fit = ols_fit(data);
  CHECK(std::abs(fit.a0 - 0.584) <= 1e-9);
  CHECK(std::abs(fit.a1 - 0.00023) <= 1e-9);
  CHECK(std::abs(fit.a2 + 0.020) <= 1e-9);
  CHECK(fit.residual_std <= 1e-9);
  CHECK(fit.n_points == 10);
}

TEST_CASE("ols_fit: zero targets give zero coefficients") {
  auto data = exact_model_dataset(0, 0, 0, 8);
  const auto fit = ols_fit(data);
  CHECK(std::abs(fit.a0) <= 1e-12);
  CHECK(std::abs(fit.a1) <= 1e-12);
  CHECK(std::abs(fit.a2) <= 1e-12);
  CHECK(fit.residual_std == doctest::Approx(0.0));
}

TEST_CASE("ols_fit matches the hand-solved normal equations on 4 points") {
  RegressionDataset data;
  data.x1 = {2.0, 5.0, 7.0, 11.0};
  data.x2 = {1.0, 4.0, 2.0, 8.0};
  data.y = {0.9, 0.4, 0.55, 0.2};
  data.source_ids = {"p", "q", "r", "s"};
  const auto fit = ols_fit(data);
  const auto oracle = normal_equations_fit(data);
  CHECK(fit.a0 == doctest::Approx(oracle[0]).epsilon(1e-10));
  CHECK(fit.a1 == doctest::Approx(oracle[1]).epsilon(1e-10));
  CHECK(fit.a2 == doctest::Approx(oracle[2]).epsilon(1e-10));
}

TEST_CASE("ols_fit rejects undersized and collinear designs") {
  RegressionDataset tiny;
  tiny.x1 = {1.0, 2.0};
  tiny.x2 = {2.0, 3.0};
  tiny.y = {0.5, 0.6};
  tiny.source_ids = {"a", "b"};
  CHECK_THROWS_AS((void)ols_fit(tiny), citrank::TooFewPoints);

  RegressionDataset collinear;
  for (int i = 0; i < 6; ++i) {
    const double x1 = 1.0 + i;
    collinear.x1.push_back(x1);
    collinear.x2.push_back(3.0 - 2.0 * x1);  // lies in span{1, x1}
    collinear.y.push_back(0.1 * i);
    collinear.source_ids.push_back("c" + std::to_string(i));
  }
  CHECK_THROWS_AS((void)ols_fit(collinear), citrank::SingularDesign);
}

TEST_CASE("ols_fit residuals are orthogonal to the design columns") {
  SplitMix64 rng(0xf17);
  RegressionDataset data;
  for (int i = 0; i < 200; ++i) {
    const double x1 = 1.0 + 99.0 * rng.next_unit();
    const double x2 = 1.0 + 9.0 * rng.next_unit();
    data.x1.push_back(x1);
    data.x2.push_back(x2);
    data.y.push_back(0.5 + 0.001 * x1 - 0.03 * x2 + 0.05 * rng.next_normal());
    data.source_ids.push_back("n" + std::to_string(i));
  }
  const auto fit = ols_fit(data);

  std::vector<double> residuals;
  double res_norm = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r =
        data.y[i] - (fit.a0 + fit.a1 * data.x1[i] + fit.a2 * data.x2[i]);
    residuals.push_back(r);
    res_norm += r * r;
  }
  res_norm = std::sqrt(res_norm);

  const std::vector<const std::vector<double>*> cols{&data.x1, &data.x2};
  double ones_dot = 0.0;
  for (const double r : residuals) ones_dot += r;
  const double ones_norm = std::sqrt(static_cast<double>(data.size()));
  CHECK(std::abs(ones_dot) <= 1e-8 * ones_norm * res_norm);
  for (const auto* col : cols) {
    double dot = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < col->size(); ++i) {
      dot += (*col)[i] * residuals[i];
      norm += (*col)[i] * (*col)[i];
    }
    CHECK(std::abs(dot) <= 1e-8 * std::sqrt(norm) * res_norm);
  }

  CHECK(fit.residual_std <= fit.sample_std);
}

TEST_CASE("ols_fit is independent of row order") {
  SplitMix64 rng(0xabc);
  RegressionDataset data;
  for (int i = 0; i < 50; ++i) {
    data.x1.push_back(1.0 + 10.0 * rng.next_unit());
    data.x2.push_back(1.0 + 3.0 * rng.next_unit());
    data.y.push_back(rng.next_unit());
    data.source_ids.push_back("x" + std::to_string(i));
  }
  const auto fit = ols_fit(data);

  RegressionDataset reversed;
  for (std::size_t i = data.size(); i-- > 0;) {
    reversed.x1.push_back(data.x1[i]);
    reversed.x2.push_back(data.x2[i]);
    reversed.y.push_back(data.y[i]);
    reversed.source_ids.push_back(data.source_ids[i]);
  }
  const auto fit_rev = ols_fit(reversed);
  CHECK(fit.a0 == doctest::Approx(fit_rev.a0).epsilon(1e-12));
  CHECK(fit.a1 == doctest::Approx(fit_rev.a1).epsilon(1e-12));
  CHECK(fit.a2 == doctest::Approx(fit_rev.a2).epsilon(1e-12));
  CHECK(fit.residual_std == doctest::Approx(fit_rev.residual_std).epsilon(1e-12));
}

TEST_CASE("residual_std converges to the injected noise level") {
  SplitMix64 rng(0x5eed);
  RegressionDataset data;
  const std::size_t n = 10000;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = 1.0 + 200.0 * rng.next_unit();
    const double x2 = 1.0 + 8.0 * rng.next_unit();
    data.x1.push_back(x1);
    data.x2.push_back(x2);
    data.y.push_back(0.584 + 0.00023 * x1 - 0.020 * x2 +
                     0.057 * rng.next_normal());
    data.source_ids.push_back("n" + std::to_string(i));
  }
  const auto fit = ols_fit(data);
  CHECK(std::abs(fit.residual_std - 0.057) / 0.057 <= 0.05);
}

TEST_CASE("predict_h_ratio evaluates the fitted expression") {
  FitResult fit;
  fit.a0 = 0.584;
  fit.a1 = 0.00023;
  fit.a2 = -0.020;
  CHECK(predict_h_ratio(fit, 10000.0, 25.0) == doctest::Approx(0.507).epsilon(1e-12));
  CHECK(predict_h_ratio(fit, 1.0, 1.0) == doctest::Approx(0.56423).epsilon(1e-12));

  const FitResult zeros;
  CHECK(predict_h_ratio(zeros, 123.0, 4.5) == 0.0);
}

TEST_CASE("scaling_fit: single-record frozen example") {
  const auto s = citrank::summarize(citrank::normalize_record("a", {4, 4, 4, 4}));
  const auto scaling = scaling_fit(std::vector<MetricSummary>{s});
  // o = 4, C = 16, mean = 4: ratio = 4 / (4 * 4^(1/4)) = 2^(-1/2).
  CHECK(scaling.k == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(scaling.ratio_std == doctest::Approx(0.0));
  CHECK(scaling.n_points == 1);
}

TEST_CASE("scaling_fit: uniform researchers give ratio h^(-1/4)") {
  for (const std::int64_t h : {1, 2, 3, 5, 10, 40}) {
    const auto scaling =
        scaling_fit(std::vector<MetricSummary>{uniform_researcher(h)});
    const double expected = std::pow(static_cast<double>(h), -0.25);
    CHECK(std::abs(scaling.k - expected) <= 1e-10);
  }
}

TEST_CASE("scaling_fit: empty and unusable inputs") {
  CHECK_THROWS_AS((void)scaling_fit(std::vector<MetricSummary>{}),
                  citrank::TooFewPoints);
  MetricSummary zero;
  zero.researcher_id = "empty";
  CHECK_THROWS_AS((void)scaling_fit(std::vector<MetricSummary>{zero}),
                  citrank::TooFewPoints);
}

TEST_CASE("scaling_fit is scale-covariant in o") {
  std::vector<MetricSummary> base;
  for (const std::int64_t h : {2, 4, 9, 16, 30}) {
    base.push_back(uniform_researcher(h));
  }
  const auto before = scaling_fit(base);
  const double lambda = 3.75;
  auto scaled = base;
  for (auto& s : scaled) s.o_index *= lambda;
  const auto after = scaling_fit(scaled);
  CHECK(after.k == doctest::Approx(lambda * before.k).epsilon(1e-12));
  CHECK(after.ratio_std ==
        doctest::Approx(lambda * before.ratio_std).epsilon(1e-12));
}

TEST_CASE("scaling_fit: log-space flag uses the geometric mean") {
  std::vector<MetricSummary> base;
  for (const std::int64_t h : {2, 4, 9}) base.push_back(uniform_researcher(h));
  const auto log_fit = scaling_fit(base, ScalingMethod::log_space);
  const double expected = std::exp(
      (std::log(std::pow(2.0, -0.25)) + std::log(std::pow(4.0, -0.25)) +
       std::log(std::pow(9.0, -0.25))) /
      3.0);
  CHECK(log_fit.k == doctest::Approx(expected).epsilon(1e-12));
  // Dispersion reporting is identical between the two methods.
  CHECK(log_fit.ratio_std ==
        doctest::Approx(scaling_fit(base).ratio_std).epsilon(1e-15));
}
