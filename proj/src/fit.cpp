#include "citrank/fit.hpp"

#include <array>
#include <cmath>

#include "citrank/errors.hpp"

namespace citrank::fit {

namespace {

constexpr double kRankTolerance = 1e-10;  // relative, per column

double column_norm(const std::vector<double>& col, std::size_t from = 0) {
  double sum = 0.0;
  for (std::size_t i = from; i < col.size(); ++i) sum += col[i] * col[i];
  return std::sqrt(sum);
}

}  // namespace

std::pair<double, double> sample_stats(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("sample_stats");
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double sq = 0.0;
  for (const double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

RegressionDataset build_dataset(std::span<const MetricSummary> summaries) {
  RegressionDataset data;
  for (const auto& s : summaries) {
    if (s.total_citations <= 0 || s.n_papers <= 0) continue;
    const double sqrt_c = std::sqrt(static_cast<double>(s.total_citations));
    data.x1.push_back(sqrt_c);
    data.x2.push_back(std::sqrt(s.mean_citations));
    data.y.push_back(static_cast<double>(s.h_index) / sqrt_c);
    data.source_ids.push_back(s.researcher_id);
  }
  if (data.size() < 3) throw TooFewPoints(3, data.size());
  return data;
}

FitResult ols_fit(const RegressionDataset& data) {
  const std::size_t n = data.size();
  if (data.x1.size() != n || data.x2.size() != n) {
    throw EmptyInput("ols_fit: column lengths differ");
  }
  if (n < 3) throw TooFewPoints(3, n);

  // Householder QR of the n x 3 design [1, x1, x2]; the rank check compares
  // each pivot column's remaining mass against its original norm, which is
  // what collinearity erodes.
  std::array<std::vector<double>, 3> col;
  col[0].assign(n, 1.0);
  col[1] = data.x1;
  col[2] = data.x2;
  std::vector<double> qty = data.y;

  std::array<double, 3> original_norm;
  for (std::size_t j = 0; j < 3; ++j) original_norm[j] = column_norm(col[j]);

  std::array<std::array<double, 3>, 3> r{};
  std::vector<double> v(n);
  for (std::size_t k = 0; k < 3; ++k) {
    const double sigma = column_norm(col[k], k);
    if (original_norm[k] == 0.0 || sigma <= kRankTolerance * original_norm[k]) {
      throw SingularDesign("column " + std::to_string(k) +
                           " is collinear with earlier columns");
    }
    const double alpha = col[k][k] > 0.0 ? -sigma : sigma;
    for (std::size_t i = k; i < n; ++i) v[i] = col[k][i];
    v[k] -= alpha;
    double vtv = 0.0;
    for (std::size_t i = k; i < n; ++i) vtv += v[i] * v[i];
    if (vtv > 0.0) {
      const double beta = 2.0 / vtv;
      for (std::size_t j = k + 1; j < 3; ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i] * col[j][i];
        const double gamma = beta * dot;
        for (std::size_t i = k; i < n; ++i) col[j][i] -= gamma * v[i];
      }
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * qty[i];
      const double gamma = beta * dot;
      for (std::size_t i = k; i < n; ++i) qty[i] -= gamma * v[i];
    }
    r[k][k] = alpha;
    for (std::size_t j = k + 1; j < 3; ++j) r[k][j] = col[j][k];
  }

  std::array<double, 3> coef{};
  for (int k = 2; k >= 0; --k) {
    double acc = qty[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < 3; ++j) {
      acc -= r[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *
             coef[static_cast<std::size_t>(j)];
    }
    coef[static_cast<std::size_t>(k)] =
        acc / r[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
  }

  FitResult result;
  result.a0 = coef[0];
  result.a1 = coef[1];
  result.a2 = coef[2];
  result.n_points = n;

  double res_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double res =
        data.y[i] - (coef[0] + coef[1] * data.x1[i] + coef[2] * data.x2[i]);
    res_sq += res * res;
  }
  result.residual_std = std::sqrt(res_sq / static_cast<double>(n));
  const auto [mean, std_dev] = sample_stats(data.y);
  result.sample_mean = mean;
  result.sample_std = std_dev;
  return result;
}

double predict_h_ratio(const FitResult& fit, double total_citations,
                       double mean_citations) {
  return fit.a0 + fit.a1 * std::sqrt(total_citations) +
         fit.a2 * std::sqrt(mean_citations);
}

ScalingFit scaling_fit(std::span<const MetricSummary> summaries,
                       ScalingMethod method) {
  std::vector<double> ratios;
  for (const auto& s : summaries) {
    if (s.total_citations <= 0 || s.n_papers <= 0 || !(s.o_index > 0.0)) {
      continue;
    }
    const double predicted =
        std::sqrt(static_cast<double>(s.total_citations)) *
        std::pow(s.mean_citations, 0.25);
    ratios.push_back(s.o_index / predicted);
  }
  if (ratios.empty()) throw TooFewPoints(1, 0);

  ScalingFit result;
  result.n_points = ratios.size();
  const auto [mean, std_dev] = sample_stats(ratios);
  result.ratio_std = std_dev;
  if (method == ScalingMethod::ratio_mean) {
    result.k = mean;
  } else {
    double log_sum = 0.0;
    for (const double r : ratios) log_sum += std::log(r);
    result.k = std::exp(log_sum / static_cast<double>(ratios.size()));
  }
  return result;
}

}  // namespace citrank::fit
