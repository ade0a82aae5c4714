#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citrank/record.hpp"

namespace citrank::fit {

// Regression rows for the normalized-h model. Row i holds
// x1 = sqrt(C_i), x2 = sqrt(mean_c_i), y = h_i / sqrt(C_i).
struct RegressionDataset {
  std::vector<double> x1;
  std::vector<double> x2;
  std::vector<double> y;
  std::vector<std::string> source_ids;

  std::size_t size() const { return y.size(); }
};

// Least-squares coefficients of y_hat = a0 + a1*x1 + a2*x2 plus dispersion
// statistics of the target. All standard deviations use the population
// (divide-by-n) convention.
struct FitResult {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double residual_std = 0.0;  // sqrt(sum(res^2)/n)
  double sample_mean = 0.0;   // mean of y
  double sample_std = 0.0;    // population std of y
  std::size_t n_points = 0;
};

// How the coefficient of o ~ k * C^(1/2) * mean_c^(1/4) is estimated.
// ratio_mean averages the per-researcher ratios o/(C^(1/2)*mean_c^(1/4));
// log_space uses exp(mean(log ratio)), i.e. the geometric mean, as a
// sensitivity check. ratio_std always reports the population std of the raw
// ratios, whichever method produced k.
enum class ScalingMethod { ratio_mean, log_space };

struct ScalingFit {
  double k = 0.0;
  double ratio_std = 0.0;
  std::size_t n_points = 0;
};

// Arithmetic mean and population standard deviation. Throws EmptyInput.
std::pair<double, double> sample_stats(std::span<const double> values);

// One row per summary with C > 0 and N > 0, in input order; zero-citation
// researchers are dropped. Throws TooFewPoints when fewer than 3 rows remain.
RegressionDataset build_dataset(std::span<const MetricSummary> summaries);

// Minimizes sum((y - a0 - a1*x1 - a2*x2)^2) via Householder QR of the design
// matrix (no normal-equation inversion). Throws TooFewPoints below 3 rows and
// SingularDesign when a design column is collinear with its predecessors
// beyond a 1e-10 relative tolerance.
FitResult ols_fit(const RegressionDataset& data);

// a0 + a1*sqrt(C) + a2*sqrt(mean_c); may be negative, caller interprets.
double predict_h_ratio(const FitResult& fit, double total_citations,
                       double mean_citations);

// One-coefficient scaling fit over summaries with C > 0, N > 0, o > 0.
// Throws TooFewPoints when no summary is usable.
ScalingFit scaling_fit(std::span<const MetricSummary> summaries,
                       ScalingMethod method = ScalingMethod::ratio_mean);

}  // namespace citrank::fit
