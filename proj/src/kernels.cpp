#include "citrank/kernels.hpp"

#include <cstdint>

#include "citrank/errors.hpp"

namespace citrank {

std::vector<MetricSummary> summarize_all(
    std::span<const CitationRecord> records) {
  std::vector<MetricSummary> out(records.size());
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  // Record lengths vary wildly under heavy-tailed paper counts, hence the
  // dynamic schedule.
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        summarize(records[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<MetricSummary> summarize_all_serial(
    std::span<const CitationRecord> records) {
  std::vector<MetricSummary> out;
  out.reserve(records.size());
  for (const auto& record : records) out.push_back(summarize(record));
  return out;
}

namespace {

inline int sign_of(double d) { return (d > 0.0) - (d < 0.0); }

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw EmptyInput("kendall_tau: length mismatch");
  }
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  if (n < 2) throw EmptyInput("kendall_tau: need at least 2 pairs");

  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  // Integer reductions keep the result independent of thread count.
#pragma omp parallel for schedule(dynamic, 64) \
    reduction(+ : concordant, discordant)
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      const int s = sign_of(x[static_cast<std::size_t>(i)] -
                            x[static_cast<std::size_t>(j)]) *
                    sign_of(y[static_cast<std::size_t>(i)] -
                            y[static_cast<std::size_t>(j)]);
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(concordant - discordant) / pairs;
}

double kendall_tau_serial(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) {
    throw EmptyInput("kendall_tau: length mismatch");
  }
  const std::size_t n = x.size();
  if (n < 2) throw EmptyInput("kendall_tau: need at least 2 pairs");

  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int s = sign_of(x[i] - x[j]) * sign_of(y[i] - y[j]);
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(concordant - discordant) / pairs;
}

}  // namespace citrank
