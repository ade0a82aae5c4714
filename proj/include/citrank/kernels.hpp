#pragma once

#include <span>
#include <vector>

#include "citrank/record.hpp"

namespace citrank {

// Population-scale kernels. The default entry points are OpenMP-parallel;
// the *_serial variants are the reference implementations kept for tests and
// the benchmark tool. Parallel and serial outputs are identical, in input
// order, independent of thread count.

std::vector<MetricSummary> summarize_all(std::span<const CitationRecord> records);
std::vector<MetricSummary> summarize_all_serial(std::span<const CitationRecord> records);

// Kendall tau-a over paired samples: (concordant - discordant) / (n(n-1)/2).
// Tied pairs count toward neither side and no tie correction is applied.
// Requires x.size() == y.size() >= 2; throws EmptyInput otherwise.
double kendall_tau(std::span<const double> x, std::span<const double> y);
double kendall_tau_serial(std::span<const double> x, std::span<const double> y);

}  // namespace citrank
