#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citrank/record.hpp"

namespace citrank::report {

// Ranking metrics: h-index, o-index, total citations C, top-paper count m,
// and mean citations per paper.
enum class Metric { h, o, total_citations, max_citations, mean_citations };

// Accepts "h", "o", "C", "m", "mean_c". Throws InvalidConfig otherwise.
Metric metric_from_string(const std::string& name);
std::string to_string(Metric metric);
double metric_value(const MetricSummary& summary, Metric metric);

struct RankingEntry {
  std::int64_t rank = 0;  // 1-based, no gaps
  std::string researcher_id;
  double value = 0.0;
};

struct RankingTable {
  Metric metric = Metric::h;
  std::vector<RankingEntry> entries;
};

struct Displacement {
  std::string researcher_id;
  std::int64_t delta = 0;  // rank under A minus rank under B
};

struct RankComparison {
  // Kendall tau-a over the two tie-broken orderings; absent when the tables
  // hold fewer than two researchers (no pairs to compare).
  std::optional<double> kendall_tau;
  // One entry per researcher, in table A's rank order. Deltas sum to zero.
  std::vector<Displacement> displacements;
};

// Descending sort by the chosen metric. Ties are broken by higher C, then
// higher m, then ascending researcher_id, which makes the ordering total and
// the ranks a permutation 1..n.
RankingTable rank_by(std::span<const MetricSummary> summaries, Metric metric);

// Requires both tables to rank the same researcher set; throws MismatchedSets
// listing offending ids otherwise.
RankComparison compare_rankings(const RankingTable& a, const RankingTable& b);

// CSV "id,sqrt_C,h_ratio,mean_c", rows for C > 0 only, sorted by sqrt_C
// ascending (ties by id). Numbers use shortest round-trip decimal form.
std::string emit_fig1_data(std::span<const MetricSummary> summaries);

// CSV "id,h,o", all records included, sorted by h ascending (ties by o,
// then id).
std::string emit_fig2_data(std::span<const MetricSummary> summaries);

}  // namespace citrank::report
