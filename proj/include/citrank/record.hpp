#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace citrank {

// One researcher's per-paper citation counts, sorted descending.
// counts[r-1] is c_r, the number of citations to the r-th most cited paper,
// so c_1 >= c_2 >= ... >= c_N >= 0. A record may be empty.
struct CitationRecord {
  std::string researcher_id;
  std::vector<std::int64_t> counts;

  bool operator==(const CitationRecord&) const = default;
};

// Scalars derived from one record.
//
// Conventions for degenerate records: an empty record has
// mean_citations = 0 and h_ratio = 0 (no error), and h_ratio is h divided by
// the real-valued sqrt(C), not floor(sqrt(C)).
struct MetricSummary {
  std::string researcher_id;
  std::int64_t n_papers = 0;         // N
  std::int64_t total_citations = 0;  // C
  std::int64_t max_citations = 0;    // m, citations to the most cited paper
  double mean_citations = 0.0;       // C/N, 0 for empty records
  std::int64_t h_index = 0;          // h
  double o_index = 0.0;              // sqrt(m*h)
  double h_ratio = 0.0;              // h/sqrt(C), 0 when C == 0
};

// Validates raw counts and sorts them descending; input order never affects
// downstream metrics. Throws NegativeCount with the offending index.
CitationRecord normalize_record(std::string researcher_id,
                                std::span<const std::int64_t> raw_counts);

inline CitationRecord normalize_record(
    std::string researcher_id, std::initializer_list<std::int64_t> raw_counts) {
  return normalize_record(std::move(researcher_id),
                          std::span<const std::int64_t>(raw_counts.begin(),
                                                        raw_counts.size()));
}

// Largest r such that counts[r-1] >= r, or 0 if no such r exists.
// counts[r-1] - r is strictly decreasing over a descending record, so the
// crossing point is found by binary search.
std::int64_t h_index(const CitationRecord& record);

// Geometric mean sqrt(m*h) of the top citation count and the h-index;
// 0 when either factor is 0.
double o_index(const CitationRecord& record);

MetricSummary summarize(const CitationRecord& record);

// Rounds half away from zero; used when displaying o as an integer.
std::int64_t round_half_up(double value);

}  // namespace citrank
