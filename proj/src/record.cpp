#include "citrank/record.hpp"

#include <algorithm>
#include <cmath>

#include "citrank/errors.hpp"

namespace citrank {

CitationRecord normalize_record(std::string researcher_id,
                                std::span<const std::int64_t> raw_counts) {
  for (std::size_t i = 0; i < raw_counts.size(); ++i) {
    if (raw_counts[i] < 0) {
      throw NegativeCount(i, "record '" + researcher_id + "'");
    }
  }
  CitationRecord record;
  record.researcher_id = std::move(researcher_id);
  record.counts.assign(raw_counts.begin(), raw_counts.end());
  std::sort(record.counts.begin(), record.counts.end(),
            std::greater<std::int64_t>());
  return record;
}

std::int64_t h_index(const CitationRecord& record) {
  // Invariant: counts[lo-1] >= lo (vacuous at lo = 0), counts[r-1] < r for
  // every r > hi.
  std::int64_t lo = 0;
  std::int64_t hi = static_cast<std::int64_t>(record.counts.size());
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (record.counts[static_cast<std::size_t>(mid - 1)] >= mid) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

double o_index(const CitationRecord& record) {
  const std::int64_t m = record.counts.empty() ? 0 : record.counts.front();
  const std::int64_t h = h_index(record);
  return std::sqrt(static_cast<double>(m) * static_cast<double>(h));
}

MetricSummary summarize(const CitationRecord& record) {
  MetricSummary s;
  s.researcher_id = record.researcher_id;
  s.n_papers = static_cast<std::int64_t>(record.counts.size());
  for (const std::int64_t c : record.counts) s.total_citations += c;
  s.max_citations = record.counts.empty() ? 0 : record.counts.front();
  s.mean_citations = s.n_papers > 0 ? static_cast<double>(s.total_citations) /
                                          static_cast<double>(s.n_papers)
                                    : 0.0;
  s.h_index = h_index(record);
  s.o_index = std::sqrt(static_cast<double>(s.max_citations) *
                        static_cast<double>(s.h_index));
  s.h_ratio = s.total_citations > 0
                  ? static_cast<double>(s.h_index) /
                        std::sqrt(static_cast<double>(s.total_citations))
                  : 0.0;
  return s;
}

std::int64_t round_half_up(double value) {
  return static_cast<std::int64_t>(std::floor(value + 0.5));
}

}  // namespace citrank
