#include "citrank/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "citrank/errors.hpp"
#include "citrank/kernels.hpp"
#include "citrank/text.hpp"

namespace citrank::report {

Metric metric_from_string(const std::string& name) {
  if (name == "h") return Metric::h;
  if (name == "o") return Metric::o;
  if (name == "C") return Metric::total_citations;
  if (name == "m") return Metric::max_citations;
  if (name == "mean_c") return Metric::mean_citations;
  throw InvalidConfig("unknown metric '" + name +
                      "' (want h, o, C, m or mean_c)");
}

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::h: return "h";
    case Metric::o: return "o";
    case Metric::total_citations: return "C";
    case Metric::max_citations: return "m";
    case Metric::mean_citations: return "mean_c";
  }
  return "?";
}

double metric_value(const MetricSummary& summary, Metric metric) {
  switch (metric) {
    case Metric::h: return static_cast<double>(summary.h_index);
    case Metric::o: return summary.o_index;
    case Metric::total_citations:
      return static_cast<double>(summary.total_citations);
    case Metric::max_citations:
      return static_cast<double>(summary.max_citations);
    case Metric::mean_citations: return summary.mean_citations;
  }
  return 0.0;
}

RankingTable rank_by(std::span<const MetricSummary> summaries, Metric metric) {
  std::vector<const MetricSummary*> order;
  order.reserve(summaries.size());
  for (const auto& s : summaries) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [metric](const MetricSummary* a, const MetricSummary* b) {
              const double va = metric_value(*a, metric);
              const double vb = metric_value(*b, metric);
              if (va != vb) return va > vb;
              if (a->total_citations != b->total_citations) {
                return a->total_citations > b->total_citations;
              }
              if (a->max_citations != b->max_citations) {
                return a->max_citations > b->max_citations;
              }
              return a->researcher_id < b->researcher_id;
            });

  RankingTable table;
  table.metric = metric;
  table.entries.reserve(order.size());
  std::int64_t rank = 1;
  for (const MetricSummary* s : order) {
    table.entries.push_back(
        {rank++, s->researcher_id, metric_value(*s, metric)});
  }
  return table;
}

RankComparison compare_rankings(const RankingTable& a, const RankingTable& b) {
  std::unordered_map<std::string, std::int64_t> rank_b;
  rank_b.reserve(b.entries.size());
  for (const auto& e : b.entries) rank_b.emplace(e.researcher_id, e.rank);

  std::vector<std::string> mismatched;
  for (const auto& e : a.entries) {
    if (rank_b.find(e.researcher_id) == rank_b.end()) {
      mismatched.push_back(e.researcher_id);
    }
  }
  if (a.entries.size() != b.entries.size() || !mismatched.empty()) {
    std::unordered_map<std::string, std::int64_t> rank_a;
    for (const auto& e : a.entries) rank_a.emplace(e.researcher_id, e.rank);
    for (const auto& e : b.entries) {
      if (rank_a.find(e.researcher_id) == rank_a.end()) {
        mismatched.push_back(e.researcher_id);
      }
    }
    throw MismatchedSets(std::move(mismatched));
  }

  RankComparison cmp;
  cmp.displacements.reserve(a.entries.size());
  std::vector<double> ranks_a;
  std::vector<double> ranks_b;
  ranks_a.reserve(a.entries.size());
  ranks_b.reserve(a.entries.size());
  for (const auto& e : a.entries) {
    const std::int64_t rb = rank_b.at(e.researcher_id);
    cmp.displacements.push_back({e.researcher_id, e.rank - rb});
    ranks_a.push_back(static_cast<double>(e.rank));
    ranks_b.push_back(static_cast<double>(rb));
  }
  if (a.entries.size() >= 2) {
    cmp.kendall_tau = kendall_tau(ranks_a, ranks_b);
  }
  return cmp;
}

namespace {

std::vector<const MetricSummary*> sorted_pointers(
    std::span<const MetricSummary> summaries, bool skip_zero_c,
    bool (*less)(const MetricSummary*, const MetricSummary*)) {
  std::vector<const MetricSummary*> out;
  out.reserve(summaries.size());
  for (const auto& s : summaries) {
    if (skip_zero_c && s.total_citations <= 0) continue;
    out.push_back(&s);
  }
  std::sort(out.begin(), out.end(), less);
  return out;
}

}  // namespace

std::string emit_fig1_data(std::span<const MetricSummary> summaries) {
  const auto rows = sorted_pointers(
      summaries, /*skip_zero_c=*/true,
      [](const MetricSummary* a, const MetricSummary* b) {
        if (a->total_citations != b->total_citations) {
          return a->total_citations < b->total_citations;
        }
        return a->researcher_id < b->researcher_id;
      });
  std::ostringstream out;
  out << "id,sqrt_C,h_ratio,mean_c\n";
  for (const MetricSummary* s : rows) {
    const double sqrt_c = std::sqrt(static_cast<double>(s->total_citations));
    out << csv_field(s->researcher_id) << ',' << format_double(sqrt_c) << ','
        << format_double(s->h_ratio) << ',' << format_double(s->mean_citations)
        << '\n';
  }
  return out.str();
}

std::string emit_fig2_data(std::span<const MetricSummary> summaries) {
  const auto rows = sorted_pointers(
      summaries, /*skip_zero_c=*/false,
      [](const MetricSummary* a, const MetricSummary* b) {
        if (a->h_index != b->h_index) return a->h_index < b->h_index;
        if (a->o_index != b->o_index) return a->o_index < b->o_index;
        return a->researcher_id < b->researcher_id;
      });
  std::ostringstream out;
  out << "id,h,o\n";
  for (const MetricSummary* s : rows) {
    out << csv_field(s->researcher_id) << ',' << s->h_index << ','
        << format_double(s->o_index) << '\n';
  }
  return out.str();
}

}  // namespace citrank::report
