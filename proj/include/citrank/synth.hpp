#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "citrank/record.hpp"

namespace citrank::synth {

// Papers-per-researcher distributions. Bounds are inclusive.
struct FixedPapers {
  std::int64_t n = 0;
};
struct UniformPapers {
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
};
struct LogUniformPapers {
  std::int64_t n_min = 1;
  std::int64_t n_max = 1;
};
using PapersDistribution =
    std::variant<FixedPapers, UniformPapers, LogUniformPapers>;

// Per-paper citation-count distributions.
//
// lognormal:  count = floor(exp(mu + sigma*z)), z standard normal. Draws
//             below 1 floor to 0, so zero-citation papers occur naturally.
// power law:  P(k) proportional to k^-alpha on the capped integer support
//             [1, cap], sampled by inverse CDF over the tabulated weights.
// geometric:  support {0, 1, 2, ...}, P(k) = (1-p)^k p, mean (1-p)/p,
//             sampled as floor(log(u)/log(1-p)) with u uniform in (0, 1].
struct LogNormalCitations {
  double mu = 0.0;
  double sigma = 1.0;
};
struct PowerLawCitations {
  double alpha = 2.5;
  std::int64_t cap = 1'000'000;
};
struct GeometricCitations {
  double p = 0.5;
};
using CitationDistribution =
    std::variant<LogNormalCitations, PowerLawCitations, GeometricCitations>;

struct PopulationConfig {
  std::int64_t n_researchers = 0;
  PapersDistribution papers = FixedPapers{0};
  CitationDistribution citations = LogNormalCitations{};
  std::uint64_t seed = 0;
};

// Throws InvalidConfig naming the first violated constraint.
void validate(const PopulationConfig& config);

// Record of researcher `index`, id "synth-<index>". Fully determined by
// (config.seed, index): same inputs, same record, on any platform.
CitationRecord generate_record(const PopulationConfig& config,
                               std::int64_t index);

// All records in index order. The default is OpenMP-parallel across
// researchers (safe because every index has a private RNG substream);
// the _serial variant is the reference kept for tests.
std::vector<CitationRecord> generate_population(const PopulationConfig& config);
std::vector<CitationRecord> generate_population_serial(
    const PopulationConfig& config);

// Partitions summaries into logarithmic total-citation bins. A bin is
// anchored at the smallest unassigned C and spans up to
// anchor * (1 + window) / (1 - window), i.e. the anchor sits at the bin's
// lower (1 - window) edge. Zero-citation summaries form their own leading
// bin. Bins are returned in ascending C order, members in input order;
// empty bins never appear. window must lie in (0, 1).
std::vector<std::vector<MetricSummary>> bin_by_total(
    std::span<const MetricSummary> summaries, double relative_window);

// Spec strings used by the CLI and config files:
//   papers:    "fixed:N" | "uniform:MIN:MAX" | "loguniform:MIN:MAX"
//   citations: "lognormal:MU:SIGMA" | "powerlaw:ALPHA:CAP" | "geometric:P"
// Throws InvalidConfig on anything else.
PapersDistribution parse_papers_spec(const std::string& spec);
CitationDistribution parse_citations_spec(const std::string& spec);
std::string to_spec_string(const PapersDistribution& dist);
std::string to_spec_string(const CitationDistribution& dist);

}  // namespace citrank::synth
