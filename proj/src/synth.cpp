#include "citrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "citrank/errors.hpp"
#include "citrank/rng.hpp"

namespace citrank::synth {

namespace {

constexpr std::int64_t kCountCeiling = std::int64_t{1} << 62;

// Inverse-CDF table for the capped discrete power law. Built once per
// population and shared read-only across worker threads.
struct PowerLawTable {
  std::vector<double> cdf;  // cdf[k-1] = P(X <= k), cdf.back() forced to 1

  void build(double alpha, std::int64_t cap) {
    cdf.resize(static_cast<std::size_t>(cap));
    double total = 0.0;
    for (std::int64_t k = 1; k <= cap; ++k) {
      total += std::pow(static_cast<double>(k), -alpha);
      cdf[static_cast<std::size_t>(k - 1)] = total;
    }
    for (double& v : cdf) v /= total;
    cdf.back() = 1.0;
  }

  std::int64_t sample(double u) const {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto idx = it == cdf.end() ? cdf.size() - 1
                                     : static_cast<std::size_t>(it - cdf.begin());
    return static_cast<std::int64_t>(idx) + 1;
  }
};

std::int64_t draw_paper_count(const PapersDistribution& dist, SplitMix64& rng) {
  if (const auto* fixed = std::get_if<FixedPapers>(&dist)) {
    return fixed->n;
  }
  if (const auto* uniform = std::get_if<UniformPapers>(&dist)) {
    const auto span =
        static_cast<std::uint64_t>(uniform->n_max - uniform->n_min) + 1;
    return uniform->n_min + static_cast<std::int64_t>(rng.next_below(span));
  }
  const auto& lu = std::get<LogUniformPapers>(dist);
  const double lo = std::log(static_cast<double>(lu.n_min));
  const double hi = std::log(static_cast<double>(lu.n_max) + 1.0);
  const double drawn = std::exp(lo + rng.next_unit() * (hi - lo));
  const auto n = static_cast<std::int64_t>(std::floor(drawn));
  return std::clamp(n, lu.n_min, lu.n_max);
}

std::int64_t draw_citation_count(const CitationDistribution& dist,
                                 const PowerLawTable* table, SplitMix64& rng) {
  if (const auto* ln = std::get_if<LogNormalCitations>(&dist)) {
    const double x = std::exp(ln->mu + ln->sigma * rng.next_normal());
    if (!(x < static_cast<double>(kCountCeiling))) return kCountCeiling;
    return static_cast<std::int64_t>(std::floor(x));
  }
  if (std::get_if<PowerLawCitations>(&dist) != nullptr) {
    return table->sample(rng.next_unit());
  }
  const auto& geo = std::get<GeometricCitations>(dist);
  const double u = rng.next_unit_open();
  const double k = std::floor(std::log(u) / std::log(1.0 - geo.p));
  if (!(k < static_cast<double>(kCountCeiling))) return kCountCeiling;
  return static_cast<std::int64_t>(k);
}

CitationRecord generate_with_table(const PopulationConfig& config,
                                   const PowerLawTable* table,
                                   std::int64_t index) {
  SplitMix64 rng(substream_seed(config.seed,
                                static_cast<std::uint64_t>(index)));
  CitationRecord record;
  record.researcher_id = "synth-" + std::to_string(index);
  const std::int64_t n_papers = draw_paper_count(config.papers, rng);
  record.counts.resize(static_cast<std::size_t>(n_papers));
  for (auto& count : record.counts) {
    count = draw_citation_count(config.citations, table, rng);
  }
  std::sort(record.counts.begin(), record.counts.end(),
            std::greater<std::int64_t>());
  return record;
}

PowerLawTable build_table_if_needed(const PopulationConfig& config) {
  PowerLawTable table;
  if (const auto* pl = std::get_if<PowerLawCitations>(&config.citations)) {
    table.build(pl->alpha, pl->cap);
  }
  return table;
}

}  // namespace

void validate(const PopulationConfig& config) {
  if (config.n_researchers < 1) {
    throw InvalidConfig("n_researchers must be >= 1");
  }
  if (const auto* fixed = std::get_if<FixedPapers>(&config.papers)) {
    if (fixed->n < 0) throw InvalidConfig("fixed paper count must be >= 0");
  } else if (const auto* uni = std::get_if<UniformPapers>(&config.papers)) {
    if (uni->n_min < 0) throw InvalidConfig("paper range must be >= 0");
    if (uni->n_min > uni->n_max) {
      throw InvalidConfig("paper range has n_min > n_max");
    }
  } else {
    const auto& lu = std::get<LogUniformPapers>(config.papers);
    if (lu.n_min < 1) {
      throw InvalidConfig("log-uniform paper range must start at >= 1");
    }
    if (lu.n_min > lu.n_max) {
      throw InvalidConfig("paper range has n_min > n_max");
    }
  }
  if (const auto* ln = std::get_if<LogNormalCitations>(&config.citations)) {
    if (!(ln->sigma > 0.0)) throw InvalidConfig("lognormal sigma must be > 0");
    if (!std::isfinite(ln->mu)) throw InvalidConfig("lognormal mu must be finite");
  } else if (const auto* pl = std::get_if<PowerLawCitations>(&config.citations)) {
    if (!(pl->alpha > 1.0)) throw InvalidConfig("power-law alpha must be > 1");
    if (pl->cap < 1) throw InvalidConfig("power-law cap must be >= 1");
  } else {
    const auto& geo = std::get<GeometricCitations>(config.citations);
    if (!(geo.p > 0.0 && geo.p < 1.0)) {
      throw InvalidConfig("geometric p must lie in (0, 1)");
    }
  }
}

CitationRecord generate_record(const PopulationConfig& config,
                               std::int64_t index) {
  validate(config);
  if (index < 0 || index >= config.n_researchers) {
    throw InvalidConfig("researcher index out of range");
  }
  const PowerLawTable table = build_table_if_needed(config);
  return generate_with_table(config, &table, index);
}

std::vector<CitationRecord> generate_population(
    const PopulationConfig& config) {
  validate(config);
  const PowerLawTable table = build_table_if_needed(config);
  std::vector<CitationRecord> records(
      static_cast<std::size_t>(config.n_researchers));
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < config.n_researchers; ++i) {
    records[static_cast<std::size_t>(i)] =
        generate_with_table(config, &table, i);
  }
  return records;
}

std::vector<CitationRecord> generate_population_serial(
    const PopulationConfig& config) {
  validate(config);
  const PowerLawTable table = build_table_if_needed(config);
  std::vector<CitationRecord> records;
  records.reserve(static_cast<std::size_t>(config.n_researchers));
  for (std::int64_t i = 0; i < config.n_researchers; ++i) {
    records.push_back(generate_with_table(config, &table, i));
  }
  return records;
}

std::vector<std::vector<MetricSummary>> bin_by_total(
    std::span<const MetricSummary> summaries, double relative_window) {
  if (!(relative_window > 0.0 && relative_window < 1.0)) {
    throw InvalidConfig("relative_window must lie in (0, 1)");
  }
  std::vector<std::size_t> order(summaries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return summaries[a].total_citations <
                            summaries[b].total_citations;
                   });

  const double stretch = (1.0 + relative_window) / (1.0 - relative_window);
  std::vector<std::vector<std::size_t>> bin_members;
  double upper = -1.0;
  for (const std::size_t idx : order) {
    const double c = static_cast<double>(summaries[idx].total_citations);
    if (c > upper) {
      bin_members.emplace_back();
      upper = c * stretch;
    }
    bin_members.back().push_back(idx);
  }

  std::vector<std::vector<MetricSummary>> bins;
  bins.reserve(bin_members.size());
  for (auto& members : bin_members) {
    std::sort(members.begin(), members.end());
    std::vector<MetricSummary> bin;
    bin.reserve(members.size());
    for (const std::size_t idx : members) bin.push_back(summaries[idx]);
    bins.push_back(std::move(bin));
  }
  return bins;
}

namespace {

std::vector<std::string> split_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(spec);
  while (std::getline(in, part, ':')) parts.push_back(part);
  return parts;
}

std::int64_t spec_int(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfig("bad integer '" + text + "' in spec '" + spec + "'");
  }
}

double spec_real(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfig("bad number '" + text + "' in spec '" + spec + "'");
  }
}

}  // namespace

PapersDistribution parse_papers_spec(const std::string& spec) {
  const auto parts = split_spec(spec);
  if (parts.size() == 2 && parts[0] == "fixed") {
    return FixedPapers{spec_int(parts[1], spec)};
  }
  if (parts.size() == 3 && parts[0] == "uniform") {
    return UniformPapers{spec_int(parts[1], spec), spec_int(parts[2], spec)};
  }
  if (parts.size() == 3 && parts[0] == "loguniform") {
    return LogUniformPapers{spec_int(parts[1], spec), spec_int(parts[2], spec)};
  }
  throw InvalidConfig("unrecognized papers spec '" + spec +
                      "' (want fixed:N, uniform:MIN:MAX or loguniform:MIN:MAX)");
}

CitationDistribution parse_citations_spec(const std::string& spec) {
  const auto parts = split_spec(spec);
  if (parts.size() == 3 && parts[0] == "lognormal") {
    return LogNormalCitations{spec_real(parts[1], spec),
                              spec_real(parts[2], spec)};
  }
  if (parts.size() == 3 && parts[0] == "powerlaw") {
    return PowerLawCitations{spec_real(parts[1], spec),
                             spec_int(parts[2], spec)};
  }
  if (parts.size() == 2 && parts[0] == "geometric") {
    return GeometricCitations{spec_real(parts[1], spec)};
  }
  throw InvalidConfig(
      "unrecognized citations spec '" + spec +
      "' (want lognormal:MU:SIGMA, powerlaw:ALPHA:CAP or geometric:P)");
}

std::string to_spec_string(const PapersDistribution& dist) {
  if (const auto* fixed = std::get_if<FixedPapers>(&dist)) {
    return "fixed:" + std::to_string(fixed->n);
  }
  if (const auto* uni = std::get_if<UniformPapers>(&dist)) {
    return "uniform:" + std::to_string(uni->n_min) + ":" +
           std::to_string(uni->n_max);
  }
  const auto& lu = std::get<LogUniformPapers>(dist);
  return "loguniform:" + std::to_string(lu.n_min) + ":" +
         std::to_string(lu.n_max);
}

std::string to_spec_string(const CitationDistribution& dist) {
  std::ostringstream out;
  if (const auto* ln = std::get_if<LogNormalCitations>(&dist)) {
    out << "lognormal:" << ln->mu << ":" << ln->sigma;
  } else if (const auto* pl = std::get_if<PowerLawCitations>(&dist)) {
    out << "powerlaw:" << pl->alpha << ":" << pl->cap;
  } else {
    out << "geometric:" << std::get<GeometricCitations>(dist).p;
  }
  return out.str();
}

}  // namespace citrank::synth
