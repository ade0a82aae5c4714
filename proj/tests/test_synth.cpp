#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "citrank/errors.hpp"
#include "citrank/fit.hpp"
#include "citrank/kernels.hpp"
#include "citrank/synth.hpp"

using namespace citrank::synth;
using citrank::CitationRecord;
using citrank::InvalidConfig;
using citrank::MetricSummary;

namespace {

PopulationConfig lognormal_config(std::int64_t n, std::uint64_t seed) {
  PopulationConfig config;
  config.n_researchers = n;
  config.papers = LogUniformPapers{20, 2000};
  config.citations = LogNormalCitations{1.0, 1.2};
  config.seed = seed;
  return config;
}

MetricSummary summary_with_total(std::int64_t c) {
  MetricSummary s;
  s.total_citations = c;
  return s;
}

}  // namespace

TEST_CASE("validate rejects each bad constraint") {
  PopulationConfig config;
  config.n_researchers = 0;
  config.papers = FixedPapers{5};
  config.citations = GeometricCitations{0.5};
  CHECK_THROWS_AS(validate(config), InvalidConfig);

  config.n_researchers = 1;
  CHECK_NOTHROW(validate(config));

  config.citations = PowerLawCitations{1.0, 100};
  CHECK_THROWS_AS(validate(config), InvalidConfig);
  config.citations = PowerLawCitations{2.0, 0};
  CHECK_THROWS_AS(validate(config), InvalidConfig);
  config.citations = GeometricCitations{0.0};
  CHECK_THROWS_AS(validate(config), InvalidConfig);
  config.citations = GeometricCitations{1.0};
  CHECK_THROWS_AS(validate(config), InvalidConfig);
  config.citations = LogNormalCitations{0.0, 0.0};
  CHECK_THROWS_AS(validate(config), InvalidConfig);

  config.citations = LogNormalCitations{0.0, 1.0};
  config.papers = UniformPapers{10, 5};
  CHECK_THROWS_AS(validate(config), InvalidConfig);
  config.papers = LogUniformPapers{0, 10};
  CHECK_THROWS_AS(validate(config), InvalidConfig);
}

TEST_CASE("degenerate generator: five papers of one citation each") {
  PopulationConfig config;
  config.n_researchers = 1;
  config.papers = FixedPapers{5};
  config.citations = PowerLawCitations{2.5, 1};  // support collapses to {1}
  config.seed = 7;
  const auto rec = generate_record(config, 0);
  CHECK(rec.researcher_id == "synth-0");
  CHECK(rec.counts == std::vector<std::int64_t>{1, 1, 1, 1, 1});
  const auto s = citrank::summarize(rec);
  CHECK(s.h_index == 1);
  CHECK(s.o_index == doctest::Approx(1.0));
}

TEST_CASE("same (seed, index) always yields the same record") {
  const auto config = lognormal_config(10, 42);
  for (std::int64_t i = 0; i < 10; ++i) {
    CHECK(generate_record(config, i) == generate_record(config, i));
  }
  CHECK_THROWS_AS((void)generate_record(config, 10), InvalidConfig);
  CHECK_THROWS_AS((void)generate_record(config, -1), InvalidConfig);
}

TEST_CASE("population generation is deterministic and names ids by index") {
  auto config = lognormal_config(3, 42);
  const auto a = generate_population(config);
  const auto b = generate_population(config);
  REQUIRE(a.size() == 3);
  CHECK(a[0].researcher_id == "synth-0");
  CHECK(a[1].researcher_id == "synth-1");
  CHECK(a[2].researcher_id == "synth-2");
  CHECK(a == b);

  config.n_researchers = 0;
  CHECK_THROWS_AS((void)generate_population(config), InvalidConfig);
}

TEST_CASE("parallel population equals serial, element-wise") {
  const auto config = lognormal_config(200, 3);
  CHECK(generate_population(config) == generate_population_serial(config));
}

TEST_CASE("generate_population agrees with per-index generate_record") {
  const auto config = lognormal_config(20, 11);
  const auto pop = generate_population(config);
  for (std::int64_t i = 0; i < config.n_researchers; ++i) {
    CHECK(pop[static_cast<std::size_t>(i)] == generate_record(config, i));
  }
}

TEST_CASE("every generated record satisfies the record invariants") {
  PopulationConfig config;
  config.n_researchers = 300;
  config.papers = UniformPapers{0, 50};
  config.seed = 17;
  const CitationDistribution dists[] = {
      LogNormalCitations{1.0, 1.2}, PowerLawCitations{2.1, 1000},
      GeometricCitations{0.3}};
  for (const auto& dist : dists) {
    config.citations = dist;
    for (const auto& rec : generate_population(config)) {
      for (std::size_t i = 0; i < rec.counts.size(); ++i) {
        REQUIRE(rec.counts[i] >= 0);
        if (i > 0) REQUIRE(rec.counts[i - 1] >= rec.counts[i]);
      }
    }
  }
}

TEST_CASE("geometric draws have the documented mean, (1-p)/p") {
  PopulationConfig config;
  config.n_researchers = 10;
  config.papers = FixedPapers{1000};
  config.citations = GeometricCitations{0.5};
  config.seed = 42;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& rec : generate_population(config)) {
    for (const auto c : rec.counts) sum += static_cast<double>(c);
    n += rec.counts.size();
  }
  const double mean = sum / static_cast<double>(n);
  // mean 1, variance (1-p)/p^2 = 2; allow three standard errors.
  const double se = std::sqrt(2.0 / static_cast<double>(n));
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("power-law draws respect the cap and lower bound") {
  PopulationConfig config;
  config.n_researchers = 50;
  config.papers = FixedPapers{100};
  config.citations = PowerLawCitations{1.5, 50};
  config.seed = 5;
  for (const auto& rec : generate_population(config)) {
    for (const auto c : rec.counts) {
      REQUIRE(c >= 1);
      REQUIRE(c <= 50);
    }
  }
}

TEST_CASE("bin_by_total: frozen examples") {
  const std::vector<MetricSummary> summaries{
      summary_with_total(100), summary_with_total(101),
      summary_with_total(5000)};
  const auto bins = bin_by_total(summaries, 0.05);
  REQUIRE(bins.size() == 2);
  CHECK(bins[0].size() == 2);
  CHECK(bins[0][0].total_citations == 100);
  CHECK(bins[0][1].total_citations == 101);
  CHECK(bins[1].size() == 1);
  CHECK(bins[1][0].total_citations == 5000);

  const std::vector<MetricSummary> single{summary_with_total(77)};
  const auto single_bin = bin_by_total(single, 0.1);
  REQUIRE(single_bin.size() == 1);
  CHECK(single_bin[0].size() == 1);

  CHECK(bin_by_total(std::vector<MetricSummary>{}, 0.1).empty());
  CHECK_THROWS_AS((void)bin_by_total(single, 0.0), InvalidConfig);
  CHECK_THROWS_AS((void)bin_by_total(single, 1.0), InvalidConfig);
}

TEST_CASE("bin_by_total: partition covers every summary exactly once") {
  const auto pop = generate_population(lognormal_config(500, 23));
  const auto summaries = citrank::summarize_all(pop);
  const auto bins = bin_by_total(summaries, 0.1);
  std::size_t total = 0;
  std::int64_t previous_max = -1;
  for (const auto& bin : bins) {
    REQUIRE(!bin.empty());
    total += bin.size();
    std::int64_t lo = bin[0].total_citations;
    std::int64_t hi = lo;
    for (const auto& s : bin) {
      lo = std::min(lo, s.total_citations);
      hi = std::max(hi, s.total_citations);
    }
    CHECK(lo > previous_max);  // bins cover disjoint, ascending C ranges
    previous_max = hi;
  }
  CHECK(total == summaries.size());
}

TEST_CASE("fixed-C bins reproduce the ranking bias of h") {
  // In a sufficiently heavy-tailed population, researchers with equal totals
  // but more papers score a higher h, and higher mean citations depress
  // h/sqrt(C). The tail must be heavy for the effect to dominate the
  // selection tilt that conditioning on C induces; at sigma ~1.2 the sign
  // flips in both C extremes, so the stress population uses sigma = 3.
  auto config = lognormal_config(10000, 20260809);
  config.citations = LogNormalCitations{0.0, 3.0};
  const auto pop = generate_population(config);
  const auto summaries = citrank::summarize_all(pop);
  std::size_t checked_bins = 0;
  for (const auto& bin : bin_by_total(summaries, 0.1)) {
    if (bin.size() < 30) continue;
    std::vector<double> n_papers;
    std::vector<double> h;
    std::vector<double> mean_c;
    std::vector<double> h_ratio;
    for (const auto& s : bin) {
      n_papers.push_back(static_cast<double>(s.n_papers));
      h.push_back(static_cast<double>(s.h_index));
      mean_c.push_back(s.mean_citations);
      h_ratio.push_back(s.h_ratio);
    }
    ++checked_bins;
    CHECK(citrank::kendall_tau(n_papers, h) > 0.0);
    CHECK(citrank::kendall_tau(mean_c, h_ratio) < 0.0);
  }
  CHECK(checked_bins >= 5);
}

TEST_CASE("scaling ratio stays finite on generated populations") {
  const auto pop = generate_population(lognormal_config(2000, 31));
  const auto summaries = citrank::summarize_all(pop);
  const auto scaling = citrank::fit::scaling_fit(summaries);
  CHECK(std::isfinite(scaling.k));
  CHECK(scaling.k > 0.0);
  CHECK(std::isfinite(scaling.ratio_std));
  CHECK(scaling.n_points > 0);
}

TEST_CASE("distribution spec strings round-trip") {
  const char* papers[] = {"fixed:100", "uniform:10:100", "loguniform:20:2000"};
  for (const auto* spec : papers) {
    CHECK(to_spec_string(parse_papers_spec(spec)) == spec);
  }
  const char* citations[] = {"lognormal:1:1.2", "powerlaw:2.5:1000000",
                             "geometric:0.5"};
  for (const auto* spec : citations) {
    CHECK(to_spec_string(parse_citations_spec(spec)) == spec);
  }
  CHECK_THROWS_AS((void)parse_papers_spec("fixed"), InvalidConfig);
  CHECK_THROWS_AS((void)parse_papers_spec("zipf:1:2"), InvalidConfig);
  CHECK_THROWS_AS((void)parse_citations_spec("lognormal:1:x"), InvalidConfig);
  CHECK_THROWS_AS((void)parse_citations_spec("geometric:"), InvalidConfig);
}
