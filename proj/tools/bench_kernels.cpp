// Benchmark of the OpenMP kernels against their serial reference
// implementations. Also cross-checks that both sides produce identical
// output, so a speedup never comes from a divergent result.

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "citrank/kernels.hpp"
#include "citrank/synth.hpp"

using citrank::CitationRecord;
using citrank::MetricSummary;

namespace {

struct Timing {
  double serial_s = 0.0;
  double parallel_s = 0.0;
  bool identical = false;
};

void report(const char* name, const Timing& t) {
  std::printf("%-22s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n",
              name, t.serial_s, t.parallel_s,
              t.parallel_s > 0.0 ? t.serial_s / t.parallel_s : 0.0,
              t.identical ? "outputs identical" : "OUTPUT MISMATCH");
}

bool same_summaries(const std::vector<MetricSummary>& a,
                    const std::vector<MetricSummary>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].researcher_id != b[i].researcher_id) return false;
    if (a[i].h_index != b[i].h_index) return false;
    if (a[i].o_index != b[i].o_index) return false;
    if (a[i].h_ratio != b[i].h_ratio) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t n_researchers = 20000;
  std::uint64_t seed = 1;
  if (argc > 1) n_researchers = std::atoll(argv[1]);
  if (argc > 2) seed = static_cast<std::uint64_t>(std::atoll(argv[2]));

  citrank::synth::PopulationConfig config;
  config.n_researchers = n_researchers;
  config.papers = citrank::synth::LogUniformPapers{10, 2000};
  config.citations = citrank::synth::LogNormalCitations{1.0, 1.2};
  config.seed = seed;

  std::printf("population: %lld researchers, papers loguniform:10:2000, "
              "citations lognormal:1:1.2, seed %llu, %d threads\n\n",
              static_cast<long long>(n_researchers),
              static_cast<unsigned long long>(seed), omp_get_max_threads());

  Timing generate;
  double t0 = omp_get_wtime();
  const auto pop_serial = citrank::synth::generate_population_serial(config);
  generate.serial_s = omp_get_wtime() - t0;
  t0 = omp_get_wtime();
  const auto pop_parallel = citrank::synth::generate_population(config);
  generate.parallel_s = omp_get_wtime() - t0;
  generate.identical = pop_serial == pop_parallel;
  report("generate_population", generate);

  Timing summarize;
  t0 = omp_get_wtime();
  const auto sum_serial = citrank::summarize_all_serial(pop_serial);
  summarize.serial_s = omp_get_wtime() - t0;
  t0 = omp_get_wtime();
  const auto sum_parallel = citrank::summarize_all(pop_serial);
  summarize.parallel_s = omp_get_wtime() - t0;
  summarize.identical = same_summaries(sum_serial, sum_parallel);
  report("summarize_all", summarize);

  std::vector<double> h;
  std::vector<double> o;
  h.reserve(sum_serial.size());
  o.reserve(sum_serial.size());
  for (const auto& s : sum_serial) {
    h.push_back(static_cast<double>(s.h_index));
    o.push_back(s.o_index);
  }
  Timing kendall;
  t0 = omp_get_wtime();
  const double tau_serial = citrank::kendall_tau_serial(h, o);
  kendall.serial_s = omp_get_wtime() - t0;
  t0 = omp_get_wtime();
  const double tau_parallel = citrank::kendall_tau(h, o);
  kendall.parallel_s = omp_get_wtime() - t0;
  kendall.identical = tau_serial == tau_parallel;
  report("kendall_tau", kendall);
  std::printf("\nkendall tau(h, o) = %.6f\n", tau_parallel);

  return (generate.identical && summarize.identical && kendall.identical) ? 0
                                                                          : 1;
}
