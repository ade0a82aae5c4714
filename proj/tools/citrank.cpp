// Command-line front end: metrics, fit, simulate, rank, fetch, cache-compact.
//
// Exit codes are a stable contract: 0 success, 2 input error, 3 statistical
// precondition failure, 4 partial network failure.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "citrank/errors.hpp"
#include "citrank/fit.hpp"
#include "citrank/ingest.hpp"
#include "citrank/kernels.hpp"
#include "citrank/manifest.hpp"
#include "citrank/record.hpp"
#include "citrank/report.hpp"
#include "citrank/synth.hpp"
#include "citrank/text.hpp"

namespace {

using citrank::CitationRecord;
using citrank::MetricSummary;
using citrank::format_double;

std::vector<CitationRecord> parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw citrank::Error("cannot open input file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  bool is_json = path.ends_with(".json");
  if (!is_json && !path.ends_with(".csv")) {
    const auto first = text.find_first_not_of(" \t\r\n");
    is_json = first != std::string::npos && text[first] == '[';
  }
  std::istringstream stream(text);
  return is_json ? citrank::ingest::parse_json(stream)
                 : citrank::ingest::parse_csv(stream);
}

// Loads every input and merges rows by researcher id across files,
// first-appearance order.
std::vector<CitationRecord> load_records(const std::vector<std::string>& paths) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<CitationRecord> merged;
  for (const auto& path : paths) {
    std::vector<CitationRecord> records;
    try {
      records = parse_file(path);
    } catch (const citrank::Error& e) {
      throw citrank::Error(path + ": " + e.what());
    }
    for (auto& rec : records) {
      const auto [it, inserted] = index.try_emplace(rec.researcher_id, merged.size());
      if (inserted) {
        merged.push_back(std::move(rec));
      } else {
        auto& counts = merged[it->second].counts;
        counts.insert(counts.end(), rec.counts.begin(), rec.counts.end());
        std::sort(counts.begin(), counts.end(), std::greater<std::int64_t>());
      }
    }
  }
  return merged;
}

std::vector<MetricSummary> load_summaries(const std::vector<std::string>& paths,
                                          std::int64_t min_c) {
  const auto records = load_records(paths);
  auto summaries = citrank::summarize_all(records);
  if (min_c > 0) {
    std::erase_if(summaries, [min_c](const MetricSummary& s) {
      return s.total_citations < min_c;
    });
  }
  return summaries;
}

void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  const auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      // First column left-aligned, numbers right-aligned.
      if (c == 0) {
        out << row[c] << std::string(width[c] - row[c].size(), ' ');
      } else {
        out << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
}

const std::vector<std::string> kSummaryColumns = {
    "id",      "n_papers", "total_citations", "max_citations",
    "mean_citations", "h_index",  "o_index",         "h_ratio"};

std::vector<std::string> summary_cells(const MetricSummary& s) {
  return {s.researcher_id,
          std::to_string(s.n_papers),
          std::to_string(s.total_citations),
          std::to_string(s.max_citations),
          format_double(s.mean_citations),
          std::to_string(s.h_index),
          format_double(s.o_index),
          format_double(s.h_ratio)};
}

nlohmann::json summary_json(const MetricSummary& s) {
  nlohmann::json j;
  j["id"] = s.researcher_id;
  j["n_papers"] = s.n_papers;
  j["total_citations"] = s.total_citations;
  j["max_citations"] = s.max_citations;
  j["mean_citations"] = s.mean_citations;
  j["h_index"] = s.h_index;
  j["o_index"] = s.o_index;
  j["h_ratio"] = s.h_ratio;
  return j;
}

// key/value report used by `fit`; keeps one rendering of every number so
// table, csv and json agree.
struct KeyValueReport {
  std::vector<std::pair<std::string, nlohmann::json>> items;

  void add(const std::string& key, const nlohmann::json& value) {
    items.push_back({key, value});
  }

  std::string cell(const nlohmann::json& v) const {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    return v.dump();
  }

  void print(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      nlohmann::json j;
      for (const auto& [k, v] : items) j[k] = v;
      out << j.dump(2) << '\n';
    } else if (format == "csv") {
      out << "key,value\n";
      for (const auto& [k, v] : items) out << k << ',' << cell(v) << '\n';
    } else {
      std::vector<std::vector<std::string>> rows;
      for (const auto& [k, v] : items) rows.push_back({k, cell(v)});
      print_table(out, {"key", "value"}, rows);
    }
  }
};

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw citrank::Error("cannot write output file: " + path);
  out << content;
}

std::string settings_text(
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string text;
  for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
  return text;
}

struct GlobalFlags {
  std::string format = "table";
  std::uint64_t seed = 0;
  std::int64_t min_c = 0;
};

int cmd_metrics(const std::vector<std::string>& inputs, const GlobalFlags& g) {
  const auto summaries = load_summaries(inputs, g.min_c);
  if (g.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : summaries) j.push_back(summary_json(s));
    std::cout << j.dump(2) << '\n';
  } else if (g.format == "csv") {
    std::cout << "id,n_papers,total_citations,max_citations,mean_citations,"
                 "h_index,o_index,h_ratio\n";
    for (const auto& s : summaries) {
      auto cells = summary_cells(s);
      cells[0] = citrank::csv_field(cells[0]);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c > 0) std::cout << ',';
        std::cout << cells[c];
      }
      std::cout << '\n';
    }
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : summaries) rows.push_back(summary_cells(s));
    print_table(std::cout, kSummaryColumns, rows);
  }
  return 0;
}

int cmd_fit(const std::vector<std::string>& inputs, const GlobalFlags& g,
            bool scaling, bool log_space) {
  const auto summaries = load_summaries(inputs, g.min_c);
  const auto dataset = citrank::fit::build_dataset(summaries);
  const auto fit = citrank::fit::ols_fit(dataset);

  KeyValueReport report;
  report.add("n_points", fit.n_points);
  report.add("a0", fit.a0);
  report.add("a1", fit.a1);
  report.add("a2", fit.a2);
  report.add("residual_std", fit.residual_std);
  report.add("sample_mean", fit.sample_mean);
  report.add("sample_std", fit.sample_std);
  if (scaling) {
    const auto method = log_space ? citrank::fit::ScalingMethod::log_space
                                  : citrank::fit::ScalingMethod::ratio_mean;
    const auto sc = citrank::fit::scaling_fit(summaries, method);
    report.add("scaling_k", sc.k);
    report.add("scaling_ratio_std", sc.ratio_std);
    report.add("scaling_n_points", sc.n_points);
  }
  report.print(std::cout, g.format);
  return 0;
}

int cmd_simulate(std::int64_t researchers, const std::string& papers_spec,
                 const std::string& citations_spec, const std::string& out_path,
                 const GlobalFlags& g) {
  citrank::synth::PopulationConfig config;
  config.n_researchers = researchers;
  config.papers = citrank::synth::parse_papers_spec(papers_spec);
  config.citations = citrank::synth::parse_citations_spec(citations_spec);
  config.seed = g.seed;
  citrank::synth::validate(config);

  const auto population = citrank::synth::generate_population(config);
  std::ostringstream csv;
  citrank::ingest::write_csv(csv, population);
  write_text_file(out_path, csv.str());

  std::size_t rows = 0;
  for (const auto& rec : population) rows += rec.counts.size();

  const auto manifest = citrank::make_manifest(
      "simulate",
      settings_text({{"researchers", std::to_string(researchers)},
                     {"papers", papers_spec},
                     {"citations", citations_spec},
                     {"seed", std::to_string(g.seed)},
                     {"out", out_path}}),
      {});
  citrank::write_manifest(manifest, citrank::manifest_path_for(out_path));

  std::cout << "wrote " << population.size() << " researchers (" << rows
            << " rows) to " << out_path << '\n'
            << "manifest: " << citrank::manifest_path_for(out_path) << '\n';
  return 0;
}

int cmd_rank(const std::vector<std::string>& inputs, const GlobalFlags& g,
             const std::string& metric_name, const std::string& compare_spec,
             std::size_t top_k, const std::string& fig1_path,
             const std::string& fig2_path) {
  const auto summaries = load_summaries(inputs, g.min_c);
  const auto metric = citrank::report::metric_from_string(metric_name);
  const auto table = citrank::report::rank_by(summaries, metric);

  std::optional<citrank::report::RankComparison> comparison;
  std::string compare_a;
  std::string compare_b;
  std::unordered_map<std::string, std::int64_t> rank_a;
  std::unordered_map<std::string, std::int64_t> rank_b;
  if (!compare_spec.empty()) {
    const auto comma = compare_spec.find(',');
    if (comma == std::string::npos) {
      throw citrank::InvalidConfig("--compare wants two metrics, e.g. h,o");
    }
    compare_a = compare_spec.substr(0, comma);
    compare_b = compare_spec.substr(comma + 1);
    const auto table_a = citrank::report::rank_by(
        summaries, citrank::report::metric_from_string(compare_a));
    const auto table_b = citrank::report::rank_by(
        summaries, citrank::report::metric_from_string(compare_b));
    comparison = citrank::report::compare_rankings(table_a, table_b);
    for (const auto& e : table_a.entries) rank_a[e.researcher_id] = e.rank;
    for (const auto& e : table_b.entries) rank_b[e.researcher_id] = e.rank;
  }

  // Largest movers first; ties alphabetical so output is total-ordered.
  std::vector<citrank::report::Displacement> movers;
  if (comparison) {
    movers = comparison->displacements;
    std::sort(movers.begin(), movers.end(),
              [](const auto& x, const auto& y) {
                const auto ax = std::abs(x.delta);
                const auto ay = std::abs(y.delta);
                if (ax != ay) return ax > ay;
                return x.researcher_id < y.researcher_id;
              });
    if (movers.size() > top_k) movers.resize(top_k);
  }

  if (!fig1_path.empty() || !fig2_path.empty()) {
    std::vector<std::string> input_copy = inputs;
    const auto settings = settings_text({{"inputs", [&] {
                                            std::string s;
                                            for (const auto& p : inputs) {
                                              if (!s.empty()) s += ";";
                                              s += p;
                                            }
                                            return s;
                                          }()},
                                         {"min_C", std::to_string(g.min_c)}});
    if (!fig1_path.empty()) {
      write_text_file(fig1_path, citrank::report::emit_fig1_data(summaries));
      citrank::write_manifest(
          citrank::make_manifest("rank --fig1", settings, input_copy),
          citrank::manifest_path_for(fig1_path));
    }
    if (!fig2_path.empty()) {
      write_text_file(fig2_path, citrank::report::emit_fig2_data(summaries));
      citrank::write_manifest(
          citrank::make_manifest("rank --fig2", settings, input_copy),
          citrank::manifest_path_for(fig2_path));
    }
  }

  if (g.format == "json") {
    nlohmann::json j;
    j["metric"] = citrank::report::to_string(metric);
    j["ranking"] = nlohmann::json::array();
    for (const auto& e : table.entries) {
      j["ranking"].push_back(
          {{"rank", e.rank}, {"id", e.researcher_id}, {"value", e.value}});
    }
    if (comparison) {
      nlohmann::json c;
      c["metrics"] = {compare_a, compare_b};
      if (comparison->kendall_tau) {
        c["kendall_tau"] = *comparison->kendall_tau;
      } else {
        c["kendall_tau"] = nullptr;
      }
      c["top_displacements"] = nlohmann::json::array();
      for (const auto& d : movers) {
        c["top_displacements"].push_back({{"id", d.researcher_id},
                                          {"rank_a", rank_a.at(d.researcher_id)},
                                          {"rank_b", rank_b.at(d.researcher_id)},
                                          {"displacement", d.delta}});
      }
      j["comparison"] = std::move(c);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  const bool csv = g.format == "csv";
  if (csv) {
    std::cout << "rank,id," << citrank::report::to_string(metric) << '\n';
    for (const auto& e : table.entries) {
      std::cout << e.rank << ',' << citrank::csv_field(e.researcher_id) << ','
                << format_double(e.value) << '\n';
    }
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : table.entries) {
      rows.push_back({std::to_string(e.rank), e.researcher_id,
                      format_double(e.value)});
    }
    print_table(std::cout, {"rank", "id", citrank::report::to_string(metric)},
                rows);
  }

  if (comparison) {
    std::cout << '\n';
    if (comparison->kendall_tau) {
      std::cout << "kendall_tau" << (csv ? "," : " ")
                << format_double(*comparison->kendall_tau) << '\n';
    }
    if (csv) {
      std::cout << "id,rank_" << compare_a << ",rank_" << compare_b
                << ",displacement\n";
      for (const auto& d : movers) {
        std::cout << citrank::csv_field(d.researcher_id) << ','
                  << rank_a.at(d.researcher_id) << ','
                  << rank_b.at(d.researcher_id) << ',' << d.delta << '\n';
      }
    } else if (!movers.empty()) {
      std::vector<std::vector<std::string>> rows;
      for (const auto& d : movers) {
        rows.push_back({d.researcher_id,
                        std::to_string(rank_a.at(d.researcher_id)),
                        std::to_string(rank_b.at(d.researcher_id)),
                        std::to_string(d.delta)});
      }
      print_table(std::cout,
                  {"id", "rank_" + compare_a, "rank_" + compare_b,
                   "displacement"},
                  rows);
    }
  }
  return 0;
}

int cmd_fetch(const std::vector<std::string>& author_ids,
              const citrank::ingest::SourceConfig& config) {
  citrank::ingest::validate(config);
  citrank::ingest::ApiClient client(config);
  std::size_t failures = 0;
  for (const auto& id : author_ids) {
    try {
      const auto record = client.fetch_author(id);
      std::cout << "ok " << id << " (" << record.counts.size() << " works)\n";
    } catch (const citrank::Error& e) {
      ++failures;
      std::cout << "fail " << id << ": " << e.what() << '\n';
    }
  }
  std::cout << (author_ids.size() - failures) << "/" << author_ids.size()
            << " authors fetched into " << config.cache_path << '\n';
  return failures == 0 ? 0 : 4;
}

int cmd_cache_compact(const std::string& cache_path) {
  citrank::ingest::SourceConfig config;
  config.cache_path = cache_path;
  const auto result = citrank::ingest::cache_compact(config);
  std::cout << "kept " << result.entries_kept << " entries, dropped "
            << result.lines_dropped << " lines\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"citation metrics, least-squares fits, rankings and synthetic "
               "populations"};
  app.set_version_flag("--version", std::string(citrank::kToolVersion));
  app.set_config("--config", "", "key=value config file mirroring the flags; "
                                 "flags override the file");
  app.require_subcommand(1);

  GlobalFlags globals;
  app.add_option("--format", globals.format, "output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", globals.seed,
                 "seed for every random draw (no implicit entropy)")
      ->capture_default_str();
  app.add_option("--min-C", globals.min_c,
                 "drop researchers with fewer than this many total citations")
      ->capture_default_str();

  std::function<int()> action;

  // metrics
  std::vector<std::string> metrics_inputs;
  auto* metrics = app.add_subcommand(
      "metrics", "per-researcher citation metrics from CSV/JSON inputs");
  metrics->fallthrough();
  metrics->add_option("inputs", metrics_inputs, "input files")->required();
  metrics->callback(
      [&] { action = [&] { return cmd_metrics(metrics_inputs, globals); }; });

  // fit
  std::vector<std::string> fit_inputs;
  bool fit_scaling = false;
  bool fit_log_space = false;
  auto* fit = app.add_subcommand(
      "fit", "least-squares fit of h/sqrt(C) on {1, sqrt(C), sqrt(mean_c)}");
  fit->fallthrough();
  fit->add_option("inputs", fit_inputs, "input files")->required();
  fit->add_flag("--scaling", fit_scaling,
                "also fit the one-coefficient scaling law for o");
  fit->add_flag("--log-space", fit_log_space,
                "estimate the scaling coefficient in log space");
  fit->callback([&] {
    action = [&] { return cmd_fit(fit_inputs, globals, fit_scaling, fit_log_space); };
  });

  // simulate
  std::int64_t sim_researchers = 0;
  std::string sim_papers;
  std::string sim_citations;
  std::string sim_out;
  auto* simulate = app.add_subcommand(
      "simulate", "generate a deterministic synthetic population as CSV");
  simulate->fallthrough();
  simulate->add_option("--researchers", sim_researchers, "population size")
      ->required();
  simulate
      ->add_option("--papers", sim_papers,
                   "fixed:N | uniform:MIN:MAX | loguniform:MIN:MAX")
      ->required();
  simulate
      ->add_option("--citations", sim_citations,
                   "lognormal:MU:SIGMA | powerlaw:ALPHA:CAP | geometric:P")
      ->required();
  simulate->add_option("--out", sim_out, "output CSV path")->required();
  simulate->callback([&] {
    action = [&] {
      return cmd_simulate(sim_researchers, sim_papers, sim_citations, sim_out,
                          globals);
    };
  });

  // rank
  std::vector<std::string> rank_inputs;
  std::string rank_metric = "h";
  std::string rank_compare;
  std::size_t rank_top = 10;
  std::string rank_fig1;
  std::string rank_fig2;
  auto* rank = app.add_subcommand("rank", "metric-ordered researcher rankings");
  rank->fallthrough();
  rank->add_option("inputs", rank_inputs, "input files")->required();
  rank->add_option("--metric", rank_metric, "h | o | C | m | mean_c")
      ->capture_default_str();
  rank->add_option("--compare", rank_compare,
                   "two metrics, e.g. h,o: report Kendall tau and movers");
  rank->add_option("--top", rank_top, "how many displacements to list")
      ->capture_default_str();
  rank->add_option("--fig1", rank_fig1,
                   "write the h/sqrt(C) vs sqrt(C) table to this CSV file");
  rank->add_option("--fig2", rank_fig2,
                   "write the o vs h table to this CSV file");
  rank->callback([&] {
    action = [&] {
      return cmd_rank(rank_inputs, globals, rank_metric, rank_compare,
                      rank_top, rank_fig1, rank_fig2);
    };
  });

  // fetch
  std::vector<std::string> fetch_authors;
  citrank::ingest::SourceConfig source;
  auto* fetch = app.add_subcommand(
      "fetch", "fetch citation records from a works API into the cache");
  fetch->fallthrough();
  fetch->add_option("authors", fetch_authors, "author ids")->required();
  fetch->add_option("--base-url", source.base_url, "API base URL")->required();
  fetch->add_option("--rate-limit", source.rate_limit,
                    "max requests per second")
      ->capture_default_str();
  fetch->add_option("--max-retries", source.max_retries,
                    "retries per request on transient failures")
      ->capture_default_str();
  fetch->add_option("--timeout", source.timeout, "per-request timeout, seconds")
      ->capture_default_str();
  fetch->add_option("--cache", source.cache_path, "cache file (JSON lines)")
      ->capture_default_str();
  fetch->add_option("--email", source.contact_email,
                    "contact email sent in the User-Agent header");
  fetch->add_option("--count-field", source.count_field,
                    "dotted path of the per-work citation count")
      ->capture_default_str();
  fetch->add_option("--per-page", source.per_page, "page size")
      ->capture_default_str();
  fetch->add_option("--backoff-base", source.backoff_base,
                    "first retry delay, seconds")
      ->capture_default_str();
  fetch->callback(
      [&] { action = [&] { return cmd_fetch(fetch_authors, source); }; });

  // cache-compact
  std::string compact_cache;
  auto* compact = app.add_subcommand(
      "cache-compact", "rewrite the cache keeping the newest line per id");
  compact->fallthrough();
  compact->add_option("--cache", compact_cache, "cache file")->required();
  compact->callback(
      [&] { action = [&] { return cmd_cache_compact(compact_cache); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const citrank::TooFewPoints& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const citrank::SingularDesign& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const citrank::EmptyInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const citrank::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
