#include "citrank/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "citrank/errors.hpp"
#include "citrank/manifest.hpp"
#include "citrank/text.hpp"

namespace citrank::ingest {

using nlohmann::json;

void validate(const SourceConfig& config) {
  if (!(config.rate_limit > 0.0)) {
    throw InvalidConfig("rate_limit must be > 0");
  }
  if (config.max_retries < 0) throw InvalidConfig("max_retries must be >= 0");
  if (!(config.timeout > 0.0)) throw InvalidConfig("timeout must be > 0");
  if (config.per_page < 1) throw InvalidConfig("per_page must be >= 1");
  if (!(config.backoff_base > 0.0)) {
    throw InvalidConfig("backoff_base must be > 0");
  }
  if (config.count_field.empty()) {
    throw InvalidConfig("count_field must be non-empty");
  }
}

namespace {

// Gathers counts per researcher in first-appearance order, then normalizes.
class RecordGatherer {
 public:
  void add(const std::string& id, std::int64_t count) {
    add_empty(id).push_back(count);
  }

  // Registers the researcher even when no counts follow, so JSON can carry
  // zero-paper records.
  std::vector<std::int64_t>& add_empty(const std::string& id) {
    const auto [it, inserted] = index_.try_emplace(id, rows_.size());
    if (inserted) rows_.push_back({id, {}});
    return rows_[it->second].second;
  }

  std::vector<CitationRecord> finish() {
    std::vector<CitationRecord> records;
    records.reserve(rows_.size());
    for (auto& [id, counts] : rows_) {
      CitationRecord record;
      record.researcher_id = id;
      record.counts = std::move(counts);
      std::sort(record.counts.begin(), record.counts.end(),
                std::greater<std::int64_t>());
      records.push_back(std::move(record));
    }
    return records;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> rows_;
};

// Splits "id,count" honoring a double-quoted id field. Returns false when the
// line does not have exactly two fields.
bool split_csv_row(const std::string& line, std::string& id,
                   std::string& count_text, std::string& reason) {
  std::size_t pos = 0;
  id.clear();
  if (!line.empty() && line[0] == '"') {
    pos = 1;
    for (;;) {
      if (pos >= line.size()) {
        reason = "unterminated quoted field";
        return false;
      }
      if (line[pos] == '"') {
        if (pos + 1 < line.size() && line[pos + 1] == '"') {
          id += '"';
          pos += 2;
          continue;
        }
        ++pos;
        break;
      }
      id += line[pos++];
    }
    if (pos >= line.size() || line[pos] != ',') {
      reason = "expected ',' after quoted field";
      return false;
    }
    ++pos;
  } else {
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      reason = "expected 2 fields";
      return false;
    }
    id = line.substr(0, comma);
    pos = comma + 1;
  }
  count_text = line.substr(pos);
  if (count_text.find(',') != std::string::npos) {
    reason = "expected 2 fields";
    return false;
  }
  return true;
}

std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<CitationRecord> parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  RecordGatherer gatherer;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(std::move(line));
    if (!saw_header) {
      if (line != "id,citations") {
        throw MalformedRow(line_no, "expected header 'id,citations'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    std::string id;
    std::string count_text;
    std::string reason;
    if (!split_csv_row(line, id, count_text, reason)) {
      throw MalformedRow(line_no, reason);
    }
    std::int64_t count = 0;
    const auto [end, ec] = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc{} || end != count_text.data() + count_text.size()) {
      throw MalformedRow(line_no, "bad citation count '" + count_text + "'");
    }
    if (count < 0) throw NegativeCount(line_no, "csv input");
    gatherer.add(id, count);
  }
  return gatherer.finish();
}

void write_csv(std::ostream& out, std::span<const CitationRecord> records) {
  out << "id,citations\n";
  for (const auto& record : records) {
    const std::string id = csv_field(record.researcher_id);
    for (const std::int64_t count : record.counts) {
      out << id << ',' << count << '\n';
    }
  }
}

std::vector<CitationRecord> parse_json(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw MalformedDocument(e.what());
  }
  if (!doc.is_array()) throw MalformedDocument("top level must be an array");

  RecordGatherer gatherer;
  std::size_t element = 0;
  for (const auto& entry : doc) {
    if (!entry.is_object()) {
      throw MalformedDocument("element " + std::to_string(element) +
                              " is not an object");
    }
    const auto id_it = entry.find("id");
    if (id_it == entry.end() || !id_it->is_string()) {
      throw MalformedDocument("element " + std::to_string(element) +
                              " lacks a string 'id'");
    }
    const auto counts_it = entry.find("counts");
    if (counts_it == entry.end() || !counts_it->is_array()) {
      throw MalformedDocument("element " + std::to_string(element) +
                              " lacks a 'counts' array");
    }
    const std::string id = id_it->get<std::string>();
    bool any = false;
    for (const auto& c : *counts_it) {
      if (!c.is_number_integer() && !c.is_number_unsigned()) {
        throw MalformedDocument("non-integer count");
      }
      if (c.is_number_unsigned() &&
          c.get<std::uint64_t>() >
              static_cast<std::uint64_t>(
                  std::numeric_limits<std::int64_t>::max())) {
        throw MalformedDocument("count out of range");
      }
      const std::int64_t count = c.get<std::int64_t>();
      if (count < 0) throw NegativeCount(element, "json input");
      gatherer.add(id, count);
      any = true;
    }
    if (!any) gatherer.add_empty(id);
    ++element;
  }
  return gatherer.finish();
}

void write_json(std::ostream& out, std::span<const CitationRecord> records) {
  json doc = json::array();
  for (const auto& record : records) {
    json entry;
    entry["id"] = record.researcher_id;
    entry["counts"] = record.counts;
    doc.push_back(std::move(entry));
  }
  out << doc.dump() << '\n';
}

namespace {

std::mutex cache_writer_mutex;

// Returns the parsed record when `value` matches the cache line schema.
std::optional<CitationRecord> record_from_cache_line(const json& value,
                                                     std::string& reason) {
  if (!value.is_object()) {
    reason = "not an object";
    return std::nullopt;
  }
  const auto id_it = value.find("id");
  const auto counts_it = value.find("counts");
  const auto fetched_it = value.find("fetched_at");
  if (id_it == value.end() || !id_it->is_string()) {
    reason = "missing string 'id'";
    return std::nullopt;
  }
  if (counts_it == value.end() || !counts_it->is_array()) {
    reason = "missing 'counts' array";
    return std::nullopt;
  }
  if (fetched_it == value.end() || !fetched_it->is_string()) {
    reason = "missing 'fetched_at' timestamp";
    return std::nullopt;
  }
  CitationRecord record;
  record.researcher_id = id_it->get<std::string>();
  for (const auto& c : *counts_it) {
    if (!c.is_number_integer() && !c.is_number_unsigned()) {
      reason = "non-integer count";
      return std::nullopt;
    }
    const std::int64_t count = c.get<std::int64_t>();
    if (count < 0) {
      reason = "negative count";
      return std::nullopt;
    }
    record.counts.push_back(count);
  }
  std::sort(record.counts.begin(), record.counts.end(),
            std::greater<std::int64_t>());
  return record;
}

}  // namespace

std::optional<CitationRecord> cache_load(const SourceConfig& config,
                                         const std::string& author_id,
                                         std::vector<CacheWarning>* warnings) {
  std::ifstream in(config.cache_path);
  if (!in) return std::nullopt;

  std::optional<CitationRecord> found;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(std::move(line));
    if (line.empty()) continue;
    json value = json::parse(line, nullptr, false);
    std::string reason;
    if (value.is_discarded()) {
      if (warnings) warnings->push_back({line_no, "invalid JSON"});
      continue;
    }
    auto record = record_from_cache_line(value, reason);
    if (!record) {
      if (warnings) warnings->push_back({line_no, reason});
      continue;
    }
    if (record->researcher_id == author_id) found = std::move(record);
  }
  return found;
}

void cache_append(const SourceConfig& config, const CitationRecord& record) {
  json line;
  line["id"] = record.researcher_id;
  line["counts"] = record.counts;
  line["fetched_at"] = rfc3339_utc_now();

  std::lock_guard<std::mutex> lock(cache_writer_mutex);
  std::ofstream out(config.cache_path, std::ios::app);
  if (!out) {
    throw Error("cannot open cache for append: " + config.cache_path);
  }
  out << line.dump() << '\n';
}

CompactResult cache_compact(const SourceConfig& config) {
  std::ifstream in(config.cache_path);
  if (!in) return {};

  std::unordered_map<std::string, std::size_t> slot;  // id -> position
  std::vector<std::pair<std::string, std::string>> kept;  // id, raw line
  std::size_t lines_seen = 0;
  std::string line;
  while (std::getline(in, line)) {
    line = chomp(std::move(line));
    if (line.empty()) continue;
    ++lines_seen;
    json value = json::parse(line, nullptr, false);
    std::string reason;
    if (value.is_discarded() || !record_from_cache_line(value, reason)) {
      continue;
    }
    const std::string id = value.at("id").get<std::string>();
    const auto [it, inserted] = slot.try_emplace(id, kept.size());
    if (inserted) {
      kept.push_back({id, line});
    } else {
      kept[it->second].second = line;
    }
  }
  in.close();

  const std::string tmp_path = config.cache_path + ".compact.tmp";
  {
    std::lock_guard<std::mutex> lock(cache_writer_mutex);
    std::ofstream out(tmp_path, std::ios::trunc);
    if (!out) throw Error("cannot write compacted cache: " + tmp_path);
    for (const auto& [id, raw] : kept) out << raw << '\n';
    out.close();
    std::filesystem::rename(tmp_path, config.cache_path);
  }
  return {kept.size(), lines_seen - kept.size()};
}

CitationRecord fetch_author(const SourceConfig& config,
                            const std::string& author_id) {
  ApiClient client(config);
  return client.fetch_author(author_id);
}

}  // namespace citrank::ingest
