#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citrank/record.hpp"

namespace citrank::ingest {

// Settings for the works-per-author HTTP API and the local cache.
//
// The client targets a generic "works with citation counts" response shape:
// GET <base_url>/works?filter=author.id:<id>&per-page=<n>&cursor=<c> returning
// {"meta": {"next_cursor": ...}, "results": [work, ...]} where each work
// carries its citation count under `count_field` (a dotted path, default
// "cited_by_count").
struct SourceConfig {
  std::string base_url;
  double rate_limit = 1.0;  // max requests per second, > 0
  int max_retries = 3;
  double timeout = 30.0;  // per-request, seconds
  std::string cache_path = "citrank-cache.jsonl";
  std::string contact_email;  // optional; sent in the User-Agent when set
  std::string count_field = "cited_by_count";
  int per_page = 200;
  double backoff_base = 1.0;  // first retry delay, seconds; doubles per retry
};

// Throws InvalidConfig naming the violated constraint.
void validate(const SourceConfig& config);

// CSV schema: header "id,citations", one row per paper, UTF-8, LF or CRLF.
// The id field may be double-quoted (with "" escapes) when it contains a
// comma, quote, or newline. Rows with the same id are gathered into one
// record; records come out in first-appearance order, counts descending.
// Empty input yields an empty sequence. Throws MalformedRow / NegativeCount
// with one-based line numbers.
//
// Note a researcher with zero papers has no CSV representation; only the
// JSON form can round-trip empty records.
std::vector<CitationRecord> parse_csv(std::istream& in);
void write_csv(std::ostream& out, std::span<const CitationRecord> records);

// JSON schema: array of {"id": string, "counts": [non-negative ints]}.
// Same gathering rules as CSV. Throws MalformedDocument / NegativeCount.
std::vector<CitationRecord> parse_json(std::istream& in);
void write_json(std::ostream& out, std::span<const CitationRecord> records);

// Cache file: JSON lines {"id": ..., "counts": [...], "fetched_at": RFC 3339},
// append-only, last write wins on load. Appends within a process are
// serialized through one internal writer lock.
struct CacheWarning {
  std::size_t line_no = 0;  // one-based
  std::string reason;
};

// Returns the newest schema-valid cached record for author_id, or nullopt.
// Corrupt lines are skipped and reported through `warnings` when given.
std::optional<CitationRecord> cache_load(
    const SourceConfig& config, const std::string& author_id,
    std::vector<CacheWarning>* warnings = nullptr);

void cache_append(const SourceConfig& config, const CitationRecord& record);

struct CompactResult {
  std::size_t entries_kept = 0;
  std::size_t lines_dropped = 0;  // superseded or corrupt lines removed
};

// Rewrites the cache keeping the newest line per id, first-seen id order.
CompactResult cache_compact(const SourceConfig& config);

// HTTP client for the works API. One client owns one rate limiter; route all
// fetches of a run through a single client so pacing is process-wide.
// fetch_author pages through the author's works, retries transient failures
// (connect errors, 5xx, 429 honoring Retry-After) with exponential backoff,
// normalizes the record, and appends it to the cache before returning.
// Throws AuthorNotFound, SchemaMismatch, TransportError.
class ApiClient {
 public:
  explicit ApiClient(SourceConfig config);
  ~ApiClient();
  ApiClient(ApiClient&&) noexcept;
  ApiClient& operator=(ApiClient&&) noexcept;

  CitationRecord fetch_author(const std::string& author_id);

  const SourceConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around a transient ApiClient.
CitationRecord fetch_author(const SourceConfig& config,
                            const std::string& author_id);

}  // namespace citrank::ingest
