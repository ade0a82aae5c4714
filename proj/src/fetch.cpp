#include <algorithm>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "citrank/errors.hpp"
#include "citrank/ingest.hpp"
#include "citrank/manifest.hpp"
#include "citrank/rng.hpp"

namespace citrank::ingest {

using nlohmann::json;

namespace {

std::string url_encode(const std::string& value) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(value.size());
  for (const unsigned char c : value) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

// Walks a dotted path ("citations.count") through nested objects.
const json* lookup_path(const json& value, const std::string& path) {
  const json* node = &value;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (!node->is_object()) return nullptr;
    const auto it = node->find(key);
    if (it == node->end()) return nullptr;
    node = &*it;
    if (dot == std::string::npos) return node;
    start = dot + 1;
  }
}

}  // namespace

struct ApiClient::Impl {
  SourceConfig config;
  std::string path_prefix;
  std::unique_ptr<httplib::Client> http;
  SplitMix64 jitter_rng;

  std::mutex pace_mutex;
  std::chrono::steady_clock::time_point next_slot;
  // Serializes the wire requests themselves; callers may fetch distinct
  // authors concurrently, the limiter and this lock keep the client safe.
  std::mutex request_mutex;

  explicit Impl(SourceConfig cfg)
      : config(std::move(cfg)),
        jitter_rng(fnv1a64(config.base_url)),
        next_slot(std::chrono::steady_clock::now()) {
    validate(config);
    std::string origin = config.base_url;
    const std::size_t scheme = origin.find("://");
    const std::size_t slash =
        origin.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
      path_prefix = origin.substr(slash);
      origin.resize(slash);
    }
    while (!path_prefix.empty() && path_prefix.back() == '/') {
      path_prefix.pop_back();
    }
    http = std::make_unique<httplib::Client>(origin);
    const auto timeout =
        std::chrono::microseconds(static_cast<long long>(config.timeout * 1e6));
    http->set_connection_timeout(timeout);
    http->set_read_timeout(timeout);
    http->set_write_timeout(timeout);
    std::string agent = "citrank/" + std::string(kToolVersion);
    if (!config.contact_email.empty()) {
      agent += " (mailto:" + config.contact_email + ")";
    }
    http->set_default_headers({{"User-Agent", agent}});
  }

  // Blocks until this request's slot. Slots are handed out at least
  // 1/rate_limit apart, so no 1-second window ever sees more than rate_limit
  // request starts.
  void pace() {
    std::chrono::steady_clock::time_point wake;
    {
      std::lock_guard<std::mutex> lock(pace_mutex);
      const auto interval = std::chrono::duration_cast<
          std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / config.rate_limit));
      const auto now = std::chrono::steady_clock::now();
      wake = std::max(now, next_slot);
      next_slot = wake + interval;
    }
    std::this_thread::sleep_until(wake);
  }

  httplib::Result get_with_retries(const std::string& path,
                                   const std::string& author_id) {
    std::string last_error;
    for (int attempt = 0;; ++attempt) {
      pace();
      httplib::Result res = [&] {
        std::lock_guard<std::mutex> lock(request_mutex);
        return http->Get(path);
      }();
      std::optional<double> retry_after;
      if (res) {
        if (res->status == 200) return res;
        if (res->status == 404) throw AuthorNotFound(author_id);
        if (res->status == 429) {
          last_error = "HTTP 429";
          if (res->has_header("Retry-After")) {
            try {
              retry_after = std::stod(res->get_header_value("Retry-After"));
            } catch (const std::exception&) {
            }
          }
        } else if (res->status >= 500) {
          last_error = "HTTP " + std::to_string(res->status);
        } else {
          throw TransportError("HTTP " + std::to_string(res->status));
        }
      } else {
        last_error = httplib::to_string(res.error());
      }
      if (attempt >= config.max_retries) {
        throw TransportError(last_error + " after " +
                             std::to_string(attempt) + " retries");
      }
      // Exponential backoff with jitter; a 429's Retry-After takes priority.
      double delay = config.backoff_base * std::pow(2.0, attempt);
      {
        std::lock_guard<std::mutex> lock(pace_mutex);
        delay += 0.1 * delay * jitter_rng.next_unit();
      }
      if (retry_after) delay = *retry_after;
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
  }
};

ApiClient::ApiClient(SourceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

ApiClient::~ApiClient() = default;
ApiClient::ApiClient(ApiClient&&) noexcept = default;
ApiClient& ApiClient::operator=(ApiClient&&) noexcept = default;

const SourceConfig& ApiClient::config() const { return impl_->config; }

CitationRecord ApiClient::fetch_author(const std::string& author_id) {
  if (author_id.empty()) {
    throw InvalidConfig("author id must be non-empty");
  }

  std::vector<std::int64_t> counts;
  std::string cursor = "*";
  std::string previous_cursor;
  for (;;) {
    std::ostringstream path;
    path << impl_->path_prefix << "/works?filter=author.id:"
         << url_encode(author_id) << "&per-page=" << impl_->config.per_page
         << "&cursor=" << url_encode(cursor);
    const httplib::Result res = impl_->get_with_retries(path.str(), author_id);

    json body = json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      throw SchemaMismatch("response is not a JSON object");
    }
    const auto results_it = body.find("results");
    if (results_it == body.end() || !results_it->is_array()) {
      throw SchemaMismatch("response lacks a 'results' array");
    }
    for (const auto& work : *results_it) {
      const json* count = lookup_path(work, impl_->config.count_field);
      if (count == nullptr) {
        throw SchemaMismatch("work lacks count field '" +
                             impl_->config.count_field + "'");
      }
      if (!count->is_number_integer() && !count->is_number_unsigned()) {
        throw SchemaMismatch("count field '" + impl_->config.count_field +
                             "' is not an integer");
      }
      const std::int64_t value = count->get<std::int64_t>();
      if (value < 0) {
        throw SchemaMismatch("count field '" + impl_->config.count_field +
                             "' is negative");
      }
      counts.push_back(value);
    }

    std::string next_cursor;
    if (const auto meta_it = body.find("meta"); meta_it != body.end()) {
      const json* next = lookup_path(*meta_it, "next_cursor");
      if (next != nullptr && next->is_string()) {
        next_cursor = next->get<std::string>();
      }
    }
    if (results_it->empty() || next_cursor.empty() ||
        next_cursor == cursor || next_cursor == previous_cursor) {
      break;
    }
    previous_cursor = cursor;
    cursor = next_cursor;
  }

  CitationRecord record =
      normalize_record(author_id, std::span<const std::int64_t>(counts));
  cache_append(impl_->config, record);
  return record;
}

}  // namespace citrank::ingest
