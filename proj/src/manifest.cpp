#include "citrank/manifest.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "citrank/errors.hpp"

namespace citrank {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::uint64_t hash = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return "fnv1a64:" + fnv1a64_hex(buffer.str());
}

std::string rfc3339_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

RunManifest make_manifest(const std::string& command,
                          const std::string& settings_text,
                          std::span<const std::string> input_paths) {
  RunManifest manifest;
  manifest.command = command;
  manifest.config_digest = "fnv1a64:" + fnv1a64_hex(settings_text);
  for (const auto& path : input_paths) {
    manifest.input_digests[path] = digest_file(path);
  }
  manifest.tool_version = kToolVersion;
  manifest.timestamp = rfc3339_utc_now();
  return manifest;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json doc;
  doc["command"] = manifest.command;
  doc["config_digest"] = manifest.config_digest;
  doc["input_digests"] = manifest.input_digests;
  doc["tool_version"] = manifest.tool_version;
  doc["timestamp"] = manifest.timestamp;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write manifest: " + path);
  out << doc.dump(2) << '\n';
}

std::string manifest_path_for(const std::string& output_path) {
  return output_path + ".manifest.json";
}

}  // namespace citrank
