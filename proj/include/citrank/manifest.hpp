#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace citrank {

inline constexpr std::string_view kToolVersion = "0.1.0";

// FNV-1a, 64-bit. Digests only fingerprint settings and inputs for
// reproducibility bookkeeping; they are not cryptographic.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// "fnv1a64:<hex>" over a file's bytes. Throws Error when unreadable.
std::string digest_file(const std::string& path);

std::string rfc3339_utc_now();

// Written beside every file-producing command so emitted numbers stay
// traceable to the exact settings and inputs that produced them.
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::map<std::string, std::string> input_digests;  // path -> digest
  std::string tool_version;
  std::string timestamp;
};

// settings_text is the canonical rendering of all effective settings; equal
// settings and inputs therefore give equal digests.
RunManifest make_manifest(const std::string& command,
                          const std::string& settings_text,
                          std::span<const std::string> input_paths);

void write_manifest(const RunManifest& manifest, const std::string& path);

// "<output_path>.manifest.json"
std::string manifest_path_for(const std::string& output_path);

}  // namespace citrank
