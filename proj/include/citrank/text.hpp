#pragma once

#include <array>
#include <charconv>
#include <string>

namespace citrank {

// Shortest decimal form that round-trips to the same double. All serialized
// output goes through this so table, CSV, and JSON renderings of one value
// are byte-identical.
inline std::string format_double(double value) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), end);
}

// Quotes a CSV field only when it needs it (comma, quote, CR or LF).
inline std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace citrank
