#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace avcp::toml_lite {

// Parses the TOML subset used by experiment configs into a JSON tree:
//   - key = value pairs, [table] headers, [[array-of-table]] headers
//   - basic "strings", integers, floats, booleans
//   - (nested, possibly multiline) arrays
//   - # comments
// Dotted keys, inline tables, dates and multiline strings are not supported.
// Throws avcp::ConfigError with a line-based path on malformed input.
nlohmann::json parse(std::string_view text);

nlohmann::json parse_file(const std::string& path);

}  // namespace avcp::toml_lite
