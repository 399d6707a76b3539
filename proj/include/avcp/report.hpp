#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace avcp::report {

struct CheckRecord {
  std::string name;
  std::string kind;
  std::optional<double> lhs;
  std::optional<double> rhs;
  std::optional<double> abs_err;
  std::optional<double> tol;
  bool pass = false;
  std::string notes;
};

struct McRecord {
  std::string check;
  long runs = 0;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::vector<double> support;
};

// Full experiment report. Numeric fields are deterministic for a fixed
// (config, seed); only `timestamp` varies between reruns.
struct Report {
  std::string name;
  nlohmann::json config_echo;
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;
  std::vector<CheckRecord> checks;
  std::vector<McRecord> mc;

  bool all_pass() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

std::string iso_timestamp_utc();

}  // namespace avcp::report
