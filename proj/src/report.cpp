#include "avcp/report.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "avcp/version.hpp"

namespace avcp::report {

namespace {

using nlohmann::json;

json opt_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string num_or_empty(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(17);
  os << *v;
  return os.str();
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

json Report::to_json() const {
  json out;
  out["schema_version"] = kConfigSchemaVersion;
  out["name"] = name;
  out["config"] = config_echo;
  out["environment"] = {{"seed", seed},
                        {"version", version},
                        {"timestamp", timestamp}};
  out["checks"] = json::array();
  for (const auto& c : checks) {
    out["checks"].push_back({{"name", c.name},
                             {"kind", c.kind},
                             {"lhs", opt_to_json(c.lhs)},
                             {"rhs", opt_to_json(c.rhs)},
                             {"abs_err", opt_to_json(c.abs_err)},
                             {"tol", opt_to_json(c.tol)},
                             {"pass", c.pass},
                             {"notes", c.notes}});
  }
  out["mc"] = json::array();
  for (const auto& m : mc) {
    out["mc"].push_back({{"check", m.check},
                         {"runs", m.runs},
                         {"mean", m.mean},
                         {"stderr", m.stderr_of_mean},
                         {"support", m.support}});
  }
  out["pass"] = all_pass();
  return out;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "name,kind,lhs,rhs,abs_err,tol,pass,notes\n";
  for (const auto& c : checks) {
    os << csv_escape(c.name) << ',' << csv_escape(c.kind) << ','
       << num_or_empty(c.lhs) << ',' << num_or_empty(c.rhs) << ','
       << num_or_empty(c.abs_err) << ',' << num_or_empty(c.tol) << ','
       << (c.pass ? "true" : "false") << ',' << csv_escape(c.notes) << '\n';
  }
  return os.str();
}

std::string iso_timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace avcp::report
