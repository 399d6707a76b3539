#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace avcp::verify {

struct SuiteRecord {
  std::string module;
  std::string name;
  double max_err = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string notes;
};

// Runs every module's invariant suite (filterable by module-name substring).
// All randomness derives from `seed`, so two runs with the same seed produce
// identical records.
std::vector<SuiteRecord> run_suites(std::uint64_t seed,
                                    const std::string& filter = "");

std::string summary_table(const std::vector<SuiteRecord>& records);

int count_failures(const std::vector<SuiteRecord>& records);

}  // namespace avcp::verify
