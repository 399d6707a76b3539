#pragma once

#include <optional>

#include "avcp/config.hpp"
#include "avcp/report.hpp"

namespace avcp::checks {

// Command-line overrides applied on top of the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<long> runs;
  std::optional<double> tol;
};

// Executes every check in the config and assembles the report. Numeric
// fields depend only on (config, effective seed), so reruns are
// reproducible.
report::Report run_experiment_checks(const config::ExperimentConfig& cfg,
                                     const RunOverrides& overrides = {});

}  // namespace avcp::checks
