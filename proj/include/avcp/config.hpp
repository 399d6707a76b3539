#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "avcp/arrange.hpp"
#include "avcp/opcore.hpp"

namespace avcp::config {

// One arrangement block from a config file.
struct ArrangementSpec {
  std::string name;
  std::vector<std::string> labels;
  std::vector<std::string> operator_keys;  // parallel to labels
  std::optional<std::vector<int>> copies;  // nullopt = automatic assignment
  std::string combining;
  std::optional<std::string> background_key;
  std::array<double, 3> times{0.0, 0.0, 0.0};  // t0, t1, t2
};

// Validated experiment configuration. `raw` keeps the parsed tree for the
// report echo; re-validating that echo must succeed (schema round-trip).
struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  Eigen::Index dimension = 0;
  double hbar = 1.0;
  long runs = 100000;
  std::map<std::string, opcore::HermitianOperator> operators;
  std::vector<ArrangementSpec> arrangements;
  nlohmann::json checks = nlohmann::json::array();
  nlohmann::json raw;
};

// Builds an operator from a builtin spec string. Supported:
//   pauli_x | pauli_y | pauli_z | identity(N) | spin_j(N,x|y|z)
//   lattice_x(M,a) | lattice_p(M,a)
// hbar scales the angular-momentum and lattice-momentum builtins.
opcore::HermitianOperator builtin_operator(const std::string& spec,
                                           double hbar);

// Human-readable catalog of builtin operators, check kinds and config keys.
std::string builtin_catalog();

// Validates a parsed TOML tree; throws ConfigError with a field path.
ExperimentConfig load_config(const nlohmann::json& tree);
ExperimentConfig load_config_file(const std::string& path);

// Algebra over the arrangement's labels with noncommutation relations taken
// from the numeric commutators of the bound operators.
symalg::AlgebraPtr label_algebra(const ExperimentConfig& cfg,
                                 const ArrangementSpec& spec);

// Instantiates one arrangement (resolving operators, with validation of an
// explicit copy assignment against the commutation rules).
arrange::Arrangement build_arrangement(const ExperimentConfig& cfg,
                                       const ArrangementSpec& spec);

// Evaluates an operator-context expression over the config's operator keys
// (e.g. "A^2 + 2*B", "(A*B+B*A)/2") to a validated Hermitian operator.
opcore::HermitianOperator operator_from_expression(const ExperimentConfig& cfg,
                                                   const std::string& expr);

const ArrangementSpec& find_arrangement(const ExperimentConfig& cfg,
                                        const std::string& name);

}  // namespace avcp::config
