#include "avcp/config.hpp"

#include <cmath>
#include <sstream>

#include "avcp/lattice.hpp"
#include "avcp/spin.hpp"
#include "avcp/toml_lite.hpp"
#include "avcp/version.hpp"

namespace avcp::config {

namespace {

using nlohmann::json;
using opcore::ComplexMatrix;
using opcore::HermitianOperator;

[[noreturn]] void fail(const std::string& msg, const std::string& path) {
  throw ConfigError(msg, path);
}

// Splits "spin_j(3,z)" into name and argument list.
struct BuiltinSpec {
  std::string name;
  std::vector<std::string> args;
};

BuiltinSpec parse_builtin_spec(const std::string& text) {
  BuiltinSpec spec;
  const auto open = text.find('(');
  if (open == std::string::npos) {
    spec.name = text;
    return spec;
  }
  if (text.back() != ')') {
    throw Error("malformed builtin spec '" + text + "'");
  }
  spec.name = text.substr(0, open);
  std::string args = text.substr(open + 1, text.size() - open - 2);
  std::string current;
  for (char c : args) {
    if (c == ',') {
      spec.args.push_back(current);
      current.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      current += c;
    }
  }
  if (!current.empty()) spec.args.push_back(current);
  return spec;
}

long arg_long(const BuiltinSpec& spec, std::size_t idx) {
  if (idx >= spec.args.size()) {
    throw Error("builtin '" + spec.name + "' is missing argument " +
                std::to_string(idx + 1));
  }
  return std::stol(spec.args[idx]);
}

double arg_double(const BuiltinSpec& spec, std::size_t idx) {
  if (idx >= spec.args.size()) {
    throw Error("builtin '" + spec.name + "' is missing argument " +
                std::to_string(idx + 1));
  }
  return std::stod(spec.args[idx]);
}

HermitianOperator pauli(char axis) {
  ComplexMatrix m(2, 2);
  switch (axis) {
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << std::complex<double>(0, 0), std::complex<double>(0, -1),
          std::complex<double>(0, 1), std::complex<double>(0, 0);
      break;
    default:
      m << 1, 0, 0, -1;
      break;
  }
  return HermitianOperator::FromHermitianParts(m);
}

}  // namespace

HermitianOperator builtin_operator(const std::string& text, double hbar) {
  const BuiltinSpec spec = parse_builtin_spec(text);
  if (spec.name == "pauli_x") return pauli('x');
  if (spec.name == "pauli_y") return pauli('y');
  if (spec.name == "pauli_z") return pauli('z');
  if (spec.name == "identity") {
    const long n = arg_long(spec, 0);
    return HermitianOperator::FromHermitianParts(
        ComplexMatrix::Identity(n, n));
  }
  if (spec.name == "spin_j") {
    const long n = arg_long(spec, 0);
    if (spec.args.size() < 2) {
      throw Error("spin_j needs (N, axis), e.g. spin_j(2,z)");
    }
    const std::string axis = spec.args[1];
    const spin::AngularMomentumTriple triple = spin::angular_momentum(n, hbar);
    if (axis == "x") return triple.lx;
    if (axis == "y") return triple.ly;
    if (axis == "z") return triple.lz;
    throw Error("spin_j axis must be x, y or z, got '" + axis + "'");
  }
  if (spec.name == "lattice_x" || spec.name == "lattice_p") {
    lattice::LatticeConfig cfg;
    cfg.sites = arg_long(spec, 0);
    cfg.spacing = arg_double(spec, 1);
    cfg.hbar = hbar;
    return spec.name == "lattice_x" ? lattice::lattice_position(cfg)
                                    : lattice::lattice_momentum(cfg);
  }
  throw Error("unknown builtin operator '" + spec.name + "'");
}

std::string builtin_catalog() {
  std::ostringstream out;
  out << "avcp builtin catalog (config schema version "
      << kConfigSchemaVersion << ")\n\n";
  out << "operators:\n"
      << "  pauli_x, pauli_y, pauli_z      2x2 Pauli matrices\n"
      << "  identity(N)                    N-dimensional identity\n"
      << "  spin_j(N,axis)                 angular momentum component for\n"
      << "                                 dimension N = 2j+1, axis x|y|z,\n"
      << "                                 scaled by the configured hbar\n"
      << "  lattice_x(M,a)                 periodic-lattice position\n"
      << "  lattice_p(M,a)                 periodic-lattice momentum\n"
      << "  inline matrices                nested arrays [[..[re,im]..]..]\n\n";
  out << "checks (each a [[checks]] table with kind = ...):\n"
      << "  avcp_operator      candidate expression vs expected output on\n"
      << "                     Haar states and optional eigenbases\n"
      << "  solve_operator     least-squares representing operator;\n"
      << "                     expect feasible|infeasible, optional match\n"
      << "  mc_vs_exact        Monte Carlo mean within n_sigma * stderr\n"
      << "  mc_support         observed outputs equal the expected set\n"
      << "  eigenvalues        eigenvalues of an operator expression\n"
      << "  copies             automatic copy count of an arrangement\n"
      << "  simple             simplicity of a classical expression\n"
      << "  exact_value        exact expected output vs a number\n"
      << "  hermitization_ambiguity   symmetrized-product rule ambiguity\n"
      << "  rotation_so3       rotation-commutator residual scaling\n"
      << "  spin_identities    angular-momentum identity batch\n"
      << "  larmor             precession circle closure\n"
      << "  poisson_bracket    classical bracket vs expected expression\n"
      << "  poisson_defect     bracket-vs-commutator scalar defect\n\n";
  out << "config keys: name, seed, dimension, hbar, runs, [operators],\n"
      << "  [[arrangement]] (name, labels, operators, copies, combining,\n"
      << "  background, times), [[checks]] (kind plus per-kind keys,\n"
      << "  common: name, tol, state, arrangement, expect)\n";
  return out.str();
}

namespace {

HermitianOperator operator_from_json(const json& value, double hbar,
                                     const std::string& path) {
  if (value.is_string()) {
    try {
      return builtin_operator(value.get<std::string>(), hbar);
    } catch (const Error& e) {
      fail(e.what(), path);
    }
  }
  if (!value.is_array()) {
    fail("operator must be a builtin string or a nested array", path);
  }
  const std::size_t n = value.size();
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = value[r];
    if (!row.is_array() || row.size() != n) {
      fail("operator rows must all have length " + std::to_string(n), path);
    }
    for (std::size_t c = 0; c < n; ++c) {
      const json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number()) {
        fail("matrix entries must be [re, im] pairs", path);
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  try {
    return HermitianOperator::FromMatrix(m, 1e-9);
  } catch (const Error& e) {
    fail(e.what(), path);
  }
}

template <typename T>
T get_or(const json& tree, const std::string& key, const T& fallback) {
  if (!tree.contains(key)) return fallback;
  return tree.at(key).get<T>();
}

}  // namespace

ExperimentConfig load_config(const json& tree) {
  if (!tree.is_object()) fail("config root must be a table", "$");
  ExperimentConfig cfg;
  cfg.raw = tree;

  if (!tree.contains("name") || !tree.at("name").is_string()) {
    fail("missing required string key 'name'", "name");
  }
  cfg.name = tree.at("name").get<std::string>();

  if (tree.contains("seed")) {
    if (!tree.at("seed").is_number_integer() &&
        !tree.at("seed").is_number_unsigned()) {
      fail("'seed' must be an integer", "seed");
    }
    cfg.seed = tree.at("seed").get<std::uint64_t>();
  }
  if (tree.contains("dimension")) {
    cfg.dimension = tree.at("dimension").get<Eigen::Index>();
    if (cfg.dimension < 1) fail("'dimension' must be >= 1", "dimension");
  }
  cfg.hbar = get_or(tree, "hbar", 1.0);
  if (!(cfg.hbar > 0.0)) fail("'hbar' must be > 0", "hbar");
  cfg.runs = get_or(tree, "runs", 100000L);
  if (cfg.runs < 1) fail("'runs' must be >= 1", "runs");

  if (tree.contains("operators")) {
    const json& ops = tree.at("operators");
    if (!ops.is_object()) fail("'operators' must be a table", "operators");
    for (const auto& [key, value] : ops.items()) {
      const HermitianOperator op =
          operator_from_json(value, cfg.hbar, "operators." + key);
      if (cfg.dimension == 0) cfg.dimension = op.dim();
      cfg.operators.emplace(key, op);
    }
  }

  if (tree.contains("arrangement")) {
    const json& arrs = tree.at("arrangement");
    if (!arrs.is_array()) {
      fail("'arrangement' must be an array of tables ([[arrangement]])",
           "arrangement");
    }
    for (std::size_t idx = 0; idx < arrs.size(); ++idx) {
      const json& a = arrs[idx];
      const std::string path = "arrangement[" + std::to_string(idx) + "]";
      ArrangementSpec spec;
      spec.name = get_or(a, "name", std::string("arr") + std::to_string(idx + 1));
      if (!a.contains("labels") || !a.at("labels").is_array()) {
        fail("missing 'labels' array", path + ".labels");
      }
      for (const auto& l : a.at("labels")) {
        spec.labels.push_back(l.get<std::string>());
      }
      if (!a.contains("operators") || !a.at("operators").is_array()) {
        fail("missing 'operators' array", path + ".operators");
      }
      for (const auto& o : a.at("operators")) {
        spec.operator_keys.push_back(o.get<std::string>());
      }
      if (spec.operator_keys.size() != spec.labels.size()) {
        fail("'operators' must match 'labels' in length", path + ".operators");
      }
      for (const auto& key : spec.operator_keys) {
        if (!cfg.operators.count(key)) {
          fail("arrangement references undefined operator '" + key + "'",
               path + ".operators");
        }
      }
      if (a.contains("copies")) {
        const json& c = a.at("copies");
        if (c.is_string()) {
          if (c.get<std::string>() != "auto") {
            fail("'copies' must be \"auto\" or an index array",
                 path + ".copies");
          }
        } else if (c.is_array()) {
          std::vector<int> copies;
          for (const auto& v : c) copies.push_back(v.get<int>());
          if (copies.size() != spec.labels.size()) {
            fail("'copies' must match 'labels' in length", path + ".copies");
          }
          spec.copies = std::move(copies);
        } else {
          fail("'copies' must be \"auto\" or an index array", path + ".copies");
        }
      }
      if (!a.contains("combining") || !a.at("combining").is_string()) {
        fail("missing 'combining' expression", path + ".combining");
      }
      spec.combining = a.at("combining").get<std::string>();
      if (a.contains("background")) {
        spec.background_key = a.at("background").get<std::string>();
        if (!cfg.operators.count(*spec.background_key)) {
          fail("background references undefined operator '" +
                   *spec.background_key + "'",
               path + ".background");
        }
      }
      if (a.contains("times")) {
        const json& t = a.at("times");
        if (!t.is_array() || t.size() != 3) {
          fail("'times' must be [t0, t1, t2]", path + ".times");
        }
        for (int k = 0; k < 3; ++k) {
          spec.times[static_cast<std::size_t>(k)] = t[k].get<double>();
        }
      }
      cfg.arrangements.push_back(std::move(spec));
    }
  }

  if (tree.contains("checks")) {
    if (!tree.at("checks").is_array()) {
      fail("'checks' must be an array of tables ([[checks]])", "checks");
    }
    cfg.checks = tree.at("checks");
    for (std::size_t idx = 0; idx < cfg.checks.size(); ++idx) {
      const json& c = cfg.checks[idx];
      const std::string path = "checks[" + std::to_string(idx) + "]";
      if (!c.is_object() || !c.contains("kind") || !c.at("kind").is_string()) {
        fail("every check needs a string 'kind'", path + ".kind");
      }
    }
  }

  // Arrangements with explicit copies must satisfy the commutation rules
  // up front, so invalid configurations are rejected before any run.
  for (const auto& spec : cfg.arrangements) {
    build_arrangement(cfg, spec);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  return load_config(toml_lite::parse_file(path));
}

symalg::AlgebraPtr label_algebra(const ExperimentConfig& cfg,
                                 const ArrangementSpec& spec) {
  auto alg = std::make_shared<symalg::Algebra>();
  for (const auto& label : spec.labels) alg->declare_observable(label);
  // Record numeric noncommutativity in the algebra so simplicity checks on
  // the combining expression see the same relations the copy rules use.
  for (std::size_t a = 0; a < spec.labels.size(); ++a) {
    for (std::size_t b = a + 1; b < spec.labels.size(); ++b) {
      const auto& op_a = cfg.operators.at(spec.operator_keys[a]);
      const auto& op_b = cfg.operators.at(spec.operator_keys[b]);
      const double scale =
          std::max(1.0, op_a.frobenius_norm() * op_b.frobenius_norm());
      if (opcore::commutator(op_a, op_b).norm() >
          arrange::kCommuteTol * scale) {
        alg->set_noncommuting(alg->require(spec.labels[a]),
                              alg->require(spec.labels[b]));
      }
    }
  }
  return alg;
}

arrange::Arrangement build_arrangement(const ExperimentConfig& cfg,
                                       const ArrangementSpec& spec) {
  const symalg::AlgebraPtr alg = label_algebra(cfg, spec);
  std::vector<arrange::MeasurementDecl> decls;
  for (std::size_t i = 0; i < spec.labels.size(); ++i) {
    decls.push_back(arrange::MeasurementDecl{
        spec.labels[i], cfg.operators.at(spec.operator_keys[i]),
        std::nullopt});
  }

  symalg::ClassicalPoly combining;
  try {
    combining = symalg::parse_classical(spec.combining, alg);
  } catch (const Error& e) {
    throw ConfigError(std::string("bad combining expression: ") + e.what(),
                      "arrangement." + spec.name + ".combining");
  }

  std::optional<arrange::Background> background;
  if (spec.background_key) {
    background = arrange::Background{cfg.operators.at(*spec.background_key),
                                     spec.times[0], spec.times[1],
                                     spec.times[2], cfg.hbar};
  }

  try {
    if (spec.copies) {
      return arrange::Arrangement::Create(std::move(decls), *spec.copies,
                                          std::move(combining),
                                          std::move(background));
    }
    return arrange::assign_copies(std::move(decls), std::move(combining),
                                  std::move(background));
  } catch (const Error& e) {
    throw ConfigError(e.what(), "arrangement." + spec.name);
  }
}

opcore::HermitianOperator operator_from_expression(const ExperimentConfig& cfg,
                                                   const std::string& expr) {
  auto alg = std::make_shared<symalg::Algebra>();
  std::map<symalg::SymbolId, std::string> key_of;
  for (const auto& [key, op] : cfg.operators) {
    key_of.emplace(alg->declare_observable(key), key);
  }
  const symalg::NCPoly poly = symalg::parse_operator(expr, alg);
  // Bind only the operators the expression mentions, so configs may mix
  // operator dimensions across unrelated expressions.
  symalg::OperatorBindings bindings;
  for (const auto& [word, coef] : poly.terms()) {
    for (const symalg::SymbolId s : word) {
      bindings.emplace(s, cfg.operators.at(key_of.at(s)));
    }
  }
  if (bindings.empty()) {
    throw ConfigError("expression '" + expr + "' references no operators",
                      "expression");
  }
  const opcore::ComplexMatrix m =
      symalg::nc_to_matrix(poly, bindings, {{alg->hbar(), cfg.hbar}});
  return opcore::HermitianOperator::FromMatrix(m, 1e-9);
}

const ArrangementSpec& find_arrangement(const ExperimentConfig& cfg,
                                        const std::string& name) {
  if (cfg.arrangements.empty()) {
    throw ConfigError("config declares no arrangements", "arrangement");
  }
  if (name.empty()) return cfg.arrangements.front();
  for (const auto& spec : cfg.arrangements) {
    if (spec.name == name) return spec;
  }
  throw ConfigError("no arrangement named '" + name + "'", "arrangement");
}

}  // namespace avcp::config
