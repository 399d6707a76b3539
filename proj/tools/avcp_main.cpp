#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "avcp/checks.hpp"
#include "avcp/config.hpp"
#include "avcp/verify.hpp"
#include "avcp/version.hpp"

namespace {

int write_report(const avcp::report::Report& rep, const std::string& out_path,
                 const std::string& format) {
  std::string payload;
  if (format == "json") {
    payload = rep.to_json().dump(2) + "\n";
  } else if (format == "csv") {
    payload = rep.to_csv();
  } else {
    std::cerr << "unknown report format '" << format << "'\n";
    return 1;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << payload;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write report to '" << out_path << "'\n";
      return 1;
    }
    out << payload;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"avcp: quantum models of classical measurement arrangements"};
  app.set_version_flag("--version", std::string(avcp::kVersion));
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  long runs_flag = 0;
  double tol_flag = 0.0;
  bool tol_set = false;

  CLI::App* run = app.add_subcommand(
      "run", "run an experiment config and write its report");
  run->add_option("config", config_path, "TOML experiment config")
      ->required();
  run->add_option("--out", out_path, "report path (default: stdout)");
  run->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--seed", seed_flag, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--runs", runs_flag, "override the MC run count")
      ->check(CLI::PositiveNumber);
  run->add_option("--tol", tol_flag, "override every check tolerance")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { tol_set = true; });

  // verify
  std::string filter;
  std::uint64_t verify_seed = 20240101;
  CLI::App* verify = app.add_subcommand(
      "verify", "run every module invariant suite");
  verify->add_option("--seed", verify_seed, "master seed (default 20240101)");
  verify->add_option("--filter", filter, "substring filter on module names");

  // builtins
  CLI::App* builtins = app.add_subcommand(
      "builtins", "list builtin operators, checks and config keys");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const avcp::config::ExperimentConfig cfg =
          avcp::config::load_config_file(config_path);
      avcp::checks::RunOverrides overrides;
      if (seed_set) overrides.seed = seed_flag;
      if (runs_flag > 0) overrides.runs = runs_flag;
      if (tol_set) overrides.tol = tol_flag;
      const avcp::report::Report rep =
          avcp::checks::run_experiment_checks(cfg, overrides);
      const int io = write_report(rep, out_path, format);
      if (io != 0) return io;
      return rep.all_pass() ? 0 : 2;
    }
    if (verify->parsed()) {
      const auto records = avcp::verify::run_suites(verify_seed, filter);
      std::cout << avcp::verify::summary_table(records);
      return avcp::verify::count_failures(records) == 0 ? 0 : 2;
    }
    if (builtins->parsed()) {
      std::cout << avcp::config::builtin_catalog();
      return 0;
    }
  } catch (const avcp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
