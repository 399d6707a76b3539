#include "avcp/checks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "avcp/dynamics.hpp"
#include "avcp/lineop_oracle.hpp"
#include "avcp/spin.hpp"
#include "avcp/version.hpp"

namespace avcp::checks {

namespace {

using nlohmann::json;
using opcore::HermitianOperator;
using opcore::StateVector;
using report::CheckRecord;
using report::McRecord;

struct CheckContext {
  const config::ExperimentConfig& cfg;
  const json& check;
  std::string path;
  std::string name;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  long default_runs = 0;
  std::optional<long> runs_override;
  std::optional<double> tol_override;
  std::vector<McRecord>* mc_sink = nullptr;

  // Command-line --runs beats the check's own "runs" key, which beats the
  // config-level default.
  long runs() const {
    if (runs_override) return *runs_override;
    if (check.contains("runs")) return check.at("runs").get<long>();
    return default_runs;
  }

  std::uint64_t stream(std::uint64_t offset) const {
    return 10000 + 1000 * static_cast<std::uint64_t>(index) + offset;
  }

  double tol(double fallback) const {
    if (tol_override) return *tol_override;
    if (check.contains("tol")) return check.at("tol").get<double>();
    return fallback;
  }

  template <typename T>
  T get_or(const std::string& key, const T& fallback) const {
    if (!check.contains(key)) return fallback;
    return check.at(key).get<T>();
  }

  std::string expect(const std::string& fallback) const {
    return get_or<std::string>("expect", fallback);
  }
};

StateVector state_from_spec(const CheckContext& ctx, Eigen::Index dim,
                            std::uint64_t stream_offset) {
  if (!ctx.check.contains("state")) {
    RngStream rng(ctx.seed, ctx.stream(stream_offset));
    return opcore::haar_state(dim, rng);
  }
  const json& spec = ctx.check.at("state");
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (s == "haar") {
      RngStream rng(ctx.seed, ctx.stream(stream_offset));
      return opcore::haar_state(dim, rng);
    }
    if (s.rfind("basis:", 0) == 0) {
      const long k = std::stol(s.substr(6));
      if (k < 0 || k >= dim) {
        throw ConfigError("basis index out of range", ctx.path + ".state");
      }
      return StateVector::BasisState(dim, k);
    }
    throw ConfigError("state must be \"haar\", \"basis:k\" or an array",
                      ctx.path + ".state");
  }
  if (!spec.is_array() || static_cast<Eigen::Index>(spec.size()) != dim) {
    throw ConfigError("inline state must be an array of [re,im] of length " +
                          std::to_string(dim),
                      ctx.path + ".state");
  }
  opcore::ComplexVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const json& cell = spec[static_cast<std::size_t>(k)];
    if (!cell.is_array() || cell.size() != 2) {
      throw ConfigError("state entries must be [re, im] pairs",
                        ctx.path + ".state");
    }
    v(k) = std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
  }
  return StateVector::Normalized(v);
}

// Haar samples plus requested eigenbases (deterministic coverage of the
// "for all states" quantifier).
std::vector<StateVector> states_for_check(const CheckContext& ctx,
                                          Eigen::Index dim) {
  std::vector<StateVector> states;
  const long n_haar = ctx.get_or<long>("haar_states", 100);
  RngStream rng(ctx.seed, ctx.stream(7));
  for (long s = 0; s < n_haar; ++s) {
    states.push_back(opcore::haar_state(dim, rng));
  }
  if (ctx.check.contains("include_eigenbases")) {
    for (const auto& key : ctx.check.at("include_eigenbases")) {
      const auto it = ctx.cfg.operators.find(key.get<std::string>());
      if (it == ctx.cfg.operators.end()) {
        throw ConfigError("include_eigenbases references unknown operator",
                          ctx.path + ".include_eigenbases");
      }
      const opcore::Spectrum s = opcore::spectrum(it->second);
      for (Eigen::Index k = 0; k < s.eigenvectors.cols(); ++k) {
        states.push_back(StateVector::Normalized(s.eigenvectors.col(k)));
      }
    }
  }
  if (ctx.get_or<bool>("include_basis", false)) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      states.push_back(StateVector::BasisState(dim, k));
    }
  }
  return states;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// ---- check handlers ----

CheckRecord check_avcp_operator(const CheckContext& ctx) {
  CheckRecord rec;
  const auto& spec = config::find_arrangement(
      ctx.cfg, ctx.get_or<std::string>("arrangement", ""));
  const arrange::Arrangement arr = config::build_arrangement(ctx.cfg, spec);
  if (!ctx.check.contains("candidate")) {
    throw ConfigError("avcp_operator needs a 'candidate' expression",
                      ctx.path + ".candidate");
  }
  const HermitianOperator candidate = config::operator_from_expression(
      ctx.cfg, ctx.check.at("candidate").get<std::string>());
  const double tol = ctx.tol(1e-10);
  const auto states = states_for_check(ctx, arr.dim());
  const arrange::AvcpCheckReport rep =
      arrange::avcp_check(arr, candidate, states, tol);

  const bool expect_pass = ctx.expect("pass") == "pass";
  rec.lhs = rep.max_abs_deviation;
  rec.rhs = 0.0;
  rec.abs_err = rep.max_abs_deviation;
  rec.tol = tol;
  rec.pass = rep.pass == expect_pass;
  rec.notes = std::string("average-value condition ") +
              (rep.pass ? "holds" : "fails") + " (max deviation " +
              fmt(rep.max_abs_deviation) + " over " +
              std::to_string(states.size()) + " states); expected to " +
              (expect_pass ? "hold" : "fail");
  return rec;
}

CheckRecord check_solve_operator(const CheckContext& ctx) {
  CheckRecord rec;
  const auto& spec = config::find_arrangement(
      ctx.cfg, ctx.get_or<std::string>("arrangement", ""));
  const arrange::Arrangement arr = config::build_arrangement(ctx.cfg, spec);
  const Eigen::Index dim = arr.dim();
  const int n_states = static_cast<int>(
      ctx.get_or<long>("n_states", 3 * static_cast<long>(dim * dim)));
  const double residual_tol = ctx.tol(1e-8);
  const arrange::SolveResult result = arrange::solve_representing_operator(
      arr, dim, n_states, residual_tol, ctx.seed + ctx.index);

  const bool expect_feasible = ctx.expect("feasible") == "feasible";
  rec.lhs = result.max_residual;
  rec.tol = residual_tol;
  bool pass = result.feasible == expect_feasible;
  std::string notes = std::string("solver reports ") +
                      (result.feasible ? "feasible" : "infeasible") +
                      " (validation residual " + fmt(result.max_residual) +
                      ")";
  if (result.feasible && ctx.check.contains("match")) {
    const HermitianOperator target = config::operator_from_expression(
        ctx.cfg, ctx.check.at("match").get<std::string>());
    const double diff = opcore::HermitianOperator::FromHermitianParts(
                            result.op->matrix() - target.matrix())
                            .operator_norm();
    const double match_tol = ctx.get_or<double>("match_tol", 1e-8);
    pass = pass && diff <= match_tol;
    rec.rhs = diff;
    notes += "; operator-norm distance to '" +
             ctx.check.at("match").get<std::string>() + "' = " + fmt(diff);
  }
  rec.pass = pass;
  rec.notes = notes;
  return rec;
}

CheckRecord check_mc_vs_exact(const CheckContext& ctx) {
  CheckRecord rec;
  const auto& spec = config::find_arrangement(
      ctx.cfg, ctx.get_or<std::string>("arrangement", ""));
  const arrange::Arrangement arr = config::build_arrangement(ctx.cfg, spec);
  const StateVector v0 = state_from_spec(ctx, arr.dim(), 3);
  const long runs = ctx.runs();
  const double n_sigma = ctx.get_or<double>("n_sigma", 5.0);

  const double exact = arrange::exact_expected_output(arr, v0);
  const arrange::McResult mc = arrange::mc_expected_output(
      arr, v0, runs, ctx.seed + 17 * (ctx.index + 1));

  const double dev = std::abs(mc.mean - exact);
  const double limit =
      mc.stderr_of_mean > 0.0 ? n_sigma * mc.stderr_of_mean : 1e-12;
  rec.lhs = mc.mean;
  rec.rhs = exact;
  rec.abs_err = dev;
  rec.tol = limit;
  rec.pass = dev <= limit;
  rec.notes = fmt(static_cast<double>(runs)) + " runs, stderr " +
              fmt(mc.stderr_of_mean);
  if (ctx.mc_sink) {
    ctx.mc_sink->push_back(McRecord{ctx.name, runs, mc.mean,
                                    mc.stderr_of_mean, mc.support});
  }
  return rec;
}

CheckRecord check_mc_support(const CheckContext& ctx) {
  CheckRecord rec;
  const auto& spec = config::find_arrangement(
      ctx.cfg, ctx.get_or<std::string>("arrangement", ""));
  const arrange::Arrangement arr = config::build_arrangement(ctx.cfg, spec);
  const StateVector v0 = state_from_spec(ctx, arr.dim(), 3);
  const long runs = ctx.runs();
  if (!ctx.check.contains("expected") || !ctx.check.at("expected").is_array()) {
    throw ConfigError("mc_support needs an 'expected' value array",
                      ctx.path + ".expected");
  }
  std::vector<double> expected;
  for (const auto& v : ctx.check.at("expected")) {
    expected.push_back(v.get<double>());
  }
  std::sort(expected.begin(), expected.end());
  const double tol = ctx.tol(1e-9);

  const arrange::McResult mc = arrange::mc_expected_output(
      arr, v0, runs, ctx.seed + 17 * (ctx.index + 1), 4096, tol);

  bool match = mc.support.size() == expected.size();
  double worst = 0.0;
  if (match) {
    for (std::size_t k = 0; k < expected.size(); ++k) {
      worst = std::max(worst, std::abs(mc.support[k] - expected[k]));
    }
    match = worst <= tol;
  }
  rec.lhs = static_cast<double>(mc.support.size());
  rec.rhs = static_cast<double>(expected.size());
  rec.abs_err = worst;
  rec.tol = tol;
  rec.pass = match;
  std::string support_str;
  for (double v : mc.support) {
    if (!support_str.empty()) support_str += ", ";
    support_str += fmt(v);
  }
  rec.notes = "observed support {" + support_str + "}";
  if (ctx.mc_sink) {
    ctx.mc_sink->push_back(McRecord{ctx.name, runs, mc.mean,
                                    mc.stderr_of_mean, mc.support});
  }
  return rec;
}

CheckRecord check_eigenvalues(const CheckContext& ctx) {
  CheckRecord rec;
  if (!ctx.check.contains("operator")) {
    throw ConfigError("eigenvalues needs an 'operator' expression",
                      ctx.path + ".operator");
  }
  const HermitianOperator op = config::operator_from_expression(
      ctx.cfg, ctx.check.at("operator").get<std::string>());
  const opcore::Spectrum s = opcore::spectrum(op);
  std::vector<double> expected;
  for (const auto& v : ctx.check.at("expected")) {
    expected.push_back(v.get<double>());
  }
  std::sort(expected.begin(), expected.end());
  const double tol = ctx.tol(1e-12);

  double worst = std::abs(static_cast<double>(s.eigenvalues.size()) -
                          static_cast<double>(expected.size()));
  if (static_cast<std::size_t>(s.eigenvalues.size()) == expected.size()) {
    worst = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
      worst = std::max(
          worst,
          std::abs(s.eigenvalues(static_cast<Eigen::Index>(k)) - expected[k]));
    }
  }
  std::string eig_str;
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    if (!eig_str.empty()) eig_str += ", ";
    eig_str += fmt(s.eigenvalues(k));
  }
  rec.abs_err = worst;
  rec.tol = tol;
  rec.pass = worst <= tol;
  rec.notes = "eigenvalues {" + eig_str + "}";
  return rec;
}

CheckRecord check_copies(const CheckContext& ctx) {
  CheckRecord rec;
  const auto& spec = config::find_arrangement(
      ctx.cfg, ctx.get_or<std::string>("arrangement", ""));
  const arrange::Arrangement arr = config::build_arrangement(ctx.cfg, spec);
  const long expected = ctx.get_or<long>("expected", 1);
  rec.lhs = static_cast<double>(arr.copy_count());
  rec.rhs = static_cast<double>(expected);
  rec.abs_err = std::abs(rec.lhs.value() - rec.rhs.value());
  rec.tol = 0.0;
  rec.pass = arr.copy_count() == expected;
  rec.notes = "assignment uses " + std::to_string(arr.copy_count()) +
              " copies of the system";
  return rec;
}

CheckRecord check_simple(const CheckContext& ctx) {
  CheckRecord rec;
  const auto& spec = config::find_arrangement(
      ctx.cfg, ctx.get_or<std::string>("arrangement", ""));
  const symalg::AlgebraPtr alg = config::label_algebra(ctx.cfg, spec);
  const std::string expr =
      ctx.get_or<std::string>("expression", spec.combining);
  const symalg::ClassicalPoly poly = symalg::parse_classical(expr, alg);
  const symalg::SimplicityReport rep = symalg::is_simple(poly);

  const bool expect_simple = ctx.expect("simple") == "simple";
  rec.pass = rep.simple == expect_simple;
  std::string offenders;
  for (const auto& m : rep.offenders) {
    if (!offenders.empty()) offenders += ", ";
    offenders += m.str(*alg);
  }
  rec.notes = "'" + expr + "' is " + (rep.simple ? "simple" : "not simple");
  if (!rep.simple) rec.notes += "; offenders: " + offenders;
  return rec;
}

CheckRecord check_exact_value(const CheckContext& ctx) {
  CheckRecord rec;
  const auto& spec = config::find_arrangement(
      ctx.cfg, ctx.get_or<std::string>("arrangement", ""));
  const arrange::Arrangement arr = config::build_arrangement(ctx.cfg, spec);
  const StateVector v0 = state_from_spec(ctx, arr.dim(), 3);
  const double expected = ctx.check.at("expected").get<double>();
  const double tol = ctx.tol(1e-10);
  const double value = arrange::exact_expected_output(arr, v0);
  rec.lhs = value;
  rec.rhs = expected;
  rec.abs_err = std::abs(value - expected);
  rec.tol = tol;
  rec.pass = rec.abs_err.value() <= tol;
  return rec;
}

// Demonstrates that the symmetrized product rule assigns two inequivalent
// operators to one measurement depending on how the product is grouped, and
// that the gap is the double commutator -(1/4)[A,[A,B]].
CheckRecord check_hermitization_ambiguity(const CheckContext& ctx) {
  CheckRecord rec;
  auto alg = std::make_shared<symalg::Algebra>();
  const auto a = alg->declare_observable("a");
  const auto b = alg->declare_observable("b");
  alg->set_noncommuting(a, b);

  const symalg::ClassicalPoly fa = symalg::parse_classical("a", alg);
  const symalg::ClassicalPoly fa2 = symalg::parse_classical("a^2", alg);
  const symalg::ClassicalPoly fb = symalg::parse_classical("b", alg);

  // Grouping 1: treat a^2 b as a * (ab).
  const symalg::UnsoundNCPoly ab = symalg::hermitize_unsound(fa, fb, {}, true);
  const symalg::UnsoundNCPoly grouping1 =
      symalg::hermitize_unsound(symalg::quantize(fa), ab.poly, true);
  // Grouping 2: treat a^2 b as (a^2) * b.
  const symalg::UnsoundNCPoly grouping2 =
      symalg::hermitize_unsound(fa2, fb, {}, true);

  const symalg::NCPoly diff = grouping1.poly - grouping2.poly;
  const symalg::NCPoly na = symalg::NCPoly::symbol(alg, a);
  const symalg::NCPoly nb = symalg::NCPoly::symbol(alg, b);
  auto free_comm = [](const symalg::NCPoly& p, const symalg::NCPoly& q) {
    return p * q - q * p;  // free algebra, no rewriting
  };
  const symalg::NCPoly reference =
      free_comm(na, free_comm(na, nb)).scaled(RationalComplex::rational(-1, 4));
  const bool symbolic_ok = diff == reference;

  // Numeric instance: the two groupings differ on sigma_x, sigma_y.
  const HermitianOperator sx = config::builtin_operator("pauli_x", 1.0);
  const HermitianOperator sy = config::builtin_operator("pauli_y", 1.0);
  const symalg::OperatorBindings bindings{{a, sx}, {b, sy}};
  const double gap =
      symalg::nc_to_matrix(diff, bindings).norm();

  rec.lhs = gap;
  rec.rhs = 0.0;
  rec.tol = ctx.tol(1e-12);
  rec.pass = symbolic_ok && gap > 1e-6;
  rec.notes = std::string("grouping difference ") +
              (symbolic_ok ? "matches" : "DOES NOT match") +
              " -(1/4)[A,[A,B]] exactly; gap norm " + fmt(gap) +
              " for (pauli_x, pauli_y); unsound rule demonstration";
  return rec;
}

CheckRecord check_rotation_so3(const CheckContext& ctx) {
  CheckRecord rec;
  std::vector<double> eps{1e-2, 1e-3, 1e-4};
  if (ctx.check.contains("eps")) {
    eps.clear();
    for (const auto& v : ctx.check.at("eps")) eps.push_back(v.get<double>());
  }
  const double slope_tol = ctx.get_or<double>("slope_tol", 0.2);

  bool bounded = true;
  std::vector<double> residuals;
  for (double e : eps) {
    const double r = spin::so3_commutator_residual(e);
    residuals.push_back(r);
    if (r > 10.0 * e * e * e) bounded = false;
  }
  // Least-squares slope on log-log.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double x = std::log(eps[k]);
    const double y = std::log(residuals[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(eps.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  rec.lhs = slope;
  rec.rhs = 3.0;
  rec.abs_err = std::abs(slope - 3.0);
  rec.tol = slope_tol;
  rec.pass = bounded && rec.abs_err.value() <= slope_tol;
  rec.notes = "third-order rotation-commutator scaling; residuals";
  for (std::size_t k = 0; k < eps.size(); ++k) {
    rec.notes += " " + fmt(residuals[k]) + "@" + fmt(eps[k]);
  }
  return rec;
}

CheckRecord check_spin_identities(const CheckContext& ctx) {
  CheckRecord rec;
  std::vector<long> dims{1, 2, 3, 4, 5, 6, 7, 8};
  if (ctx.check.contains("dims")) {
    dims.clear();
    for (const auto& v : ctx.check.at("dims")) dims.push_back(v.get<long>());
  }
  const double tol = ctx.tol(1e-11);
  double worst = 0.0;
  for (long n : dims) {
    const spin::AngularMomentumTriple triple =
        spin::angular_momentum(n, ctx.cfg.hbar);
    const spin::BracketDefectReport rep = spin::bracket_defect_check(triple);
    worst = std::max(worst, rep.max_identity_residual());
    if (rep.first_order_residual > rep.first_order_bound + 1e-15) {
      worst = std::max(worst, rep.first_order_residual);
    }
    RngStream rng(ctx.seed, ctx.stream(40 + static_cast<std::uint64_t>(n)));
    for (int s = 0; s < 5; ++s) {
      const StateVector v = opcore::haar_state(n, rng);
      for (double theta : {0.1, 1.0, 3.14159265358979323846}) {
        worst = std::max(worst, spin::proj_rotation_check(v, theta, triple));
      }
    }
  }
  rec.lhs = worst;
  rec.rhs = 0.0;
  rec.abs_err = worst;
  rec.tol = tol;
  rec.pass = worst <= tol;
  rec.notes = "commutation, closure, generator, projection identities over N";
  return rec;
}

CheckRecord check_larmor(const CheckContext& ctx) {
  CheckRecord rec;
  const long dim = ctx.get_or<long>("dim", 2);
  const double tol = ctx.tol(1e-10);
  const double hbar = ctx.cfg.hbar;
  const spin::AngularMomentumTriple triple = spin::angular_momentum(dim, hbar);

  // Field along +z; angular rate |q B / 2m| = 1 with these parameters.
  const double q = 1.0, m = 0.5, b = 1.0;
  const double period = 2.0 * 3.14159265358979323846;
  StateVector v0 = StateVector::BasisState(dim, 0);
  if (dim >= 2) {
    opcore::ComplexVector v = opcore::ComplexVector::Zero(dim);
    v(0) = 1.0;
    v(1) = 1.0;
    v0 = StateVector::Normalized(v);
  }

  std::vector<double> grid;
  const int steps = 64;
  for (int k = 0; k <= steps; ++k) {
    grid.push_back(period * static_cast<double>(k) /
                   static_cast<double>(steps));
  }
  const std::vector<spin::Vector3> traj =
      spin::precess(v0, spin::Vector3(0, 0, b), q, m, grid, triple);

  // Numeric trajectories are exported as CSV for external plotting.
  if (ctx.check.contains("trajectory_csv")) {
    const std::string path = ctx.check.at("trajectory_csv").get<std::string>();
    std::ofstream csv(path);
    if (!csv) {
      throw ConfigError("cannot write trajectory to '" + path + "'",
                        ctx.path + ".trajectory_csv");
    }
    csv << "t,lx,ly,lz\n";
    csv.precision(17);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      csv << grid[k] << ',' << traj[k].x() << ',' << traj[k].y() << ','
          << traj[k].z() << '\n';
    }
  }

  const double closure = (traj.back() - traj.front()).norm();
  // The transverse radius must stay constant along the trajectory.
  double radius_drift = 0.0;
  const double r0 = std::hypot(traj.front().x(), traj.front().y());
  for (const auto& p : traj) {
    radius_drift =
        std::max(radius_drift, std::abs(std::hypot(p.x(), p.y()) - r0));
  }
  rec.lhs = closure;
  rec.rhs = 0.0;
  rec.abs_err = std::max(closure, radius_drift);
  rec.tol = tol;
  rec.pass = rec.abs_err.value() <= tol;
  rec.notes = "one-period closure " + fmt(closure) + ", radius drift " +
              fmt(radius_drift) + ", transverse radius " + fmt(r0);
  return rec;
}

CheckRecord check_poisson_bracket(const CheckContext& ctx) {
  CheckRecord rec;
  auto alg = std::make_shared<symalg::Algebra>();
  std::vector<std::pair<symalg::SymbolId, symalg::SymbolId>> pairs;
  if (ctx.check.contains("pairs")) {
    for (const auto& pr : ctx.check.at("pairs")) {
      pairs.push_back(alg->declare_canonical_pair(pr[0].get<std::string>(),
                                                  pr[1].get<std::string>()));
    }
  } else {
    pairs.push_back(alg->declare_canonical_pair("x", "p"));
  }
  if (ctx.check.contains("scalars")) {
    for (const auto& s : ctx.check.at("scalars")) {
      alg->declare_scalar(s.get<std::string>());
    }
  }
  const symalg::ClassicalPoly f =
      symalg::parse_classical(ctx.check.at("f").get<std::string>(), alg);
  const symalg::ClassicalPoly h =
      symalg::parse_classical(ctx.check.at("h").get<std::string>(), alg);
  const symalg::ClassicalPoly expected = symalg::parse_classical(
      ctx.check.at("expected").get<std::string>(), alg);
  const symalg::ClassicalPoly bracket = symalg::poisson(f, h, pairs);
  rec.pass = bracket == expected;
  rec.notes = "{" + ctx.check.at("f").get<std::string>() + ", " +
              ctx.check.at("h").get<std::string>() + "} = " + bracket.str();
  return rec;
}

// Bracket-vs-commutator defect for the non-simple pair F = x^3, H = g p^3:
// the commutator and i*hbar times the symmetrized bracket operator differ by
// a pure scalar. The constant is computed here and only logged against the
// 2 g hbar^3 figure quoted for it elsewhere, not asserted.
CheckRecord check_poisson_defect(const CheckContext& ctx) {
  CheckRecord rec;
  auto alg = std::make_shared<symalg::Algebra>();
  alg->declare_canonical_pair("x", "p");
  const auto g = alg->declare_scalar("g");

  const symalg::NCPoly fx = symalg::parse_operator("x^3", alg);
  const symalg::NCPoly hp = symalg::parse_operator("g*p^3", alg);
  const symalg::NCPoly comm = symalg::nc_commutator(fx, hp);

  // {F,H} = 9 g x^2 p^2, symmetrized with grouping (9 g x^2, p^2).
  const symalg::ClassicalPoly f1 = symalg::parse_classical("9*g*x^2", alg);
  const symalg::ClassicalPoly f2 = symalg::parse_classical("p^2", alg);
  const symalg::UnsoundNCPoly herm =
      symalg::hermitize_unsound(f1, f2, {}, true);
  const symalg::ClassicalPoly ihbar =
      symalg::parse_classical("i*hbar", alg);
  const symalg::NCPoly rhs = symalg::nc_normal_form(herm.poly.scaled(ihbar));

  const symalg::NCPoly defect = comm - rhs;
  const bool scalar = defect.is_scalar_multiple_of_identity();
  std::string constant = "0";
  double magnitude = 0.0;
  if (!defect.is_zero()) {
    const symalg::ClassicalPoly& c = defect.terms().begin()->second;
    constant = c.str();
    magnitude = std::abs(
        c.evaluate({{g, 1.0}, {alg->hbar(), ctx.cfg.hbar}}));
  }
  const double reference = 2.0 * std::pow(ctx.cfg.hbar, 3);

  rec.lhs = magnitude;
  rec.rhs = reference;
  rec.abs_err = std::abs(magnitude - reference);
  rec.pass = scalar && magnitude > 0.0;
  rec.notes = "defect = " + constant + " (identity term); |defect| at g=1 is " +
              fmt(magnitude) + " vs quoted 2*g*hbar^3 = " + fmt(reference) +
              "; discrepancy logged, not asserted";
  return rec;
}

using Handler = CheckRecord (*)(const CheckContext&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"avcp_operator", check_avcp_operator},
      {"solve_operator", check_solve_operator},
      {"mc_vs_exact", check_mc_vs_exact},
      {"mc_support", check_mc_support},
      {"eigenvalues", check_eigenvalues},
      {"copies", check_copies},
      {"simple", check_simple},
      {"exact_value", check_exact_value},
      {"hermitization_ambiguity", check_hermitization_ambiguity},
      {"rotation_so3", check_rotation_so3},
      {"spin_identities", check_spin_identities},
      {"larmor", check_larmor},
      {"poisson_bracket", check_poisson_bracket},
      {"poisson_defect", check_poisson_defect},
  };
  return table;
}

}  // namespace

report::Report run_experiment_checks(const config::ExperimentConfig& cfg,
                                     const RunOverrides& overrides) {
  report::Report rep;
  rep.name = cfg.name;
  rep.config_echo = cfg.raw;
  rep.seed = overrides.seed.value_or(cfg.seed);
  rep.version = kVersion;
  rep.timestamp = report::iso_timestamp_utc();

  for (std::size_t idx = 0; idx < cfg.checks.size(); ++idx) {
    const json& check = cfg.checks[idx];
    const std::string kind = check.at("kind").get<std::string>();
    const std::string path = "checks[" + std::to_string(idx) + "]";
    const auto it = handlers().find(kind);
    if (it == handlers().end()) {
      throw ConfigError("unknown check kind '" + kind + "'", path + ".kind");
    }
    std::string name = kind + "#" + std::to_string(idx + 1);
    if (check.contains("name") && check.at("name").is_string()) {
      name = check.at("name").get<std::string>();
    }
    CheckContext ctx{cfg,
                     check,
                     path,
                     name,
                     idx,
                     overrides.seed.value_or(cfg.seed),
                     cfg.runs,
                     overrides.runs,
                     overrides.tol,
                     &rep.mc};
    CheckRecord rec;
    try {
      rec = it->second(ctx);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad check parameters: ") + e.what(),
                        path);
    }
    rec.kind = kind;
    rec.name = name;
    rep.checks.push_back(std::move(rec));
  }
  return rep;
}

}  // namespace avcp::checks
