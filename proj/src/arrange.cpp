#include "avcp/arrange.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "avcp/dynamics.hpp"

namespace avcp::arrange {

namespace {

double commutator_scale(const HermitianOperator& a, const HermitianOperator& b) {
  return std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
}

bool commute_within(const HermitianOperator& a, const HermitianOperator& b,
                    double tol) {
  return opcore::commutator(a, b).norm() <= tol * commutator_scale(a, b);
}

}  // namespace

Eigen::Index Arrangement::dim() const {
  return measurements_.empty() ? 0 : measurements_.front().op.dim();
}

symalg::SymbolId Arrangement::label_symbol(const std::string& label) const {
  return combining_.algebra()->require(label);
}

Arrangement Arrangement::Create(std::vector<MeasurementDecl> measurements,
                                std::vector<int> copy_assignment,
                                symalg::ClassicalPoly combining,
                                std::optional<Background> background,
                                double commute_tol) {
  if (measurements.empty()) {
    throw Error("arrangement needs at least one measurement");
  }
  if (copy_assignment.size() != measurements.size()) {
    throw Error("copy assignment size does not match measurement count");
  }
  const Eigen::Index dim = measurements.front().op.dim();
  for (const auto& m : measurements) {
    if (m.op.dim() != dim) {
      throw DimensionMismatchError("measurement operators have mixed dims");
    }
  }
  if (background && background->hamiltonian.dim() != dim) {
    throw DimensionMismatchError("background Hamiltonian dimension mismatch");
  }

  // Copy rule: operators sharing a copy must commute.
  for (std::size_t a = 0; a < measurements.size(); ++a) {
    for (std::size_t b = a + 1; b < measurements.size(); ++b) {
      if (copy_assignment[a] != copy_assignment[b]) continue;
      if (!commute_within(measurements[a].op, measurements[b].op,
                          commute_tol)) {
        throw Error("copy-rule violation: noncommuting measurements '" +
                    measurements[a].label + "' and '" + measurements[b].label +
                    "' assigned to the same copy");
      }
    }
  }

  // Labels must be unique and every observable in the combining polynomial
  // must be a declared label.
  const symalg::AlgebraPtr alg = combining.algebra();
  if (!alg) throw Error("combining polynomial carries no algebra");
  std::vector<symalg::SymbolId> label_ids;
  for (const auto& m : measurements) {
    const auto id = alg->lookup(m.label);
    if (!id) {
      throw UnknownLabelError("measurement label '" + m.label +
                              "' is not a symbol of the combining algebra");
    }
    if (std::find(label_ids.begin(), label_ids.end(), *id) != label_ids.end()) {
      throw Error("duplicate measurement label '" + m.label + "'");
    }
    label_ids.push_back(*id);
  }
  for (const auto& [mono, coef] : combining.terms()) {
    for (const auto& [sym, e] : mono.factors()) {
      if (alg->kind(sym) == symalg::SymbolKind::Scalar) continue;
      if (std::find(label_ids.begin(), label_ids.end(), sym) ==
          label_ids.end()) {
        throw UnknownLabelError("combining function references '" +
                                alg->name(sym) +
                                "', which is not a measurement label");
      }
    }
  }

  // Normalize copy indices to 0..n_copies-1 preserving declaration order.
  std::vector<int> order;
  for (int c : copy_assignment) {
    if (std::find(order.begin(), order.end(), c) == order.end()) {
      order.push_back(c);
    }
  }
  for (int& c : copy_assignment) {
    c = static_cast<int>(std::find(order.begin(), order.end(), c) -
                         order.begin());
  }

  Arrangement arr;
  arr.measurements_ = std::move(measurements);
  arr.copy_assignment_ = std::move(copy_assignment);
  arr.copy_count_ = static_cast<int>(order.size());
  arr.combining_ = std::move(combining);
  arr.background_ = std::move(background);
  return arr;
}

Arrangement assign_copies(std::vector<MeasurementDecl> measurements,
                          symalg::ClassicalPoly combining,
                          std::optional<Background> background,
                          double commute_tol) {
  // Greedy coloring in declaration order: each measurement joins the first
  // copy whose residents all commute with it.
  std::vector<int> assignment(measurements.size(), -1);
  int copies = 0;
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    int chosen = -1;
    for (int c = 0; c < copies && chosen < 0; ++c) {
      bool ok = true;
      for (std::size_t j = 0; j < i; ++j) {
        if (assignment[j] == c &&
            !commute_within(measurements[i].op, measurements[j].op,
                            commute_tol)) {
          ok = false;
          break;
        }
      }
      if (ok) chosen = c;
    }
    if (chosen < 0) chosen = copies++;
    assignment[i] = chosen;
  }
  return Arrangement::Create(std::move(measurements), std::move(assignment),
                             std::move(combining), std::move(background),
                             commute_tol);
}

namespace {

struct CopyLeaf {
  double prob = 1.0;
  // (measurement index, sampled value) for measurements on this copy.
  std::vector<std::pair<std::size_t, double>> values;
};

// Joint outcomes of the sequential measurements assigned to one copy,
// starting from the state already evolved to t1.
std::vector<CopyLeaf> copy_outcomes(const Arrangement& arr, int copy,
                                    const StateVector& v_t1) {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < arr.measurements().size(); ++i) {
    if (arr.copy_assignment()[i] == copy) indices.push_back(i);
  }

  std::vector<CopyLeaf> leaves;
  struct Frame {
    StateVector state;
    double prob;
    std::size_t depth;
    std::vector<std::pair<std::size_t, double>> values;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{v_t1, 1.0, 0, {}});
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    if (frame.depth == indices.size()) {
      leaves.push_back(CopyLeaf{frame.prob, std::move(frame.values)});
      continue;
    }
    const std::size_t mi = indices[frame.depth];
    const opcore::OutcomeDistribution dist =
        opcore::born_distribution(arr.measurements()[mi].op, frame.state);
    for (const auto& outcome : dist.outcomes) {
      Frame next{outcome.collapsed_state, frame.prob * outcome.probability,
                 frame.depth + 1, frame.values};
      next.values.emplace_back(mi, outcome.value);
      stack.push_back(std::move(next));
    }
  }
  return leaves;
}

StateVector state_at_t1(const Arrangement& arr, const StateVector& v0) {
  if (!arr.background()) return v0;
  const auto& bg = *arr.background();
  const opcore::ComplexMatrix u =
      dynamics::propagator(bg.hamiltonian, bg.t1 - bg.t0, bg.hbar);
  return dynamics::evolve(u, v0);
}

// The combining polynomial compiled against measurement indices, so the hot
// Monte Carlo loop evaluates it without symbol lookups.
struct CompiledTerm {
  std::complex<double> coef;
  std::vector<std::pair<std::size_t, int>> powers;  // (measurement, exponent)
};

// All per-copy outcome tables plus the compiled combining function.
struct OutcomeTables {
  std::vector<std::vector<CopyLeaf>> per_copy;
  std::vector<CompiledTerm> combining;
};

std::vector<CompiledTerm> compile_combining(const Arrangement& arr) {
  const symalg::AlgebraPtr& alg = arr.combining().algebra();
  std::map<symalg::SymbolId, std::size_t> index_of;
  for (std::size_t i = 0; i < arr.measurements().size(); ++i) {
    index_of.emplace(arr.label_symbol(arr.measurements()[i].label), i);
  }
  std::vector<CompiledTerm> out;
  for (const auto& [mono, coef] : arr.combining().terms()) {
    CompiledTerm term;
    term.coef = coef.to_complex();
    for (const auto& [sym, exp] : mono.factors()) {
      if (auto it = index_of.find(sym); it != index_of.end()) {
        term.powers.emplace_back(it->second, exp);
        continue;
      }
      if (sym == alg->hbar()) continue;  // symbolic hbar evaluates to 1
      throw UnknownSymbolError("combining function uses unbound scalar '" +
                               alg->name(sym) + "'");
    }
    out.push_back(std::move(term));
  }
  return out;
}

OutcomeTables build_tables(const Arrangement& arr, const StateVector& v0) {
  OutcomeTables tables;
  const StateVector v1 = state_at_t1(arr, v0);
  tables.per_copy.reserve(static_cast<std::size_t>(arr.copy_count()));
  for (int c = 0; c < arr.copy_count(); ++c) {
    tables.per_copy.push_back(copy_outcomes(arr, c, v1));
  }
  tables.combining = compile_combining(arr);
  return tables;
}

double eval_f(const OutcomeTables& tables,
              const std::vector<double>& values_by_measurement) {
  std::complex<double> total = 0.0;
  for (const auto& term : tables.combining) {
    std::complex<double> acc = term.coef;
    for (const auto& [index, exp] : term.powers) {
      const double v = values_by_measurement[index];
      double powed = 1.0;
      for (int k = 0; k < exp; ++k) powed *= v;
      acc *= powed;
    }
    total += acc;
  }
  return total.real();
}

}  // namespace

double exact_expected_output(const Arrangement& arr, const StateVector& v0) {
  if (arr.dim() != v0.dim()) {
    throw DimensionMismatchError("exact_expected_output: state dim mismatch");
  }
  const OutcomeTables tables = build_tables(arr, v0);

  // Sum f over the product measure across copies.
  const std::size_t n_meas = arr.measurements().size();
  std::vector<double> values(n_meas, 0.0);
  double total = 0.0;

  std::vector<std::size_t> cursor(tables.per_copy.size(), 0);
  while (true) {
    double p = 1.0;
    for (std::size_t c = 0; c < tables.per_copy.size(); ++c) {
      const CopyLeaf& leaf = tables.per_copy[c][cursor[c]];
      p *= leaf.prob;
      for (const auto& [mi, value] : leaf.values) values[mi] = value;
    }
    total += p * eval_f(tables, values);

    // Advance the mixed-radix cursor.
    std::size_t c = 0;
    for (; c < cursor.size(); ++c) {
      if (++cursor[c] < tables.per_copy[c].size()) break;
      cursor[c] = 0;
    }
    if (c == cursor.size()) break;
  }
  return total;
}

McResult mc_expected_output(const Arrangement& arr, const StateVector& v0,
                            long runs, std::uint64_t master_seed,
                            std::size_t record_limit, double support_tol) {
  if (runs < 1) throw Error("mc_expected_output: runs must be >= 1");
  const OutcomeTables tables = build_tables(arr, v0);

  // Cumulative probabilities per copy for inverse-CDF sampling.
  std::vector<std::vector<double>> cdf(tables.per_copy.size());
  for (std::size_t c = 0; c < tables.per_copy.size(); ++c) {
    double acc = 0.0;
    for (const auto& leaf : tables.per_copy[c]) {
      acc += leaf.prob;
      cdf[c].push_back(acc);
    }
  }

  McResult result;
  result.runs = runs;
  const std::size_t n_meas = arr.measurements().size();
  std::vector<double> values(n_meas, 0.0);
  std::vector<double> observed;

  double sum = 0.0;
  double sum_sq = 0.0;
  for (long r = 0; r < runs; ++r) {
    RngStream stream(master_seed, static_cast<std::uint64_t>(r));
    for (std::size_t c = 0; c < tables.per_copy.size(); ++c) {
      const double u = stream.uniform01();
      const auto it = std::lower_bound(cdf[c].begin(), cdf[c].end(), u);
      const std::size_t pick = std::min(
          static_cast<std::size_t>(it - cdf[c].begin()), cdf[c].size() - 1);
      for (const auto& [mi, value] : tables.per_copy[c][pick].values) {
        values[mi] = value;
      }
    }
    const double f = eval_f(tables, values);
    sum += f;
    sum_sq += f * f;
    observed.push_back(f);
    if (result.records.size() < record_limit) {
      result.records.push_back(
          RunRecord{values, f, static_cast<std::uint64_t>(r)});
    }
  }

  result.mean = sum / static_cast<double>(runs);
  if (runs > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * sum / static_cast<double>(runs)) /
                          static_cast<double>(runs - 1));
    result.stderr_of_mean = std::sqrt(var / static_cast<double>(runs));
  }

  std::sort(observed.begin(), observed.end());
  for (double v : observed) {
    if (result.support.empty() || v - result.support.back() > support_tol) {
      result.support.push_back(v);
    }
  }
  return result;
}

AvcpCheckReport avcp_check(const Arrangement& arr,
                           const HermitianOperator& candidate,
                           const std::vector<StateVector>& states, double tol) {
  if (states.empty()) throw Error("avcp_check: need at least one state");
  AvcpCheckReport report;
  for (std::size_t s = 0; s < states.size(); ++s) {
    StateVector at_t2 = states[s];
    if (arr.background()) {
      const auto& bg = *arr.background();
      const opcore::ComplexMatrix u =
          dynamics::propagator(bg.hamiltonian, bg.t2 - bg.t0, bg.hbar);
      at_t2 = dynamics::evolve(u, states[s]);
    }
    const double lhs = opcore::expectation(candidate, at_t2);
    const double rhs = exact_expected_output(arr, states[s]);
    const double dev = std::abs(lhs - rhs);
    report.deviations.push_back(dev);
    if (dev > report.max_abs_deviation) {
      report.max_abs_deviation = dev;
      report.worst_state = s;
    }
  }
  report.pass = report.max_abs_deviation <= tol;
  return report;
}

SolveResult solve_representing_operator(const Arrangement& arr,
                                        Eigen::Index dim, int n_states,
                                        double residual_tol,
                                        std::uint64_t seed) {
  const Eigen::Index n_basis = dim * dim;
  if (n_states < n_basis) {
    throw Error("solve_representing_operator: need at least dim^2 states");
  }

  // Real basis of Hermitian matrices: e_kk, (e_kl + e_lk), i(e_kl - e_lk).
  // Features are v' B v computed directly from amplitudes.
  auto features = [dim](const StateVector& v, Eigen::VectorXd& row) {
    const auto& z = v.vector();
    Eigen::Index col = 0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      row(col++) = std::norm(z(k));
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (Eigen::Index l = k + 1; l < dim; ++l) {
        const std::complex<double> cross = std::conj(z(k)) * z(l);
        row(col++) = 2.0 * cross.real();
        row(col++) = -2.0 * cross.imag();
      }
    }
  };

  Eigen::MatrixXd m(n_states, n_basis);
  Eigen::VectorXd y(n_states);
  Eigen::VectorXd row(n_basis);
  std::vector<StateVector> fit_states;
  fit_states.reserve(static_cast<std::size_t>(n_states));
  {
    RngStream stream(seed, 0);
    for (int s = 0; s < n_states; ++s) {
      fit_states.push_back(opcore::haar_state(dim, stream));
    }
  }
  for (int s = 0; s < n_states; ++s) {
    features(fit_states[static_cast<std::size_t>(s)], row);
    m.row(s) = row;
    y(s) = exact_expected_output(arr, fit_states[static_cast<std::size_t>(s)]);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  if (qr.rank() < n_basis) {
    throw IllConditionedError(
        "representing-operator fit is rank-deficient: rank " +
        std::to_string(qr.rank()) + " of " + std::to_string(n_basis));
  }
  const Eigen::VectorXd coeff = qr.solve(y);

  // Reassemble C from the basis coefficients.
  opcore::ComplexMatrix c = opcore::ComplexMatrix::Zero(dim, dim);
  {
    Eigen::Index col = 0;
    for (Eigen::Index k = 0; k < dim; ++k) c(k, k) = coeff(col++);
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (Eigen::Index l = k + 1; l < dim; ++l) {
        const double re = coeff(col++);
        const double im = coeff(col++);
        // (e_kl + e_lk) and i(e_kl - e_lk) contributions.
        c(k, l) += std::complex<double>(re, im);
        c(l, k) += std::complex<double>(re, -im);
      }
    }
  }
  const HermitianOperator candidate = HermitianOperator::FromHermitianParts(c);

  // Validate on a fresh sample.
  SolveResult result;
  RngStream validation(seed, 1);
  double max_residual = 0.0;
  for (Eigen::Index s = 0; s < n_basis; ++s) {
    const StateVector v = opcore::haar_state(dim, validation);
    const double lhs = opcore::expectation(candidate, v);
    const double rhs = exact_expected_output(arr, v);
    max_residual = std::max(max_residual, std::abs(lhs - rhs));
  }
  result.max_residual = max_residual;
  if (max_residual <= residual_tol) {
    result.feasible = true;
    result.op = candidate;
  }
  return result;
}

}  // namespace avcp::arrange
