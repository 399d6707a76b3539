#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avcp/opcore.hpp"
#include "avcp/symalg.hpp"

namespace avcp::arrange {

using opcore::HermitianOperator;
using opcore::StateVector;

// One elementary measurement inside an arrangement. Operators live in the
// arrangement's global dimension (subsystem operators are embedded via
// tensor products before declaration); `subsystem` is a bookkeeping tag.
struct MeasurementDecl {
  std::string label;
  HermitianOperator op;
  std::optional<int> subsystem;
};

// Constant background Hamiltonian with preparation/measurement times.
struct Background {
  HermitianOperator hamiltonian;
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double hbar = 1.0;
};

inline constexpr double kCommuteTol = 1e-10;

// A scheme implementing a classical measurement: elementary measurements at
// t1 spread over copies of the system, values combined by a polynomial f.
// Construction enforces the copy rules: labels sharing a copy must have
// commuting operators (noncommuting pairs always end up on distinct copies).
// Same-copy measurements execute sequentially in declaration order with
// projective collapse; order is immaterial because they commute.
class Arrangement {
public:
  // Explicit copy assignment (one copy index per measurement). Throws
  // Error("copy-rule violation...") when two noncommuting labels share a
  // copy.
  static Arrangement Create(std::vector<MeasurementDecl> measurements,
                            std::vector<int> copy_assignment,
                            symalg::ClassicalPoly combining,
                            std::optional<Background> background = std::nullopt,
                            double commute_tol = kCommuteTol);

  const std::vector<MeasurementDecl>& measurements() const {
    return measurements_;
  }
  const std::vector<int>& copy_assignment() const { return copy_assignment_; }
  int copy_count() const { return copy_count_; }
  const symalg::ClassicalPoly& combining() const { return combining_; }
  const std::optional<Background>& background() const { return background_; }
  Eigen::Index dim() const;

  symalg::SymbolId label_symbol(const std::string& label) const;

private:
  Arrangement() = default;

  std::vector<MeasurementDecl> measurements_;
  std::vector<int> copy_assignment_;
  int copy_count_ = 0;
  symalg::ClassicalPoly combining_;
  std::optional<Background> background_;
};

// Minimal-copy assignment by greedy coloring of the noncommutation graph in
// declaration order.
Arrangement assign_copies(std::vector<MeasurementDecl> measurements,
                          symalg::ClassicalPoly combining,
                          std::optional<Background> background = std::nullopt,
                          double commute_tol = kCommuteTol);

// Expected output of the arrangement for initial state v0: the exact sum of
// f over the joint outcome distribution (copies independent, same-copy
// measurements sequential with collapse, background evolution applied up to
// t1).
double exact_expected_output(const Arrangement& arr, const StateVector& v0);

struct RunRecord {
  std::vector<double> values;  // one per measurement, declaration order
  double f_value = 0.0;
  std::uint64_t stream_id = 0;
};

struct McResult {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long runs = 0;
  // Distinct observed f-values merged within support_tol, ascending.
  std::vector<double> support;
  // First `record_limit` per-run records (all runs contribute to the
  // aggregates regardless).
  std::vector<RunRecord> records;
};

McResult mc_expected_output(const Arrangement& arr, const StateVector& v0,
                            long runs, std::uint64_t master_seed,
                            std::size_t record_limit = 4096,
                            double support_tol = 1e-9);

struct AvcpCheckReport {
  double max_abs_deviation = 0.0;
  std::size_t worst_state = 0;
  bool pass = false;
  std::vector<double> deviations;
};

// Average-value condition: <candidate> at t2 must match the arrangement's
// exact expected output for every supplied initial state.
AvcpCheckReport avcp_check(const Arrangement& arr,
                           const HermitianOperator& candidate,
                           const std::vector<StateVector>& states, double tol);

struct SolveResult {
  bool feasible = false;
  std::optional<HermitianOperator> op;
  double max_residual = 0.0;
};

// Least-squares fit of a Hermitian C with v'Cv = exact_expected_output(v)
// over sampled Haar states, validated on a fresh sample. Returns the
// operator when the validation residual stays below residual_tol, otherwise
// an infeasibility report. Throws IllConditionedError when the sampled
// normal system is rank-deficient.
SolveResult solve_representing_operator(const Arrangement& arr,
                                        Eigen::Index dim, int n_states,
                                        double residual_tol,
                                        std::uint64_t seed);

}  // namespace avcp::arrange
