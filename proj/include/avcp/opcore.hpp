#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "avcp/errors.hpp"
#include "avcp/rng.hpp"

namespace avcp::opcore {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kUnitNormTol = 1e-12;

// Relative eigenvalue-merge width used by born_distribution when the caller
// does not supply one; scaled by max|eigenvalue|.
inline constexpr double kEigMergeTol = 1e-9;

// Dense Hermitian operator. Construction validates ||M - M^dagger|| against
// tol * ||M|| (Frobenius); the stored matrix is symmetrized so downstream
// spectral code sees an exactly Hermitian input.
class HermitianOperator {
public:
  static HermitianOperator FromMatrix(const ComplexMatrix& m,
                                      double tol = kHermiticityTol);

  // For matrices Hermitian by construction (sums/conjugations of validated
  // operators); still symmetrizes, skips the tolerance check.
  static HermitianOperator FromHermitianParts(const ComplexMatrix& m);

  Eigen::Index dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }

  double frobenius_norm() const { return mat_.norm(); }
  // Spectral norm (largest |eigenvalue|).
  double operator_norm() const;

private:
  explicit HermitianOperator(ComplexMatrix m) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

// Unit-norm state. FromVector validates the norm; Normalized rescales.
class StateVector {
public:
  static StateVector FromVector(const ComplexVector& v,
                                double tol = kUnitNormTol);
  static StateVector Normalized(const ComplexVector& v);
  static StateVector BasisState(Eigen::Index dim, Eigen::Index k);

  Eigen::Index dim() const { return v_.size(); }
  const ComplexVector& vector() const { return v_; }

private:
  explicit StateVector(ComplexVector v) : v_(std::move(v)) {}
  ComplexVector v_;
};

// Eigendecomposition of a Hermitian operator, eigenvalues ascending and
// eigenvectors orthonormal (columns of `eigenvectors`).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;
};

struct Outcome {
  double value = 0.0;
  double probability = 0.0;
  StateVector collapsed_state;
};

// Born-rule outcome table for one measurement on one state: one entry per
// distinct eigenvalue with nonzero projection, probabilities summing to 1.
struct OutcomeDistribution {
  std::vector<Outcome> outcomes;
};

HermitianOperator hermitian_from_matrix(const ComplexMatrix& m,
                                        double tol = kHermiticityTol);

Spectrum spectrum(const HermitianOperator& a);

// Spectral function rule: result = sum_i f(a_i) v_i v_i^dagger. Throws
// DomainError if f is not finite at some eigenvalue.
HermitianOperator apply_function(const HermitianOperator& a,
                                 const std::function<double(double)>& f);

ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

double expectation(const HermitianOperator& a, const StateVector& v);

// eig_tol < 0 selects the default merge width kEigMergeTol * max|eigenvalue|;
// otherwise eig_tol is an absolute width. Collapse is projective (Lueders):
// the post-measurement state is the normalized eigenspace projection.
OutcomeDistribution born_distribution(const HermitianOperator& a,
                                      const StateVector& v,
                                      double eig_tol = -1.0);

struct SampledOutcome {
  double value = 0.0;
  StateVector state;
  std::size_t index = 0;  // position in the distribution's outcome list
};

SampledOutcome sample_outcome(const OutcomeDistribution& d, RngStream& rng);

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// True iff min over unit-modulus lambda of ||u - lambda w|| <= tol.
bool equal_up_to_phase(const StateVector& u, const StateVector& w, double tol);

StateVector haar_state(Eigen::Index dim, RngStream& rng);

// Random Hermitian with independent Gaussian entries (GUE-style); test and
// verification helper.
HermitianOperator random_hermitian(Eigen::Index dim, RngStream& rng);

}  // namespace avcp::opcore
