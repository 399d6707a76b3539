#include "avcp/opcore.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace avcp::opcore {

HermitianOperator HermitianOperator::FromMatrix(const ComplexMatrix& m,
                                                double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatchError("matrix is not square");
  }
  if (!m.allFinite()) {
    throw NotHermitianError("matrix has non-finite entries");
  }
  const double scale = m.norm();
  const double defect = (m - m.adjoint()).norm();
  if (defect > tol * std::max(scale, 1e-300)) {
    throw NotHermitianError("matrix is not Hermitian: ||M - M^+|| = " +
                            std::to_string(defect));
  }
  return HermitianOperator(((m + m.adjoint()) / 2.0).eval());
}

HermitianOperator HermitianOperator::FromHermitianParts(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatchError("matrix is not square");
  }
  return HermitianOperator(((m + m.adjoint()) / 2.0).eval());
}

double HermitianOperator::operator_norm() const {
  if (dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(mat_,
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailureError("eigensolver failed computing operator norm");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

StateVector StateVector::FromVector(const ComplexVector& v, double tol) {
  if (v.size() == 0) {
    throw DimensionMismatchError("state vector is empty");
  }
  const double n = v.norm();
  if (std::abs(n - 1.0) > tol) {
    throw Error("state vector is not unit norm: ||v|| = " + std::to_string(n));
  }
  return StateVector(v);
}

StateVector StateVector::Normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error("cannot normalize a zero or non-finite vector");
  }
  return StateVector((v / n).eval());
}

StateVector StateVector::BasisState(Eigen::Index dim, Eigen::Index k) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

HermitianOperator hermitian_from_matrix(const ComplexMatrix& m, double tol) {
  return HermitianOperator::FromMatrix(m, tol);
}

Spectrum spectrum(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalFailureError("eigensolver did not converge");
  }
  // Eigen returns eigenvalues in increasing order already.
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianOperator apply_function(const HermitianOperator& a,
                                 const std::function<double(double)>& f) {
  const Spectrum s = spectrum(a);
  Eigen::VectorXd mapped(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double y = f(s.eigenvalues(i));
    if (!std::isfinite(y)) {
      throw DomainError("function not defined at eigenvalue " +
                        std::to_string(s.eigenvalues(i)));
    }
    mapped(i) = y;
  }
  const ComplexMatrix out = s.eigenvectors * mapped.asDiagonal() *
                            s.eigenvectors.adjoint();
  return HermitianOperator::FromHermitianParts(out);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatchError("commutator of differently sized matrices");
  }
  return a * b - b * a;
}

ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
  return commutator(a.matrix(), b.matrix());
}

double expectation(const HermitianOperator& a, const StateVector& v) {
  if (a.dim() != v.dim()) {
    throw DimensionMismatchError("expectation: operator dim " +
                                 std::to_string(a.dim()) + " vs state dim " +
                                 std::to_string(v.dim()));
  }
  const Complex val = v.vector().adjoint() * a.matrix() * v.vector();
  const double scale = std::max(1.0, a.frobenius_norm());
  if (std::abs(val.imag()) > 1e-12 * scale) {
    throw NotRealError("expectation has imaginary part " +
                       std::to_string(val.imag()));
  }
  return val.real();
}

OutcomeDistribution born_distribution(const HermitianOperator& a,
                                      const StateVector& v, double eig_tol) {
  if (a.dim() != v.dim()) {
    throw DimensionMismatchError("born_distribution: dimension mismatch");
  }
  const Spectrum s = spectrum(a);
  const Eigen::Index n = s.eigenvalues.size();
  double merge = eig_tol;
  if (merge < 0.0) {
    const double scale = n > 0 ? s.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    merge = kEigMergeTol * std::max(scale, 1.0);
  }

  OutcomeDistribution dist;
  Eigen::Index i = 0;
  while (i < n) {
    // Cluster eigenvalues whose consecutive gaps are within the merge width.
    Eigen::Index j = i + 1;
    while (j < n && s.eigenvalues(j) - s.eigenvalues(j - 1) <= merge) ++j;

    // Projection of v onto the eigenspace spanned by columns [i, j).
    const auto block = s.eigenvectors.middleCols(i, j - i);
    const ComplexVector coeffs = block.adjoint() * v.vector();
    const double p = coeffs.squaredNorm();
    if (p > 0.0) {
      const ComplexVector proj = block * coeffs;
      double value = 0.0;
      for (Eigen::Index k = i; k < j; ++k) value += s.eigenvalues(k);
      value /= static_cast<double>(j - i);
      dist.outcomes.push_back(
          Outcome{value, p, StateVector::Normalized(proj)});
    }
    i = j;
  }

  // Guard against pathological total probability (all projections zero can
  // not happen for a unit vector and an orthonormal basis).
  double total = 0.0;
  for (const auto& o : dist.outcomes) total += o.probability;
  if (std::abs(total - 1.0) > 1e-10) {
    throw NumericalFailureError("born probabilities sum to " +
                                std::to_string(total));
  }
  return dist;
}

SampledOutcome sample_outcome(const OutcomeDistribution& d, RngStream& rng) {
  if (d.outcomes.empty()) {
    throw Error("cannot sample from an empty distribution");
  }
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t k = 0; k < d.outcomes.size(); ++k) {
    acc += d.outcomes[k].probability;
    if (u < acc) {
      return SampledOutcome{d.outcomes[k].value, d.outcomes[k].collapsed_state,
                            k};
    }
  }
  const std::size_t last = d.outcomes.size() - 1;
  return SampledOutcome{d.outcomes[last].value, d.outcomes[last].collapsed_state,
                        last};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::FromHermitianParts(kron(a.matrix(), b.matrix()));
}

bool equal_up_to_phase(const StateVector& u, const StateVector& w, double tol) {
  if (u.dim() != w.dim()) {
    throw DimensionMismatchError("equal_up_to_phase: dimension mismatch");
  }
  // ||u - lambda w||^2 over |lambda| = 1 is minimized at 2 - 2|<u,w>|.
  const double overlap = std::abs(Complex(u.vector().adjoint() * w.vector()));
  const double min_dist2 = std::max(0.0, 2.0 - 2.0 * overlap);
  return std::sqrt(min_dist2) <= tol;
}

StateVector haar_state(Eigen::Index dim, RngStream& rng) {
  if (dim < 1) {
    throw DimensionMismatchError("haar_state: dim must be >= 1");
  }
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return StateVector::Normalized(v);
}

HermitianOperator random_hermitian(Eigen::Index dim, RngStream& rng) {
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rng.complex_normal();
  }
  return HermitianOperator::FromHermitianParts(m);
}

}  // namespace avcp::opcore
