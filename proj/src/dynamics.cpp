#include "avcp/dynamics.hpp"

#include <cmath>

namespace avcp::dynamics {

ComplexMatrix propagator(const HermitianOperator& h, double dt, double hbar) {
  const opcore::Spectrum s = opcore::spectrum(h);
  const Eigen::Index n = h.dim();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double angle = -s.eigenvalues(k) * dt / hbar;
    phases(k) = std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

ComplexMatrix stepped_propagator(const EvolutionSpec& spec) {
  if (!(spec.eps > 0.0)) throw Error("stepped_propagator: eps must be > 0");
  const double span = spec.t1 - spec.t0;
  if (span < 0.0) throw Error("stepped_propagator: t1 must be >= t0");

  const HermitianOperator h0 = spec.hamiltonian(spec.t0);
  if (span == 0.0) {
    return ComplexMatrix::Identity(h0.dim(), h0.dim());
  }
  const long n = std::max(1L, std::lround(span / spec.eps));
  const double step = span / static_cast<double>(n);

  ComplexMatrix u = ComplexMatrix::Identity(h0.dim(), h0.dim());
  for (long k = 0; k < n; ++k) {
    const double t = spec.t0 + step * static_cast<double>(k);
    const HermitianOperator h = spec.hamiltonian(t);
    u = propagator(h, step, spec.hbar) * u;
  }
  return u;
}

StateVector evolve(const ComplexMatrix& u, const StateVector& v) {
  return StateVector::Normalized(u * v.vector());
}

double energy_drift(const HermitianOperator& h, const StateVector& v0, double t_max,
                    double hbar, int grid_points) {
  const opcore::Spectrum s = opcore::spectrum(h);
  const Eigen::VectorXcd coeffs = s.eigenvectors.adjoint() * v0.vector();
  const double e0 = opcore::expectation(h, v0);

  double drift = 0.0;
  for (int g = 1; g <= grid_points; ++g) {
    const double t = t_max * static_cast<double>(g) /
                     static_cast<double>(grid_points);
    Eigen::VectorXcd evolved(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      const double angle = -s.eigenvalues(k) * t / hbar;
      evolved(k) = coeffs(k) *
                   std::complex<double>(std::cos(angle), std::sin(angle));
    }
    const StateVector vt =
        StateVector::Normalized(s.eigenvectors * evolved);
    drift = std::max(drift, std::abs(opcore::expectation(h, vt) - e0));
  }
  return drift;
}

double heisenberg_step_expectation(const HermitianOperator& a,
                                   const HermitianOperator& h,
                                   const StateVector& v, double dt, double hbar) {
  const double base = opcore::expectation(a, v);
  const opcore::ComplexMatrix comm = opcore::commutator(h, a);
  const std::complex<double> bracket =
      v.vector().adjoint() * comm * v.vector();
  // <[H,A]> is imaginary for Hermitian H, A; i<[H,A]> is real.
  const double rate = -bracket.imag() / hbar;
  return base + rate * dt;
}

}  // namespace avcp::dynamics
