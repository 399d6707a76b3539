#pragma once

#include <functional>

#include "avcp/opcore.hpp"

namespace avcp::dynamics {

using opcore::ComplexMatrix;
using opcore::HermitianOperator;
using opcore::StateVector;

// Time-dependent background: a Hamiltonian schedule over [t0, t1] discretized
// with step eps (left-endpoint evaluation).
struct EvolutionSpec {
  std::function<HermitianOperator(double)> hamiltonian;
  double hbar = 1.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double eps = 0.0;
};

// exp(-i H dt / hbar) via the spectral decomposition.
ComplexMatrix propagator(const HermitianOperator& h, double dt, double hbar);

// Ordered product of short-time propagators at left-endpoint Hamiltonians:
// V(t1-eps) ... V(t0+eps) V(t0). The step is adjusted to divide the interval
// evenly (n = round((t1-t0)/eps), n >= 1).
ComplexMatrix stepped_propagator(const EvolutionSpec& spec);

StateVector evolve(const ComplexMatrix& u, const StateVector& v);

// max over a uniform t-grid of |<H>_t - <H>_0| under exact evolution.
double energy_drift(const HermitianOperator& h, const StateVector& v0, double t_max,
                    double hbar, int grid_points = 64);

// First-order prediction <A>_t + (i/hbar) dt <[H,A]>_t of <A>_{t+dt}.
double heisenberg_step_expectation(const HermitianOperator& a,
                                   const HermitianOperator& h,
                                   const StateVector& v, double dt, double hbar);

}  // namespace avcp::dynamics
