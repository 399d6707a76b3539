#pragma once

#include "avcp/opcore.hpp"

namespace avcp::lattice {

using opcore::ComplexMatrix;
using opcore::ComplexVector;
using opcore::HermitianOperator;
using opcore::StateVector;

// Periodic lattice of M sites with spacing a; site n sits at
// x_n = a (n - M/2), n = 0..M-1.
struct LatticeConfig {
  Eigen::Index sites = 256;
  double spacing = 1.0;
  double hbar = 1.0;
};

void validate(const LatticeConfig& cfg);

double site_position(const LatticeConfig& cfg, Eigen::Index n);

// Wavenumber grid k_m in (-pi/a, pi/a], one value per Fourier mode.
Eigen::VectorXd wavenumbers(const LatticeConfig& cfg);

// Unitary DFT matrix F with (F psi)_m = (1/sqrt(M)) sum_n e^{-i k_m x_n} psi_n.
ComplexMatrix dft_matrix(const LatticeConfig& cfg);

// Diagonal position operator.
HermitianOperator lattice_position(const LatticeConfig& cfg);

// P = F^dagger diag(hbar k_m) F.
HermitianOperator lattice_momentum(const LatticeConfig& cfg);

// D = P / hbar; exp(-i eps D) translates wavefunctions by +eps.
HermitianOperator displacement_operator(const LatticeConfig& cfg);

// Cyclic shift moving the wavefunction by +sites lattice spacings:
// out_n = psi_{n - sites}.
ComplexVector circular_shift(const ComplexVector& psi, Eigen::Index sites);

// || circular_shift(psi, sites) - exp(-i sites a D) psi ||, phases compared
// exactly (no global-phase freedom).
double shift_compare(const StateVector& psi, Eigen::Index sites,
                     const LatticeConfig& cfg);

// | <psi|[X,P]|psi> - i hbar |. No finite pair of matrices satisfies the
// canonical commutation relation exactly (the trace of a commutator
// vanishes), so the check is per-state.
double canonical_defect(const StateVector& psi, const LatticeConfig& cfg);

// Same defect for [X, D] against i (the momentum-free form).
double displacement_defect(const StateVector& psi, const LatticeConfig& cfg);

// Normalized discretized Gaussian exp(-(x-center)^2/(4 width^2)) e^{i k0 x}.
// Requires width >= a and |k0| <= pi/a.
StateVector gaussian_packet(const LatticeConfig& cfg, double center,
                            double width, double carrier_k0);

}  // namespace avcp::lattice
