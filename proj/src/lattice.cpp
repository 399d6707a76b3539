#include "avcp/lattice.hpp"

#include <cmath>

namespace avcp::lattice {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void validate(const LatticeConfig& cfg) {
  if (cfg.sites < 4) throw Error("lattice: M must be >= 4");
  if (!(cfg.spacing > 0.0)) throw Error("lattice: spacing must be > 0");
  if (!(cfg.hbar > 0.0)) throw Error("lattice: hbar must be > 0");
}

double site_position(const LatticeConfig& cfg, Eigen::Index n) {
  return cfg.spacing * (static_cast<double>(n) -
                        static_cast<double>(cfg.sites) / 2.0);
}

Eigen::VectorXd wavenumbers(const LatticeConfig& cfg) {
  const Eigen::Index m = cfg.sites;
  Eigen::VectorXd k(m);
  for (Eigen::Index idx = 0; idx < m; ++idx) {
    // Fourier index folded into (-M/2, M/2].
    long fold = static_cast<long>(idx);
    if (fold > m / 2) fold -= m;
    k(idx) = 2.0 * kPi * static_cast<double>(fold) /
             (static_cast<double>(m) * cfg.spacing);
  }
  return k;
}

ComplexMatrix dft_matrix(const LatticeConfig& cfg) {
  validate(cfg);
  const Eigen::Index m = cfg.sites;
  const Eigen::VectorXd k = wavenumbers(cfg);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  ComplexMatrix f(m, m);
  for (Eigen::Index row = 0; row < m; ++row) {
    for (Eigen::Index col = 0; col < m; ++col) {
      const double phase = -k(row) * site_position(cfg, col);
      f(row, col) = norm * std::complex<double>(std::cos(phase),
                                                std::sin(phase));
    }
  }
  return f;
}

HermitianOperator lattice_position(const LatticeConfig& cfg) {
  validate(cfg);
  ComplexMatrix x = ComplexMatrix::Zero(cfg.sites, cfg.sites);
  for (Eigen::Index n = 0; n < cfg.sites; ++n) {
    x(n, n) = site_position(cfg, n);
  }
  return HermitianOperator::FromHermitianParts(x);
}

HermitianOperator lattice_momentum(const LatticeConfig& cfg) {
  validate(cfg);
  const ComplexMatrix f = dft_matrix(cfg);
  const Eigen::VectorXd k = wavenumbers(cfg);
  ComplexMatrix diag = ComplexMatrix::Zero(cfg.sites, cfg.sites);
  for (Eigen::Index m = 0; m < cfg.sites; ++m) diag(m, m) = cfg.hbar * k(m);
  const ComplexMatrix p = f.adjoint() * diag * f;
  return HermitianOperator::FromHermitianParts(p);
}

HermitianOperator displacement_operator(const LatticeConfig& cfg) {
  const HermitianOperator p = lattice_momentum(cfg);
  return HermitianOperator::FromHermitianParts(p.matrix() / cfg.hbar);
}

ComplexVector circular_shift(const ComplexVector& psi, Eigen::Index sites) {
  const Eigen::Index m = psi.size();
  ComplexVector out(m);
  for (Eigen::Index n = 0; n < m; ++n) {
    Eigen::Index src = (n - sites) % m;
    if (src < 0) src += m;
    out(n) = psi(src);
  }
  return out;
}

// Applies exp(-i eps D) in Fourier space (diagonal phases), avoiding a dense
// matrix exponential.
static ComplexVector apply_displacement(const StateVector& psi, double eps,
                                        const LatticeConfig& cfg) {
  const ComplexMatrix f = dft_matrix(cfg);
  const Eigen::VectorXd k = wavenumbers(cfg);
  ComplexVector hat = f * psi.vector();
  for (Eigen::Index m = 0; m < hat.size(); ++m) {
    const double phase = -eps * k(m);
    hat(m) *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return f.adjoint() * hat;
}

double shift_compare(const StateVector& psi, Eigen::Index sites,
                     const LatticeConfig& cfg) {
  validate(cfg);
  if (psi.dim() != cfg.sites) {
    throw DimensionMismatchError("shift_compare: state dimension mismatch");
  }
  const ComplexVector shifted = circular_shift(psi.vector(), sites);
  const ComplexVector displaced = apply_displacement(
      psi, static_cast<double>(sites) * cfg.spacing, cfg);
  return (shifted - displaced).norm();
}

double canonical_defect(const StateVector& psi, const LatticeConfig& cfg) {
  validate(cfg);
  const HermitianOperator x = lattice_position(cfg);
  const HermitianOperator p = lattice_momentum(cfg);
  const ComplexMatrix comm = opcore::commutator(x, p);
  const std::complex<double> val =
      psi.vector().adjoint() * comm * psi.vector();
  return std::abs(val - kI * cfg.hbar);
}

double displacement_defect(const StateVector& psi, const LatticeConfig& cfg) {
  validate(cfg);
  const HermitianOperator x = lattice_position(cfg);
  const HermitianOperator d = displacement_operator(cfg);
  const ComplexMatrix comm = opcore::commutator(x, d);
  const std::complex<double> val =
      psi.vector().adjoint() * comm * psi.vector();
  return std::abs(val - kI);
}

StateVector gaussian_packet(const LatticeConfig& cfg, double center,
                            double width, double carrier_k0) {
  validate(cfg);
  if (!(width >= cfg.spacing) || !std::isfinite(width)) {
    throw InvalidWidthError("gaussian_packet: width must be finite and >= a");
  }
  if (std::abs(carrier_k0) > kPi / cfg.spacing) {
    throw Error("gaussian_packet: carrier beyond the band edge");
  }
  ComplexVector psi(cfg.sites);
  for (Eigen::Index n = 0; n < cfg.sites; ++n) {
    const double x = site_position(cfg, n);
    const double dx = x - center;
    const double amp = std::exp(-dx * dx / (4.0 * width * width));
    const double phase = carrier_k0 * x;
    psi(n) = amp * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return StateVector::Normalized(psi);
}

}  // namespace avcp::lattice
