#include "avcp/spin.hpp"

#include <cmath>

#include "avcp/dynamics.hpp"

namespace avcp::spin {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

AngularMomentumTriple angular_momentum(Eigen::Index n, double hbar) {
  if (n < 1) throw DimensionMismatchError("angular_momentum: N must be >= 1");
  const double j = (static_cast<double>(n) - 1.0) / 2.0;

  // Basis ordered m = j, j-1, ..., -j.
  ComplexMatrix lz = ComplexMatrix::Zero(n, n);
  ComplexMatrix lplus = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = j - static_cast<double>(k);
    lz(k, k) = hbar * m;
    if (k > 0) {
      // L+ |j,m> = hbar sqrt(j(j+1) - m(m+1)) |j,m+1>
      lplus(k - 1, k) = hbar * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
  }
  const ComplexMatrix lminus = lplus.adjoint();
  const ComplexMatrix lx = (lplus + lminus) / 2.0;
  const ComplexMatrix ly = (lplus - lminus) / (2.0 * kI);

  return AngularMomentumTriple{
      n, hbar, HermitianOperator::FromHermitianParts(lx),
      HermitianOperator::FromHermitianParts(ly),
      HermitianOperator::FromHermitianParts(lz)};
}

HermitianOperator rotation_generator(Axis axis, const AngularMomentumTriple& t) {
  return HermitianOperator::FromHermitianParts(t.component(axis).matrix() /
                                               t.hbar);
}

Vector3 proj(const StateVector& v, const AngularMomentumTriple& t) {
  if (v.dim() != t.dim) {
    throw DimensionMismatchError("proj: state dimension mismatch");
  }
  return Vector3(opcore::expectation(t.lx, v), opcore::expectation(t.ly, v),
                 opcore::expectation(t.lz, v));
}

Matrix3 rotation_matrix3(Axis axis, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix3 r = Matrix3::Identity();
  switch (axis) {
    case Axis::X:
      r << 1, 0, 0, 0, c, -s, 0, s, c;
      break;
    case Axis::Y:
      r << c, 0, s, 0, 1, 0, -s, 0, c;
      break;
    case Axis::Z:
      r << c, -s, 0, s, c, 0, 0, 0, 1;
      break;
  }
  return r;
}

double so3_commutator_residual(double eps) {
  if (eps < 0.0) throw Error("so3_commutator_residual: eps must be >= 0");
  const Matrix3 rx = rotation_matrix3(Axis::X, eps);
  const Matrix3 ry = rotation_matrix3(Axis::Y, eps);
  const Matrix3 rz = rotation_matrix3(Axis::Z, eps * eps);
  const Matrix3 lhs = rx * ry - ry * rx;
  const Matrix3 rhs = rz - Matrix3::Identity();
  return (lhs - rhs).norm();
}

double proj_rotation_check(const StateVector& v, double theta,
                           const AngularMomentumTriple& t) {
  const HermitianOperator rz = rotation_generator(Axis::Z, t);
  const ComplexMatrix u = dynamics::propagator(rz, theta, 1.0);
  const StateVector rotated = dynamics::evolve(u, v);
  const Vector3 lhs = proj(rotated, t);
  const Vector3 rhs = rotation_matrix3(Axis::Z, theta) * proj(v, t);
  return (lhs - rhs).norm();
}

std::vector<Vector3> precess(const StateVector& v0, const Vector3& b, double q,
                             double m, const std::vector<double>& t_grid,
                             const AngularMomentumTriple& t) {
  const ComplexMatrix h_mat =
      -(q / (2.0 * m)) * (b.x() * t.lx.matrix() + b.y() * t.ly.matrix() +
                          b.z() * t.lz.matrix());
  const HermitianOperator h = HermitianOperator::FromHermitianParts(h_mat);
  const opcore::Spectrum s = opcore::spectrum(h);
  const Eigen::VectorXcd coeffs = s.eigenvectors.adjoint() * v0.vector();

  std::vector<Vector3> out;
  out.reserve(t_grid.size());
  for (const double time : t_grid) {
    Eigen::VectorXcd evolved(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      const double angle = -s.eigenvalues(k) * time / t.hbar;
      evolved(k) =
          coeffs(k) * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out.push_back(
        proj(StateVector::Normalized(s.eigenvectors * evolved), t));
  }
  return out;
}

double BracketDefectReport::max_identity_residual() const {
  double m = casimir_residual;
  for (double r : closure_residual) m = std::max(m, r);
  for (double r : component_residual) m = std::max(m, r);
  for (double r : generator_residual) m = std::max(m, r);
  for (double r : rotation_residual) m = std::max(m, r);
  for (double g : gamma) m = std::max(m, std::abs(g));
  return m;
}

BracketDefectReport bracket_defect_check(const AngularMomentumTriple& t,
                                         double field_eps) {
  BracketDefectReport rep;
  const double hbar = t.hbar;
  const Eigen::Index n = t.dim;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  const ComplexMatrix lx = t.lx.matrix();
  const ComplexMatrix ly = t.ly.matrix();
  const ComplexMatrix lz = t.lz.matrix();

  // Closure relations: [L_a, L_z + (i/hbar)[L_x, L_y]] = 0.
  const ComplexMatrix core = lz + (kI / hbar) * opcore::commutator(lx, ly);
  rep.closure_residual = {opcore::commutator(lx, core).norm(),
                          opcore::commutator(ly, core).norm(),
                          opcore::commutator(lz, core).norm()};

  // Component relations with additive constants:
  // [L_x,L_y] = i hbar L_z + i gamma_1, and cyclic.
  const ComplexMatrix d1 = opcore::commutator(lx, ly) - kI * hbar * lz;
  const ComplexMatrix d2 = opcore::commutator(ly, lz) - kI * hbar * lx;
  const ComplexMatrix d3 = opcore::commutator(lz, lx) - kI * hbar * ly;
  auto extract_gamma = [&](const ComplexMatrix& d) {
    // d should be i*gamma*I; gamma real.
    return (d.trace() / (kI * static_cast<double>(n))).real();
  };
  rep.gamma = {extract_gamma(d1), extract_gamma(d2), extract_gamma(d3)};
  rep.component_residual = {d1.norm(), d2.norm(), d3.norm()};

  // Rotation generators: hbar R_a = L_a with zero additive constant.
  for (int a = 0; a < 3; ++a) {
    const Axis axis = static_cast<Axis>(a);
    const ComplexMatrix r = rotation_generator(axis, t).matrix();
    rep.generator_residual[static_cast<std::size_t>(a)] =
        (hbar * r - t.component(axis).matrix()).norm();
  }

  // [R_z, L_x] = i L_y, [R_z, L_y] = -i L_x, [R_z, L_z] = 0.
  const ComplexMatrix rz = rotation_generator(Axis::Z, t).matrix();
  rep.rotation_residual = {
      (opcore::commutator(rz, lx) - kI * ly).norm(),
      (opcore::commutator(rz, ly) + kI * lx).norm(),
      opcore::commutator(rz, lz).norm()};

  // Casimir: L^2 = hbar^2 j(j+1) I.
  const double j = t.j();
  rep.casimir_residual =
      (lx * lx + ly * ly + lz * lz - hbar * hbar * j * (j + 1.0) * id).norm();

  // First-order propagator bound with eps = |q| B dt / 2m folded into
  // field_eps: ||exp(-i eps L_x/hbar) - (I - i eps L_x/hbar)||
  // <= eps^2 ||L_x/hbar||^2 / 2 (spectral norm).
  const HermitianOperator rx = rotation_generator(Axis::X, t);
  const ComplexMatrix u1 = dynamics::propagator(rx, field_eps, 1.0);
  const ComplexMatrix resid = u1 - (id - kI * field_eps * rx.matrix());
  rep.first_order_residual = resid.operatorNorm();
  const double rnorm = rx.operator_norm();
  rep.first_order_bound = field_eps * field_eps * rnorm * rnorm / 2.0;

  return rep;
}

}  // namespace avcp::spin
