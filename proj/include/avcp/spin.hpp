#pragma once

#include <array>
#include <vector>

#include "avcp/opcore.hpp"

namespace avcp::spin {

using opcore::ComplexMatrix;
using opcore::HermitianOperator;
using opcore::StateVector;

enum class Axis { X, Y, Z };

// Ladder-constructed angular momentum components for dimension N = 2j+1.
struct AngularMomentumTriple {
  Eigen::Index dim;
  double hbar;
  HermitianOperator lx, ly, lz;

  double j() const { return (static_cast<double>(dim) - 1.0) / 2.0; }
  const HermitianOperator& component(Axis a) const {
    switch (a) {
      case Axis::X: return lx;
      case Axis::Y: return ly;
      default: return lz;
    }
  }
};

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

AngularMomentumTriple angular_momentum(Eigen::Index n, double hbar);

// Dimensionless rotation generator R_a = L_a / hbar.
HermitianOperator rotation_generator(Axis axis, const AngularMomentumTriple& t);

// (<Lx>, <Ly>, <Lz>).
Vector3 proj(const StateVector& v, const AngularMomentumTriple& t);

// Proper rotation by theta about the given axis (right-hand rule, active).
Matrix3 rotation_matrix3(Axis axis, double theta);

// || (Rx(e) Ry(e) - Ry(e) Rx(e)) - (Rz(e^2) - I) || for exact 3x3 rotations;
// vanishes to third order in e.
double so3_commutator_residual(double eps);

// || proj(exp(-i theta R_z) v) - Rz(theta) proj(v) ||. The convention is
// active: exp(-i theta L_z / hbar) rotates the expectation vector by +theta
// about +z.
double proj_rotation_check(const StateVector& v, double theta,
                           const AngularMomentumTriple& t);

// Trajectory of proj under H = -(q/2m) B.L with the exact propagator.
std::vector<Vector3> precess(const StateVector& v0, const Vector3& b, double q,
                             double m, const std::vector<double>& t_grid,
                             const AngularMomentumTriple& t);

// Residuals of the commutation-relation chain for the constructed triple:
// bracket-closure relations, the solved component relations with their
// additive constants, the rotation-generator relations, and the first-order
// propagator bound.
struct BracketDefectReport {
  // ||[L_a, L_z + (i/hbar)[L_x, L_y]]|| for a = x, y, z.
  std::array<double, 3> closure_residual{};
  // ||[L_x,L_y] - i hbar L_z|| and cyclic.
  std::array<double, 3> component_residual{};
  // Additive constants gamma_1..3 extracted from the traces.
  std::array<double, 3> gamma{};
  // ||hbar R_a - L_a|| for a = x, y, z.
  std::array<double, 3> generator_residual{};
  // ||[R_z,L_x] - iL_y||, ||[R_z,L_y] + iL_x||, ||[R_z,L_z]||.
  std::array<double, 3> rotation_residual{};
  // ||L^2 - hbar^2 j(j+1) I||.
  double casimir_residual = 0.0;
  // ||U_a(dt) - (I - i eps L_a/hbar)|| and its bound eps^2 ||L_a/hbar||^2 / 2.
  double first_order_residual = 0.0;
  double first_order_bound = 0.0;

  double max_identity_residual() const;
};

BracketDefectReport bracket_defect_check(const AngularMomentumTriple& t,
                                         double field_eps = 1e-3);

}  // namespace avcp::spin
