#include <doctest.h>

#include <cmath>

#include "avcp/dynamics.hpp"
#include "avcp/spin.hpp"
#include "test_support.hpp"

using namespace avcp;
using namespace avcp::spin;
using namespace avcp_test;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("ladder construction at small dimensions") {
  // j = 1/2 reduces to the Pauli matrices over 2.
  const auto t2 = angular_momentum(2, 1.0);
  CHECK((t2.lx.matrix() - 0.5 * sigma_x()).norm() <= 1e-15);
  CHECK((t2.ly.matrix() - 0.5 * sigma_y()).norm() <= 1e-15);
  CHECK((t2.lz.matrix() - 0.5 * sigma_z()).norm() <= 1e-15);

  // N = 3: Lz eigenvalues are -hbar, 0, +hbar by construction.
  const auto t3 = angular_momentum(3, 1.0);
  const auto s = opcore::spectrum(t3.lz);
  CHECK(s.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(0.0));
  CHECK(s.eigenvalues(2) == doctest::Approx(1.0));

  // N = 1 is the trivial spin: all components vanish.
  const auto t1 = angular_momentum(1, 1.0);
  CHECK(t1.lx.matrix().norm() == 0.0);
  CHECK(t1.ly.matrix().norm() == 0.0);
  CHECK(t1.lz.matrix().norm() == 0.0);
}

TEST_CASE("triple invariants for N = 1..8") {
  for (Eigen::Index n = 1; n <= 8; ++n) {
    const double hbar = 0.7;  // exercise a non-unit scale
    const auto t = angular_momentum(n, hbar);
    const double j = t.j();
    const double scale = std::max(1.0, hbar * hbar * j * j);

    CHECK((opcore::commutator(t.lx, t.ly) - kI * hbar * t.lz.matrix()).norm() <=
          1e-12 * scale);
    CHECK((opcore::commutator(t.ly, t.lz) - kI * hbar * t.lx.matrix()).norm() <=
          1e-12 * scale);
    CHECK((opcore::commutator(t.lz, t.lx) - kI * hbar * t.ly.matrix()).norm() <=
          1e-12 * scale);

    const ComplexMatrix l2 = t.lx.matrix() * t.lx.matrix() +
                             t.ly.matrix() * t.ly.matrix() +
                             t.lz.matrix() * t.lz.matrix();
    CHECK((l2 - hbar * hbar * j * (j + 1.0) *
                    ComplexMatrix::Identity(n, n)).norm() <= 1e-10 * scale);
  }
}

TEST_CASE("rotation generators") {
  const auto t = angular_momentum(2, 1.0);
  const auto rz = rotation_generator(Axis::Z, t);
  CHECK((rz.matrix() - 0.5 * sigma_z()).norm() <= 1e-15);

  CHECK(opcore::commutator(rz, t.lz).norm() <= 1e-13);
  CHECK((opcore::commutator(rz, t.lx) - kI * t.ly.matrix()).norm() <= 1e-13);
  CHECK((opcore::commutator(rz, t.ly) + kI * t.lx.matrix()).norm() <= 1e-13);
}

TEST_CASE("expectation projections") {
  const auto t = angular_momentum(2, 1.0);
  const Vector3 up = proj(StateVector::FromVector(ket(1, 0)), t);
  CHECK((up - Vector3(0, 0, 0.5)).norm() <= 1e-14);

  const double r = 1.0 / std::sqrt(2.0);
  const Vector3 plus = proj(StateVector::FromVector(ket(r, r)), t);
  CHECK((plus - Vector3(0.5, 0, 0)).norm() <= 1e-14);

  const auto t1 = angular_momentum(1, 1.0);
  opcore::ComplexVector one(1);
  one << 1.0;
  CHECK(proj(StateVector::FromVector(one), t1).norm() == 0.0);
}

TEST_CASE("rotation commutator residual scales cubically") {
  CHECK(so3_commutator_residual(0.0) == 0.0);
  CHECK(so3_commutator_residual(1e-3) <= 10.0 * 1e-9);

  const double r3 = so3_commutator_residual(1e-3);
  const double r4 = so3_commutator_residual(1e-4);
  const double slope = std::log(r3 / r4) / std::log(10.0);
  CHECK(slope == doctest::Approx(3.0).epsilon(0.07));
}

TEST_CASE("projection rotates with the frame") {
  const auto t = angular_momentum(2, 1.0);
  RngStream rng(12, 0);

  CHECK(proj_rotation_check(opcore::haar_state(2, rng), 0.0, t) <= 1e-15);

  // A pole state is invariant under z-rotations.
  CHECK(proj_rotation_check(StateVector::FromVector(ket(1, 0)), 1.234, t) <=
        1e-12);

  // Equatorial state: proj moves from (hbar/2, 0, 0) to (0, +hbar/2, 0) at
  // theta = pi/2 under the active convention.
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector eq = StateVector::FromVector(ket(r, r));
  CHECK(proj_rotation_check(eq, kPi / 2.0, t) <= 1e-12);
  const ComplexMatrix u =
      dynamics::propagator(rotation_generator(Axis::Z, t), kPi / 2.0, 1.0);
  const Vector3 moved = proj(dynamics::evolve(u, eq), t);
  CHECK((moved - Vector3(0.0, 0.5, 0.0)).norm() <= 1e-12);

  // Exact (not merely first-order) for arbitrary states, dims and angles.
  for (Eigen::Index n : {2L, 3L, 4L, 5L}) {
    const auto tn = angular_momentum(n, 1.0);
    for (int s = 0; s < 10; ++s) {
      const StateVector v = opcore::haar_state(n, rng);
      for (double theta : {0.1, 1.0, kPi}) {
        CHECK(proj_rotation_check(v, theta, tn) <= 1e-11);
      }
    }
  }
}

TEST_CASE("precession") {
  const auto t = angular_momentum(2, 1.0);

  // Lz eigenstate in a z-field: projection is constant.
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
  const auto pole = precess(StateVector::FromVector(ket(1, 0)),
                            Vector3(0, 0, 2.0), 1.0, 1.0, grid, t);
  for (const auto& pt : pole) {
    CHECK((pt - pole.front()).norm() <= 1e-13);
  }

  // Zero field: nothing moves.
  RngStream rng(21, 0);
  const StateVector v = opcore::haar_state(2, rng);
  const auto still = precess(v, Vector3::Zero(), 1.0, 1.0, grid, t);
  for (const auto& pt : still) {
    CHECK((pt - still.front()).norm() <= 1e-14);
  }

  // Larmor circle: radius hbar/2 in the xy-plane, closing after one period.
  const double q = 1.0, m = 0.5, b = 1.0;  // angular rate q b / 2m = 1
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector eq = StateVector::FromVector(ket(r, r));
  std::vector<double> circle_grid;
  for (int k = 0; k <= 64; ++k) {
    circle_grid.push_back(2.0 * kPi * static_cast<double>(k) / 64.0);
  }
  const auto traj = precess(eq, Vector3(0, 0, b), q, m, circle_grid, t);
  CHECK((traj.back() - traj.front()).norm() <= 1e-10);
  for (const auto& pt : traj) {
    CHECK(std::abs(std::hypot(pt.x(), pt.y()) - 0.5) <= 1e-12);
    CHECK(std::abs(pt.z()) <= 1e-12);
  }
  // Quarter period fixes the sense: positive q B precesses clockwise about
  // +z, so (hbar/2, 0, 0) moves to (0, -hbar/2, 0).
  const auto quarter =
      precess(eq, Vector3(0, 0, b), q, m, {kPi / 2.0}, t);
  CHECK((quarter.front() - Vector3(0.0, -0.5, 0.0)).norm() <= 1e-12);
}

TEST_CASE("bracket defect report") {
  // Pauli algebra: residuals at machine precision.
  const auto rep2 = bracket_defect_check(angular_momentum(2, 1.0));
  CHECK(rep2.max_identity_residual() <= 1e-13);

  const auto rep5 = bracket_defect_check(angular_momentum(5, 1.0));
  CHECK(rep5.max_identity_residual() <= 1e-11);
  for (double gamma : rep5.gamma) {
    CHECK(std::abs(gamma) <= 1e-12);
  }

  // First-order propagator bound.
  for (Eigen::Index n : {2L, 4L, 7L}) {
    const auto rep = bracket_defect_check(angular_momentum(n, 1.0), 1e-3);
    CHECK(rep.first_order_residual <= rep.first_order_bound + 1e-15);
    CHECK(rep.first_order_bound > 0.0);
  }
}
