// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here; nothing defers to calibration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include "avcp/arrange.hpp"
#include "avcp/dynamics.hpp"
#include "avcp/lattice.hpp"
#include "avcp/lineop_oracle.hpp"
#include "avcp/spin.hpp"
#include "avcp/symalg.hpp"
#include "avcp/verify.hpp"

using namespace avcp;
using opcore::ComplexMatrix;
using opcore::ComplexVector;
using opcore::HermitianOperator;
using opcore::StateVector;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kSeed = 20240101;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail = "") {
  std::printf("%s  %2d  %s%s%s\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

symalg::AlgebraPtr labels_algebra(
    const std::vector<std::string>& labels,
    const std::vector<std::pair<std::string, std::string>>& noncommuting = {}) {
  auto alg = std::make_shared<symalg::Algebra>();
  for (const auto& l : labels) alg->declare_observable(l);
  for (const auto& [a, b] : noncommuting) {
    alg->set_noncommuting(alg->require(a), alg->require(b));
  }
  return alg;
}

HermitianOperator pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator::FromHermitianParts(m);
}

HermitianOperator pauli_y() {
  ComplexMatrix m(2, 2);
  m << std::complex<double>(0, 0), std::complex<double>(0, -1),
      std::complex<double>(0, 1), std::complex<double>(0, 0);
  return HermitianOperator::FromHermitianParts(m);
}

HermitianOperator pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator::FromHermitianParts(m);
}

// 1. Squared-measurement arrangements: exact outputs and Monte Carlo.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(kSeed, 1);
  double worst_direct = 0.0, worst_twocopy = 0.0, worst_mc_sigma = 0.0;

  for (Eigen::Index dim = 2; dim <= 5; ++dim) {
    const HermitianOperator a = opcore::random_hermitian(dim, rng);
    const HermitianOperator a2 =
        HermitianOperator::FromHermitianParts(a.matrix() * a.matrix());

    auto alg1 = labels_algebra({"a"});
    const arrange::Arrangement direct = arrange::assign_copies(
        {{"a", a, std::nullopt}}, symalg::parse_classical("a^2", alg1));
    auto alg2 = labels_algebra({"a", "a2"});
    const arrange::Arrangement repeat = arrange::assign_copies(
        {{"a", a, std::nullopt}, {"a2", a, std::nullopt}},
        symalg::parse_classical("a*a2", alg2));
    const arrange::Arrangement twocopy = arrange::Arrangement::Create(
        {{"a", a, std::nullopt}, {"a2", a, std::nullopt}}, {0, 1},
        symalg::parse_classical("a*a2", alg2));

    for (int s = 0; s < 100; ++s) {
      const StateVector v = opcore::haar_state(dim, rng);
      const double sq = opcore::expectation(a2, v);
      const double mean = opcore::expectation(a, v);
      worst_direct = std::max(
          worst_direct,
          std::abs(arrange::exact_expected_output(direct, v) - sq));
      worst_direct = std::max(
          worst_direct,
          std::abs(arrange::exact_expected_output(repeat, v) - sq));
      worst_twocopy = std::max(
          worst_twocopy,
          std::abs(arrange::exact_expected_output(twocopy, v) - mean * mean));
    }

    // Monte Carlo with 1e6 runs per arrangement on one sampled state.
    const StateVector v = opcore::haar_state(dim, rng);
    for (const arrange::Arrangement* arr : {&direct, &repeat, &twocopy}) {
      const double exact = arrange::exact_expected_output(*arr, v);
      const arrange::McResult mc =
          arrange::mc_expected_output(*arr, v, 1000000, kSeed + dim, 16);
      const double band = std::max(5.0 * mc.stderr_of_mean, 1e-12);
      worst_mc_sigma =
          std::max(worst_mc_sigma, std::abs(mc.mean - exact) / band);
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream detail;
  detail << "exact dev " << worst_direct << "/" << worst_twocopy
         << ", mc dev/5sigma " << worst_mc_sigma << ", " << seconds << " s";
  report(1,
         worst_direct <= 1e-10 && worst_twocopy <= 1e-10 &&
             worst_mc_sigma <= 1.0 && seconds < 30.0,
         "square-measurement arrangements reproduce <A^2> and <A>^2",
         detail.str());
}

// 2. Representing-operator solver across the four canonical arrangements.
void criterion_2() {
  RngStream rng(kSeed, 2);
  bool ok = true;
  std::ostringstream detail;

  for (Eigen::Index dim : {2L, 3L}) {
    const HermitianOperator a = opcore::random_hermitian(dim, rng);
    auto alg1 = labels_algebra({"a"});
    const arrange::Arrangement direct = arrange::assign_copies(
        {{"a", a, std::nullopt}}, symalg::parse_classical("a^2", alg1));
    auto alg2 = labels_algebra({"a", "a2"});
    const arrange::Arrangement repeat = arrange::assign_copies(
        {{"a", a, std::nullopt}, {"a2", a, std::nullopt}},
        symalg::parse_classical("a*a2", alg2));
    const ComplexMatrix square = a.matrix() * a.matrix();
    for (const arrange::Arrangement* arr : {&direct, &repeat}) {
      const auto res = arrange::solve_representing_operator(
          *arr, dim, static_cast<int>(3 * dim * dim), 1e-8, kSeed);
      if (!res.feasible ||
          HermitianOperator::FromHermitianParts(res.op->matrix() - square)
                  .operator_norm() > 1e-8) {
        ok = false;
        detail << "square recovery failed at dim " << dim << "; ";
      }
    }
  }

  // Two-copy square of a nontrivial A is infeasible.
  {
    auto alg = labels_algebra({"a", "a2"});
    const arrange::Arrangement twocopy = arrange::Arrangement::Create(
        {{"a", pauli_z(), std::nullopt}, {"a2", pauli_z(), std::nullopt}},
        {0, 1}, symalg::parse_classical("a*a2", alg));
    if (arrange::solve_representing_operator(twocopy, 2, 12, 1e-8, kSeed)
            .feasible) {
      ok = false;
      detail << "two-copy square unexpectedly feasible; ";
    }
  }

  // Two-copy product of noncommuting observables is infeasible.
  {
    auto alg = labels_algebra({"a", "b"}, {{"a", "b"}});
    const arrange::Arrangement product = arrange::assign_copies(
        {{"a", pauli_x(), std::nullopt}, {"b", pauli_z(), std::nullopt}},
        symalg::parse_classical("a*b", alg));
    if (arrange::solve_representing_operator(product, 2, 12, 1e-8, kSeed)
            .feasible) {
      ok = false;
      detail << "noncommuting product unexpectedly feasible; ";
    }
  }

  // Two-copy sum recovers A + B.
  {
    const HermitianOperator a = opcore::random_hermitian(3, rng);
    const HermitianOperator b = opcore::random_hermitian(3, rng);
    auto alg = labels_algebra({"a", "b"}, {{"a", "b"}});
    const arrange::Arrangement sum = arrange::Arrangement::Create(
        {{"a", a, std::nullopt}, {"b", b, std::nullopt}}, {0, 1},
        symalg::parse_classical("a + b", alg));
    const auto res =
        arrange::solve_representing_operator(sum, 3, 27, 1e-8, kSeed);
    if (!res.feasible ||
        HermitianOperator::FromHermitianParts(res.op->matrix() - a.matrix() -
                                              b.matrix())
                .operator_norm() > 1e-8) {
      ok = false;
      detail << "sum recovery failed; ";
    }
  }

  report(2, ok, "representing-operator solver (feasible and infeasible cases)",
         detail.str());
}

// 3. The symmetrized product candidate works on the eigenstates of A and of
// B but fails on some generic state.
void criterion_3() {
  auto alg = labels_algebra({"a", "b"}, {{"a", "b"}});
  const arrange::Arrangement arr = arrange::assign_copies(
      {{"a", pauli_x(), std::nullopt}, {"b", pauli_z(), std::nullopt}},
      symalg::parse_classical("a*b", alg));
  const HermitianOperator candidate = HermitianOperator::FromHermitianParts(
      (pauli_x().matrix() * pauli_z().matrix() +
       pauli_z().matrix() * pauli_x().matrix()) /
      2.0);

  std::vector<StateVector> eigenstates;
  const HermitianOperator sx = pauli_x();
  const HermitianOperator sz = pauli_z();
  for (const HermitianOperator* op : {&sx, &sz}) {
    const auto s = opcore::spectrum(*op);
    for (int k = 0; k < 2; ++k) {
      eigenstates.push_back(StateVector::Normalized(s.eigenvectors.col(k)));
    }
  }
  const auto eig_rep = arrange::avcp_check(arr, candidate, eigenstates, 1e-10);

  RngStream rng(kSeed, 3);
  std::vector<StateVector> haar;
  for (int s = 0; s < 100; ++s) haar.push_back(opcore::haar_state(2, rng));
  const auto haar_rep = arrange::avcp_check(arr, candidate, haar, 1e-10);

  std::ostringstream detail;
  detail << "eigenstate dev " << eig_rep.max_abs_deviation
         << ", generic-state dev " << haar_rep.max_abs_deviation;
  report(3, eig_rep.pass && !haar_rep.pass,
         "symmetrized product holds on eigenstates only", detail.str());
}

// 4. Spin-1/2 sum arrangement: outputs and operator eigenvalues.
void criterion_4() {
  bool ok = true;
  std::ostringstream detail;
  for (const double hbar : {1.0, 0.5}) {
    const auto triple = spin::angular_momentum(2, hbar);
    auto alg = labels_algebra({"a", "b"}, {{"a", "b"}});
    const arrange::Arrangement arr = arrange::assign_copies(
        {{"a", triple.lx, std::nullopt}, {"b", triple.lz, std::nullopt}},
        symalg::parse_classical("a + b", alg));

    ComplexVector amps(2);
    amps << std::complex<double>(0.8, 0.1), std::complex<double>(0.5, -0.2);
    const StateVector v0 = StateVector::Normalized(amps);
    const arrange::McResult mc =
        arrange::mc_expected_output(arr, v0, 400000, kSeed + 41, 16);

    bool support_ok = mc.support.size() == 3;
    const double expected_support[3] = {-hbar, 0.0, hbar};
    if (support_ok) {
      for (int k = 0; k < 3; ++k) {
        support_ok = support_ok &&
                     std::abs(mc.support[k] - expected_support[k]) <= 1e-12;
      }
    }

    const auto s = opcore::spectrum(HermitianOperator::FromHermitianParts(
        triple.lx.matrix() + triple.lz.matrix()));
    const double target = hbar / std::sqrt(2.0);
    const bool eig_ok = std::abs(s.eigenvalues(0) + target) <= 1e-12 &&
                        std::abs(s.eigenvalues(1) - target) <= 1e-12;
    if (!support_ok || !eig_ok) {
      ok = false;
      detail << "hbar=" << hbar << (support_ok ? "" : " support mismatch")
             << (eig_ok ? "" : " eigenvalue mismatch") << "; ";
    }
  }
  report(4, ok,
         "spin-1/2 sum: outputs {-hbar,0,+hbar}, eigenvalues +-hbar/sqrt(2)",
         detail.str());
}

// 5. Operator-rule theorem over 200 randomized cases.
void criterion_5() {
  RngStream rng(kSeed, 5);
  double worst = 0.0;
  int cases = 0;
  int not_simple_raised = 0;
  int not_simple_expected = 0;

  while (cases < 200) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.next_u64() % 5);
    const int form = static_cast<int>(rng.next_u64() % 3);

    auto alg = std::make_shared<symalg::Algebra>();
    const auto ida = alg->declare_observable("a");
    const auto idb = alg->declare_observable("b");

    const HermitianOperator a = opcore::random_hermitian(dim, rng);
    HermitianOperator b = opcore::random_hermitian(dim, rng);
    bool commuting = false;
    if (form == 2) {
      const double c1 = rng.normal(), c2 = rng.normal();
      b = opcore::apply_function(
          a, [c1, c2](double v) { return c1 * v + c2 * v * v; });
      commuting = true;
    }
    if (!commuting) alg->set_noncommuting(ida, idb);

    // Random small integer coefficients so f itself varies per case.
    auto coef = [&]() {
      // Parenthesized so negative values fit the grammar mid-expression.
      return "(" + std::to_string(static_cast<long>(rng.next_u64() % 9) - 4) +
             ")";
    };
    std::string combining;
    switch (form) {
      case 0:
        combining = coef() + "*a^3 + " + coef() + "*a + " + coef();
        break;
      case 1:
        combining = coef() + "*a^2 + " + coef() + "*b^2 + " + coef() + "*b";
        break;
      default:
        combining = coef() + "*a*b + " + coef() + "*a*b^2";
        break;
    }
    const auto f = symalg::parse_classical(combining, alg);

    const arrange::Arrangement arr = arrange::assign_copies(
        {{"a", a, std::nullopt}, {"b", b, std::nullopt}}, f);
    const symalg::OperatorBindings bindings{{ida, a}, {idb, b}};
    const HermitianOperator c = HermitianOperator::FromMatrix(
        symalg::nc_to_matrix(symalg::quantize(f), bindings), 1e-8);

    const StateVector v = opcore::haar_state(dim, rng);
    worst = std::max(worst,
                     std::abs(arrange::exact_expected_output(arr, v) -
                              opcore::expectation(c, v)));
    ++cases;

    // Every fourth case additionally probes the not-simple rejection.
    if (cases % 4 == 0) {
      ++not_simple_expected;
      auto free_alg = labels_algebra({"a", "b"}, {{"a", "b"}});
      try {
        symalg::quantize(symalg::parse_classical("a*b + a", free_alg));
      } catch (const NotSimpleError&) {
        ++not_simple_raised;
      }
    }
  }

  std::ostringstream detail;
  detail << cases << " cases, worst dev " << worst << ", "
         << not_simple_raised << "/" << not_simple_expected
         << " not-simple rejections";
  report(5, worst <= 1e-9 && not_simple_raised == not_simple_expected,
         "operator rules match arrangement averages", detail.str());
}

// 6. Hermitization-rule ambiguity: exact symbolic identity, nonzero numeric
// instance.
void criterion_6() {
  auto alg = labels_algebra({"a", "b"}, {{"a", "b"}});
  const auto ida = alg->require("a");
  const auto idb = alg->require("b");

  const auto fa = symalg::parse_classical("a", alg);
  const auto fa2 = symalg::parse_classical("a^2", alg);
  const auto fb = symalg::parse_classical("b", alg);
  const auto ab = symalg::hermitize_unsound(fa, fb, {}, true);
  const auto g1 = symalg::hermitize_unsound(symalg::quantize(fa), ab.poly, true);
  const auto g2 = symalg::hermitize_unsound(fa2, fb, {}, true);

  const auto na = symalg::NCPoly::symbol(alg, ida);
  const auto nb = symalg::NCPoly::symbol(alg, idb);
  const auto inner = na * nb - nb * na;
  const auto ref =
      (na * inner - inner * na).scaled(RationalComplex::rational(-1, 4));
  const bool symbolic = (g1.poly - g2.poly == ref);

  const symalg::OperatorBindings bindings{{ida, pauli_x()}, {idb, pauli_y()}};
  const double gap = symalg::nc_to_matrix(g1.poly - g2.poly, bindings).norm();

  std::ostringstream detail;
  detail << "symbolic identity " << (symbolic ? "exact" : "BROKEN")
         << ", pauli gap norm " << gap;
  report(6, symbolic && gap > 1e-6,
         "grouping ambiguity equals -(1/4)[A,[A,B]], nonzero numerically",
         detail.str());
}

// 7. Bracket-commutator correspondence, plus the non-simple defect constant.
void criterion_7() {
  auto alg = std::make_shared<symalg::Algebra>();
  const auto [x, p] = alg->declare_canonical_pair("x", "p");
  alg->declare_scalar("g");
  const std::vector<std::pair<symalg::SymbolId, symalg::SymbolId>> pairs{
      {x, p}};
  const auto ihbar = symalg::parse_classical("i*hbar", alg);

  RngStream rng(kSeed, 7);
  int checked = 0;
  bool ok = true;
  auto random_side = [&](bool cap_x, bool cap_p) {
    symalg::ClassicalPoly poly = symalg::ClassicalPoly::zero(alg);
    const int dx = cap_x ? 1 : 1 + static_cast<int>(rng.next_u64() % 3);
    const int dp = cap_p ? 1 : 1 + static_cast<int>(rng.next_u64() % 3);
    for (int k = 0; k <= dx; ++k) {
      poly += symalg::ClassicalPoly::monomial(
          alg, symalg::Monomial::symbol(x, k),
          RationalComplex(static_cast<long>(rng.next_u64() % 7) - 3));
    }
    for (int k = 1; k <= dp; ++k) {
      poly += symalg::ClassicalPoly::monomial(
          alg, symalg::Monomial::symbol(p, k),
          RationalComplex(static_cast<long>(rng.next_u64() % 7) - 3));
    }
    return poly;
  };

  while (checked < 100) {
    const bool f_high = (rng.next_u64() & 1) != 0;
    const auto f = random_side(!f_high, f_high);
    const auto h = random_side(f_high, !f_high);
    const auto bracket = symalg::poisson(f, h, pairs);
    if (!symalg::is_simple(bracket).simple) continue;
    ++checked;
    const auto lhs =
        symalg::nc_commutator(symalg::quantize(f), symalg::quantize(h));
    const auto rhs =
        symalg::nc_normal_form(symalg::quantize(bracket).scaled(ihbar));
    if (!(lhs == rhs)) ok = false;
  }

  // Failure case: the defect of the symmetrized route is a pure scalar of
  // cubic order in hbar; its exact value is reported against the quoted
  // 2*g*hbar^3 but not asserted.
  const auto comm = symalg::nc_commutator(symalg::parse_operator("x^3", alg),
                                          symalg::parse_operator("g*p^3", alg));
  const auto herm = symalg::hermitize_unsound(
      symalg::parse_classical("9*g*x^2", alg),
      symalg::parse_classical("p^2", alg), {}, true);
  const auto defect =
      comm - symalg::nc_normal_form(herm.poly.scaled(ihbar));
  const bool scalar_defect =
      defect.is_scalar_multiple_of_identity() && !defect.is_zero();
  std::string constant = "0";
  double magnitude = 0.0;
  if (scalar_defect) {
    constant = defect.terms().begin()->second.str();
    magnitude = std::abs(defect.terms().begin()->second.evaluate(
        {{alg->require("g"), 1.0}}));
  }

  std::ostringstream detail;
  detail << checked << " simple pairs exact; defect = " << constant
         << ", |defect|(g=1,hbar=1) = " << magnitude
         << " vs quoted 2 (discrepancy logged, not asserted)";
  report(7, ok && scalar_defect,
         "bracket-commutator rule exact for simple pairs; defect is scalar",
         detail.str());
}

// 8. Spin identities, cubic rotation-commutator scaling, exact projection
// rotation, closed precession circle.
void criterion_8() {
  bool ok = true;
  std::ostringstream detail;

  double worst_identity = 0.0;
  for (Eigen::Index n = 1; n <= 8; ++n) {
    const auto triple = spin::angular_momentum(n, 1.0);
    const auto rep = spin::bracket_defect_check(triple);
    worst_identity = std::max(worst_identity, rep.max_identity_residual());
    if (rep.first_order_residual > rep.first_order_bound + 1e-15) ok = false;
  }
  if (worst_identity > 1e-11) ok = false;
  detail << "identity residual " << worst_identity;

  const double r2 = spin::so3_commutator_residual(1e-2);
  const double r4 = spin::so3_commutator_residual(1e-4);
  const double slope = std::log(r2 / r4) / std::log(1e2);
  if (std::abs(slope - 3.0) > 0.2) ok = false;
  detail << ", so3 slope " << slope;

  RngStream rng(kSeed, 8);
  double worst_proj = 0.0;
  for (Eigen::Index n : {2L, 3L, 4L, 5L}) {
    const auto triple = spin::angular_momentum(n, 1.0);
    for (int s = 0; s < 50; ++s) {
      const StateVector v = opcore::haar_state(n, rng);
      for (const double theta : {0.1, 1.0, kPi}) {
        worst_proj =
            std::max(worst_proj, spin::proj_rotation_check(v, theta, triple));
      }
    }
  }
  if (worst_proj > 1e-11) ok = false;
  detail << ", proj residual " << worst_proj;

  const auto triple = spin::angular_momentum(2, 1.0);
  ComplexVector amps(2);
  amps << 1.0, 1.0;
  const StateVector v0 = StateVector::Normalized(amps);
  std::vector<double> grid;
  for (int k = 0; k <= 64; ++k) grid.push_back(2.0 * kPi * k / 64.0);
  const auto traj =
      spin::precess(v0, spin::Vector3(0, 0, 1.0), 1.0, 0.5, grid, triple);
  const double closure = (traj.back() - traj.front()).norm();
  if (closure > 1e-10) ok = false;
  detail << ", larmor closure " << closure;

  report(8, ok, "angular-momentum and rotation identities", detail.str());
}

// 9. Lattice: shift identity, displaced-frame expectations, canonical
// defect, drift rate.
void criterion_9() {
  const lattice::LatticeConfig cfg{256, 1.0, 1.0};
  bool ok = true;
  std::ostringstream detail;

  RngStream rng(kSeed, 9);
  const StateVector psi = opcore::haar_state(cfg.sites, rng);
  double worst_shift = 0.0;
  for (Eigen::Index s : {1L, 3L, 17L}) {
    worst_shift = std::max(worst_shift, lattice::shift_compare(psi, s, cfg));
  }
  if (worst_shift > 1e-12) ok = false;
  detail << "shift residual " << worst_shift;

  const auto x = lattice::lattice_position(cfg);
  const auto p = lattice::lattice_momentum(cfg);
  const auto d = lattice::displacement_operator(cfg);
  const StateVector packet = lattice::gaussian_packet(cfg, -20.0, 8.0, 0.3);
  const double eps = 5.5;
  const StateVector moved =
      dynamics::evolve(dynamics::propagator(d, eps, 1.0), packet);
  const double dx = opcore::expectation(x, moved) -
                    opcore::expectation(x, packet) - eps;
  const double dp =
      opcore::expectation(p, moved) - opcore::expectation(p, packet);
  if (std::abs(dx) > 1e-9 || std::abs(dp) > 1e-9) ok = false;
  detail << ", frame shift dev " << std::abs(dx) << "/" << std::abs(dp);

  const StateVector centered = lattice::gaussian_packet(cfg, 0.0, 8.0, 0.0);
  const double defect = lattice::canonical_defect(centered, cfg);
  if (defect > 1e-6 * cfg.hbar) ok = false;
  detail << ", canonical defect " << defect;

  const double c = 0.75;
  const HermitianOperator h =
      HermitianOperator::FromHermitianParts(c * p.matrix());
  const StateVector drift_packet = lattice::gaussian_packet(cfg, -60.0, 8.0, 0.2);
  const double dt = 2.0;
  const StateVector after =
      dynamics::evolve(dynamics::propagator(h, dt, cfg.hbar), drift_packet);
  const double rate = (opcore::expectation(x, after) -
                       opcore::expectation(x, drift_packet)) /
                      dt;
  if (std::abs(rate - c) > 1e-6 * c) ok = false;
  detail << ", drift rate dev " << std::abs(rate - c);

  report(9, ok, "periodic-lattice displacement and drift identities",
         detail.str());
}

// 10. Dynamics: composition, conservation, first-order stepping.
void criterion_10() {
  bool ok = true;
  std::ostringstream detail;
  RngStream rng(kSeed, 10);

  double worst_compose = 0.0;
  const HermitianOperator h = opcore::random_hermitian(4, rng);
  for (int t = 0; t < 20; ++t) {
    const double t1 = 2.0 * rng.uniform01() - 1.0;
    const double t2 = 2.0 * rng.uniform01() - 1.0;
    worst_compose = std::max(
        worst_compose,
        (dynamics::propagator(h, t2, 1.0) * dynamics::propagator(h, t1, 1.0) -
         dynamics::propagator(h, t1 + t2, 1.0))
            .norm());
  }
  if (worst_compose > 1e-12) ok = false;
  detail << "composition " << worst_compose;

  double worst_drift = 0.0;
  const double scale = h.operator_norm();
  for (int s = 0; s < 100; ++s) {
    worst_drift = std::max(
        worst_drift,
        dynamics::energy_drift(h, opcore::haar_state(4, rng), 10.0, 1.0, 20));
  }
  if (worst_drift > 1e-10 * scale) ok = false;
  detail << ", drift " << worst_drift;

  const HermitianOperator base = opcore::random_hermitian(3, rng);
  const HermitianOperator drive = opcore::random_hermitian(3, rng);
  auto schedule = [&](double t) {
    return HermitianOperator::FromHermitianParts(base.matrix() +
                                                 t * drive.matrix());
  };
  const ComplexMatrix ref = dynamics::stepped_propagator(
      {schedule, 1.0, 0.0, 1.0, 1.0 / 4096.0});
  std::vector<double> eps{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<double> errs;
  for (double e : eps) {
    errs.push_back(
        (dynamics::stepped_propagator({schedule, 1.0, 0.0, 1.0, e}) - ref)
            .norm());
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    sx += std::log(eps[k]);
    sy += std::log(errs[k]);
    sxx += std::log(eps[k]) * std::log(eps[k]);
    sxy += std::log(eps[k]) * std::log(errs[k]);
  }
  const double n = static_cast<double>(eps.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (std::abs(slope - 1.0) > 0.2) ok = false;
  detail << ", stepping slope " << slope;

  report(10, ok, "temporal evolution laws", detail.str());
}

// 11. Full verification suite: clean, fast, reproducible.
void criterion_11() {
  const auto start = std::chrono::steady_clock::now();
  const auto records1 = verify::run_suites(kSeed, "");
  const auto records2 = verify::run_suites(kSeed, "");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const int failures = verify::count_failures(records1);
  const bool identical = verify::summary_table(records1) ==
                         verify::summary_table(records2);

  std::ostringstream detail;
  detail << records1.size() << " suite records, " << failures << " failures, "
         << seconds << " s for two runs, reruns "
         << (identical ? "identical" : "DIFFER");
  report(11, failures == 0 && identical && seconds < 300.0,
         "verification suite is clean and reproducible", detail.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();

  if (g_failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
