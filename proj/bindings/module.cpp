#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "avcp/arrange.hpp"
#include "avcp/config.hpp"
#include "avcp/dynamics.hpp"
#include "avcp/lattice.hpp"
#include "avcp/opcore.hpp"
#include "avcp/spin.hpp"
#include "avcp/symalg.hpp"
#include "avcp/verify.hpp"
#include "avcp/version.hpp"

namespace py = pybind11;
using namespace avcp;

namespace {

opcore::HermitianOperator as_op(const opcore::ComplexMatrix& m) {
  return opcore::HermitianOperator::FromMatrix(m, 1e-9);
}

opcore::StateVector as_state(const opcore::ComplexVector& v) {
  return opcore::StateVector::Normalized(v);
}

// Builds an algebra from label lists: noncommuting pairs are declared by
// name; everything else commutes.
symalg::AlgebraPtr make_algebra(
    const std::vector<std::string>& observables,
    const std::vector<std::pair<std::string, std::string>>& noncommuting,
    const std::vector<std::string>& scalars) {
  auto alg = std::make_shared<symalg::Algebra>();
  for (const auto& name : observables) alg->declare_observable(name);
  for (const auto& name : scalars) alg->declare_scalar(name);
  for (const auto& [a, b] : noncommuting) {
    alg->set_noncommuting(alg->require(a), alg->require(b));
  }
  return alg;
}

arrange::Arrangement make_arrangement(
    const std::vector<std::string>& labels,
    const std::vector<opcore::ComplexMatrix>& operators,
    const std::string& combining,
    const std::optional<std::vector<int>>& copies) {
  if (labels.size() != operators.size()) {
    throw Error("labels and operators must have equal length");
  }
  auto alg = std::make_shared<symalg::Algebra>();
  std::vector<arrange::MeasurementDecl> decls;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    alg->declare_observable(labels[i]);
    decls.push_back(
        arrange::MeasurementDecl{labels[i], as_op(operators[i]), std::nullopt});
  }
  for (std::size_t a = 0; a < decls.size(); ++a) {
    for (std::size_t b = a + 1; b < decls.size(); ++b) {
      const double scale = std::max(
          1.0, decls[a].op.frobenius_norm() * decls[b].op.frobenius_norm());
      if (opcore::commutator(decls[a].op, decls[b].op).norm() >
          arrange::kCommuteTol * scale) {
        alg->set_noncommuting(alg->require(labels[a]), alg->require(labels[b]));
      }
    }
  }
  const symalg::ClassicalPoly f = symalg::parse_classical(combining, alg);
  if (copies) {
    return arrange::Arrangement::Create(std::move(decls), *copies, f);
  }
  return arrange::assign_copies(std::move(decls), f);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum models of classical measurement arrangements";
  m.attr("__version__") = kVersion;

  // Later registrations are tried first, so the derived exception goes last.
  py::register_exception<Error>(m, "AvcpError");
  py::register_exception<NotSimpleError>(m, "NotSimpleError");

  // ---- opcore ----
  m.def("pauli", [](const std::string& axis) {
    return config::builtin_operator("pauli_" + axis, 1.0).matrix();
  }, py::arg("axis"), "Pauli matrix for axis 'x', 'y' or 'z'");

  m.def("spectrum", [](const opcore::ComplexMatrix& a) {
    opcore::Spectrum s = opcore::spectrum(as_op(a));
    // Moved-in rvalues so the arrays own their storage.
    return py::make_tuple(Eigen::VectorXd(std::move(s.eigenvalues)),
                          opcore::ComplexMatrix(std::move(s.eigenvectors)));
  }, py::arg("a"), "eigenvalues (ascending) and orthonormal eigenvector columns");

  m.def("apply_function", [](const opcore::ComplexMatrix& a,
                             const std::function<double(double)>& f) {
    return opcore::apply_function(as_op(a), f).matrix();
  }, py::arg("a"), py::arg("f"), "spectral function rule f(A)");

  m.def("commutator", [](const opcore::ComplexMatrix& a,
                         const opcore::ComplexMatrix& b) {
    return opcore::ComplexMatrix(a * b - b * a);
  });

  m.def("expectation", [](const opcore::ComplexMatrix& a,
                          const opcore::ComplexVector& v) {
    return opcore::expectation(as_op(a), as_state(v));
  });

  m.def("born_distribution", [](const opcore::ComplexMatrix& a,
                                const opcore::ComplexVector& v) {
    const auto dist = opcore::born_distribution(as_op(a), as_state(v));
    py::list out;
    for (const auto& o : dist.outcomes) {
      out.append(py::make_tuple(
          o.value, o.probability,
          opcore::ComplexVector(o.collapsed_state.vector())));
    }
    return out;
  }, py::arg("a"), py::arg("v"),
     "list of (value, probability, collapsed_state)");

  m.def("sample_outcomes", [](const opcore::ComplexMatrix& a,
                              const opcore::ComplexVector& v, long n,
                              std::uint64_t seed) {
    const auto dist = opcore::born_distribution(as_op(a), as_state(v));
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    RngStream rng(seed, 0);
    for (long k = 0; k < n; ++k) {
      values.push_back(opcore::sample_outcome(dist, rng).value);
    }
    return values;
  }, py::arg("a"), py::arg("v"), py::arg("n"), py::arg("seed") = 0,
     "n seeded draws from the outcome distribution");

  m.def("tensor", [](const opcore::ComplexMatrix& a,
                     const opcore::ComplexMatrix& b) {
    return opcore::kron(a, b);
  });

  m.def("haar_state", [](long dim, std::uint64_t seed, std::uint64_t stream) {
    RngStream rng(seed, stream);
    return opcore::haar_state(dim, rng).vector();
  }, py::arg("dim"), py::arg("seed") = 0, py::arg("stream") = 0);

  m.def("equal_up_to_phase", [](const opcore::ComplexVector& u,
                                const opcore::ComplexVector& w, double tol) {
    return opcore::equal_up_to_phase(as_state(u), as_state(w), tol);
  }, py::arg("u"), py::arg("w"), py::arg("tol") = 1e-10);

  // ---- symalg ----
  m.def("poisson_bracket", [](const std::string& f, const std::string& h,
                              const std::vector<std::pair<std::string,
                                                          std::string>>& pairs,
                              const std::vector<std::string>& scalars) {
    auto alg = std::make_shared<symalg::Algebra>();
    std::vector<std::pair<symalg::SymbolId, symalg::SymbolId>> ids;
    for (const auto& [q, p] : pairs) {
      ids.push_back(alg->declare_canonical_pair(q, p));
    }
    for (const auto& s : scalars) alg->declare_scalar(s);
    return symalg::poisson(symalg::parse_classical(f, alg),
                           symalg::parse_classical(h, alg), ids)
        .str();
  }, py::arg("f"), py::arg("h"),
     py::arg("pairs") = std::vector<std::pair<std::string, std::string>>{
         {"x", "p"}},
     py::arg("scalars") = std::vector<std::string>{},
     "canonical Poisson bracket, exact coefficients");

  m.def("is_simple", [](const std::string& expr,
                        const std::vector<std::string>& observables,
                        const std::vector<std::pair<std::string, std::string>>&
                            noncommuting) {
    const auto alg = make_algebra(observables, noncommuting, {});
    const auto rep = symalg::is_simple(symalg::parse_classical(expr, alg));
    std::vector<std::string> offenders;
    for (const auto& mono : rep.offenders) offenders.push_back(mono.str(*alg));
    return py::make_tuple(rep.simple, offenders);
  }, py::arg("expr"), py::arg("observables"),
     py::arg("noncommuting") = std::vector<std::pair<std::string,
                                                     std::string>>{});

  m.def("quantize", [](const std::string& expr,
                       const std::vector<std::string>& observables,
                       const std::vector<std::pair<std::string, std::string>>&
                           noncommuting) {
    const auto alg = make_algebra(observables, noncommuting, {});
    return symalg::quantize(symalg::parse_classical(expr, alg)).str();
  }, py::arg("expr"), py::arg("observables"),
     py::arg("noncommuting") = std::vector<std::pair<std::string,
                                                     std::string>>{},
     "operator counterpart of a simple polynomial (raises NotSimpleError)");

  m.def("nc_commutator", [](const std::string& lhs, const std::string& rhs,
                            const std::vector<std::pair<std::string,
                                                        std::string>>& pairs,
                            const std::vector<std::string>& scalars) {
    auto alg = std::make_shared<symalg::Algebra>();
    for (const auto& [q, p] : pairs) alg->declare_canonical_pair(q, p);
    for (const auto& s : scalars) alg->declare_scalar(s);
    return symalg::nc_commutator(symalg::parse_operator(lhs, alg),
                                 symalg::parse_operator(rhs, alg))
        .str();
  }, py::arg("lhs"), py::arg("rhs"),
     py::arg("pairs") = std::vector<std::pair<std::string, std::string>>{
         {"x", "p"}},
     py::arg("scalars") = std::vector<std::string>{},
     "normal-ordered commutator over canonical pairs");

  // ---- spin ----
  m.def("angular_momentum", [](long n, double hbar) {
    const auto t = spin::angular_momentum(n, hbar);
    return py::make_tuple(opcore::ComplexMatrix(t.lx.matrix()),
                          opcore::ComplexMatrix(t.ly.matrix()),
                          opcore::ComplexMatrix(t.lz.matrix()));
  }, py::arg("n"), py::arg("hbar") = 1.0, "(Lx, Ly, Lz) for dimension N");

  m.def("proj", [](const opcore::ComplexVector& v, long n, double hbar) {
    const auto t = spin::angular_momentum(n, hbar);
    return spin::proj(as_state(v), t);
  }, py::arg("v"), py::arg("n"), py::arg("hbar") = 1.0);

  m.def("precess", [](const opcore::ComplexVector& v0,
                      const Eigen::Vector3d& field, double q, double mass,
                      const std::vector<double>& t_grid, double hbar) {
    const auto t = spin::angular_momentum(v0.size(), hbar);
    return spin::precess(as_state(v0), field, q, mass, t_grid, t);
  }, py::arg("v0"), py::arg("field"), py::arg("q"), py::arg("mass"),
     py::arg("t_grid"), py::arg("hbar") = 1.0);

  m.def("so3_commutator_residual", &spin::so3_commutator_residual,
        py::arg("eps"));

  // ---- lattice ----
  m.def("lattice_position", [](long sites, double spacing) {
    return lattice::lattice_position({sites, spacing, 1.0}).matrix();
  }, py::arg("sites"), py::arg("spacing") = 1.0);

  m.def("lattice_momentum", [](long sites, double spacing, double hbar) {
    return lattice::lattice_momentum({sites, spacing, hbar}).matrix();
  }, py::arg("sites"), py::arg("spacing") = 1.0, py::arg("hbar") = 1.0);

  m.def("gaussian_packet", [](long sites, double spacing, double center,
                              double width, double k0) {
    return lattice::gaussian_packet({sites, spacing, 1.0}, center, width, k0)
        .vector();
  }, py::arg("sites"), py::arg("spacing"), py::arg("center"),
     py::arg("width"), py::arg("k0") = 0.0);

  m.def("canonical_defect", [](const opcore::ComplexVector& psi, long sites,
                               double spacing, double hbar) {
    return lattice::canonical_defect(as_state(psi), {sites, spacing, hbar});
  }, py::arg("psi"), py::arg("sites"), py::arg("spacing") = 1.0,
     py::arg("hbar") = 1.0);

  // ---- dynamics ----
  m.def("propagator", [](const opcore::ComplexMatrix& h, double dt,
                         double hbar) {
    return dynamics::propagator(as_op(h), dt, hbar);
  }, py::arg("h"), py::arg("dt"), py::arg("hbar") = 1.0);

  m.def("energy_drift", [](const opcore::ComplexMatrix& h,
                           const opcore::ComplexVector& v0, double t_max,
                           double hbar) {
    return dynamics::energy_drift(as_op(h), as_state(v0), t_max, hbar);
  }, py::arg("h"), py::arg("v0"), py::arg("t_max"), py::arg("hbar") = 1.0);

  // ---- arrange ----
  m.def("exact_expected_output", [](const std::vector<std::string>& labels,
                                    const std::vector<opcore::ComplexMatrix>&
                                        operators,
                                    const std::string& combining,
                                    const opcore::ComplexVector& v0,
                                    const std::optional<std::vector<int>>&
                                        copies) {
    const auto arr = make_arrangement(labels, operators, combining, copies);
    return arrange::exact_expected_output(arr, as_state(v0));
  }, py::arg("labels"), py::arg("operators"), py::arg("combining"),
     py::arg("v0"), py::arg("copies") = std::nullopt,
     "exact expected output of a measurement arrangement");

  m.def("mc_expected_output", [](const std::vector<std::string>& labels,
                                 const std::vector<opcore::ComplexMatrix>&
                                     operators,
                                 const std::string& combining,
                                 const opcore::ComplexVector& v0, long runs,
                                 std::uint64_t seed,
                                 const std::optional<std::vector<int>>&
                                     copies) {
    const auto arr = make_arrangement(labels, operators, combining, copies);
    const auto mc =
        arrange::mc_expected_output(arr, as_state(v0), runs, seed);
    return py::make_tuple(mc.mean, mc.stderr_of_mean, mc.support);
  }, py::arg("labels"), py::arg("operators"), py::arg("combining"),
     py::arg("v0"), py::arg("runs"), py::arg("seed") = 0,
     py::arg("copies") = std::nullopt,
     "(mean, stderr, support) of a seeded Monte Carlo estimate");

  m.def("copy_assignment", [](const std::vector<std::string>& labels,
                              const std::vector<opcore::ComplexMatrix>&
                                  operators) {
    const auto arr =
        make_arrangement(labels, operators, labels.empty() ? "0" : labels[0],
                         std::nullopt);
    return arr.copy_assignment();
  }, py::arg("labels"), py::arg("operators"),
     "greedy minimal copy assignment for the given operators");

  m.def("solve_representing_operator",
        [](const std::vector<std::string>& labels,
           const std::vector<opcore::ComplexMatrix>& operators,
           const std::string& combining,
           const std::optional<std::vector<int>>& copies, double residual_tol,
           std::uint64_t seed) -> py::object {
          const auto arr =
              make_arrangement(labels, operators, combining, copies);
          const Eigen::Index dim = arr.dim();
          const auto result = arrange::solve_representing_operator(
              arr, dim, static_cast<int>(3 * dim * dim), residual_tol, seed);
          if (!result.feasible) return py::none();
          return py::cast(opcore::ComplexMatrix(result.op->matrix()));
        },
        py::arg("labels"), py::arg("operators"), py::arg("combining"),
        py::arg("copies") = std::nullopt, py::arg("residual_tol") = 1e-8,
        py::arg("seed") = 0,
        "Hermitian operator matching the arrangement's averages, or None");

  // ---- verification ----
  m.def("verify", [](std::uint64_t seed, const std::string& filter) {
    const auto records = verify::run_suites(seed, filter);
    py::list out;
    for (const auto& r : records) {
      out.append(py::make_tuple(r.module, r.name, r.max_err, r.tol, r.pass));
    }
    return out;
  }, py::arg("seed") = 20240101, py::arg("filter") = "",
     "run the module invariant suites; returns (module, name, err, tol, ok)");
}
