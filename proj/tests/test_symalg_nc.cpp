#include <doctest.h>

#include "avcp/lineop_oracle.hpp"
#include "avcp/symalg.hpp"
#include "test_support.hpp"

using namespace avcp;
using namespace avcp::symalg;
using namespace avcp_test;

namespace {

struct XpFixture {
  AlgebraPtr alg;
  SymbolId x, p, g;
  lineop::LineRep rep;

  XpFixture() {
    auto a = std::make_shared<Algebra>();
    std::tie(x, p) = a->declare_canonical_pair("x", "p");
    g = a->declare_scalar("g");
    alg = a;
    rep = lineop::LineRep{x, p};
  }

  // nf(P) must act on x^k exactly like P itself for k = 0..kmax.
  bool normal_form_consistent(const NCPoly& poly, int kmax = 8) const {
    const NCPoly nf = nc_normal_form(poly);
    for (int k = 0; k <= kmax; ++k) {
      const auto basis = lineop::basis(alg, k);
      if (!lineop::equal(lineop::apply_ncpoly(poly, rep, basis),
                         lineop::apply_ncpoly(nf, rep, basis))) {
        return false;
      }
    }
    return true;
  }
};

}  // namespace

TEST_CASE("single rewrite p x -> x p - i hbar") {
  const XpFixture f;
  const NCPoly px = parse_operator("p*x", f.alg);
  const NCPoly expected = parse_operator("x*p - i*hbar", f.alg);
  CHECK(nc_normal_form(px) == expected);
  CHECK(f.normal_form_consistent(px));
}

TEST_CASE("normal form is idempotent and linear") {
  const XpFixture f;
  const NCPoly already = parse_operator("x^2*p + 3*x - 2", f.alg);
  CHECK(nc_normal_form(already) == already);

  const NCPoly a = parse_operator("p^2*x", f.alg);
  const NCPoly b = parse_operator("p*x*p", f.alg);
  CHECK(nc_normal_form(a + b) ==
        nc_normal_form(a) + nc_normal_form(b));
  CHECK(nc_normal_form(nc_normal_form(a)) == nc_normal_form(a));
}

TEST_CASE("normal form matches the differential-operator oracle") {
  const XpFixture f;
  RngStream rng(2024, 0);
  for (int trial = 0; trial < 24; ++trial) {
    NCPoly poly = NCPoly::zero(f.alg);
    const int terms = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int t = 0; t < terms; ++t) {
      Word w;
      const int len = 1 + static_cast<int>(rng.next_u64() % 4);
      for (int k = 0; k < len; ++k) {
        w.push_back((rng.next_u64() & 1) ? f.p : f.x);
      }
      const long c = static_cast<long>(rng.next_u64() % 9) - 4;
      poly += NCPoly::word(f.alg, w,
                           ClassicalPoly::constant(f.alg, RationalComplex(c)));
    }
    CHECK(f.normal_form_consistent(poly));
  }
}

TEST_CASE("noncommuting pair without scalar commutator is rejected") {
  auto alg = std::make_shared<Algebra>();
  const auto a = alg->declare_observable("a");
  const auto b = alg->declare_observable("b");
  alg->set_noncommuting(a, b);
  const NCPoly ba = parse_operator("b*a", alg);
  CHECK_THROWS_AS(nc_normal_form(ba), NonScalarCommutatorError);
  // Ordered input never needs the rewrite, so it passes through.
  const NCPoly ab = parse_operator("a*b", alg);
  CHECK(nc_normal_form(ab) == ab);
}

TEST_CASE("canonical commutators") {
  const XpFixture f;
  CHECK(nc_commutator(parse_operator("x", f.alg),
                      parse_operator("p", f.alg)) ==
        parse_operator("i*hbar", f.alg));
  CHECK(nc_commutator(parse_operator("p", f.alg),
                      parse_operator("p^2", f.alg))
            .is_zero());
}

TEST_CASE("cubic commutator against the oracle") {
  const XpFixture f;
  const NCPoly fx = parse_operator("x^3", f.alg);
  const NCPoly hp = parse_operator("g*p^3", f.alg);
  const NCPoly comm = nc_commutator(fx, hp);

  // The raw (un-normalized) difference must act identically, which pins the
  // expansion below independently of the rewriting code.
  CHECK(f.normal_form_consistent(fx * hp - hp * fx));

  // Frozen expansion, confirmed by the oracle run above:
  // [x^3, g p^3] = 9 i g hbar x^2 p^2 + 18 g hbar^2 x p - 6 i g hbar^3.
  const NCPoly expected = parse_operator(
      "9*i*g*hbar*x^2*p^2 + 18*g*hbar^2*x*p - 6*i*g*hbar^3", f.alg);
  CHECK(comm == expected);
}

TEST_CASE("bracket-commutator correspondence for simple pairs") {
  const XpFixture f;
  const std::vector<std::pair<SymbolId, SymbolId>> pairs{{f.x, f.p}};
  const ClassicalPoly ihbar = parse_classical("i*hbar", f.alg);

  // Hand-picked simple cases whose brackets stay simple.
  const std::vector<std::pair<std::string, std::string>> cases{
      {"x", "p"},
      {"x^2 + 3*x", "p"},
      {"p^2 - p", "x"},
      {"x + p", "x - p"},
      {"x^3", "p + 2*x"},
      {"2*p^3 + x", "x"},
  };
  for (const auto& [fs, hs] : cases) {
    const ClassicalPoly fc = parse_classical(fs, f.alg);
    const ClassicalPoly hc = parse_classical(hs, f.alg);
    const ClassicalPoly bracket = poisson(fc, hc, pairs);
    REQUIRE(is_simple(bracket).simple);
    const NCPoly lhs = nc_commutator(quantize(fc), quantize(hc));
    const NCPoly rhs = nc_normal_form(quantize(bracket).scaled(ihbar));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("non-simple bracket defect is the frozen constant") {
  const XpFixture f;
  const NCPoly comm = nc_commutator(parse_operator("x^3", f.alg),
                                    parse_operator("g*p^3", f.alg));
  const UnsoundNCPoly herm =
      hermitize_unsound(parse_classical("9*g*x^2", f.alg),
                        parse_classical("p^2", f.alg), {}, true);
  const NCPoly rhs =
      nc_normal_form(herm.poly.scaled(parse_classical("i*hbar", f.alg)));
  const NCPoly defect = comm - rhs;

  CHECK(defect.is_scalar_multiple_of_identity());
  // Oracle-confirmed value: the defect acts as multiplication by
  // 3 i g hbar^3 on every x^k.
  const NCPoly expected = parse_operator("3*i*g*hbar^3", f.alg);
  CHECK(defect == expected);
  for (int k = 0; k <= 6; ++k) {
    const auto basis = lineop::basis(f.alg, k);
    auto lhs_line = lineop::apply_ncpoly(comm, f.rep, basis);
    auto rhs_line = lineop::apply_ncpoly(rhs, f.rep, basis);
    if (lhs_line.size() < rhs_line.size()) {
      lhs_line.resize(rhs_line.size(), ClassicalPoly::zero(f.alg));
    }
    if (rhs_line.size() < lhs_line.size()) {
      rhs_line.resize(lhs_line.size(), ClassicalPoly::zero(f.alg));
    }
    lineop::LinePoly diff;
    for (std::size_t m = 0; m < lhs_line.size(); ++m) {
      diff.push_back(lhs_line[m] - rhs_line[m]);
    }
    CHECK(lineop::equal(diff, lineop::apply_ncpoly(expected, f.rep, basis)));
  }
}

TEST_CASE("nc_to_matrix evaluates words") {
  auto alg = std::make_shared<Algebra>();
  const auto a = alg->declare_observable("a");
  const auto b = alg->declare_observable("b");
  alg->set_noncommuting(a, b);

  const opcore::HermitianOperator sx =
      opcore::HermitianOperator::FromMatrix(sigma_x());
  const opcore::HermitianOperator sy =
      opcore::HermitianOperator::FromMatrix(sigma_y());
  const opcore::HermitianOperator sz =
      opcore::HermitianOperator::FromMatrix(sigma_z());
  const OperatorBindings xy{{a, sx}, {b, sy}};

  CHECK((nc_to_matrix(parse_operator("a", alg), xy) - sigma_x()).norm() <=
        1e-15);

  // Anticommutator of distinct Paulis vanishes.
  CHECK(nc_to_matrix(parse_operator("(a*b + b*a)/2", alg), xy).norm() <=
        1e-15);

  const OperatorBindings zz{{a, sz}};
  CHECK((nc_to_matrix(parse_operator("a^2", alg), zz) -
         ComplexMatrix::Identity(2, 2)).norm() <= 1e-15);

  CHECK_THROWS_AS(nc_to_matrix(parse_operator("a*b", alg), zz),
                  UnknownSymbolError);

  const OperatorBindings mixed{
      {a, sx},
      {b, opcore::HermitianOperator::FromMatrix(ComplexMatrix::Identity(3, 3))}};
  CHECK_THROWS_AS(nc_to_matrix(parse_operator("a*b", alg), mixed),
                  DimensionMismatchError);
}
