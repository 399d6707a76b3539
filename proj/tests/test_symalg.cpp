#include <doctest.h>

#include "avcp/symalg.hpp"
#include "test_support.hpp"

using namespace avcp;
using namespace avcp::symalg;

namespace {

AlgebraPtr xp_algebra() {
  auto alg = std::make_shared<Algebra>();
  alg->declare_canonical_pair("x", "p");
  alg->declare_scalar("m");
  alg->declare_scalar("k");
  alg->declare_scalar("c");
  alg->declare_scalar("g");
  alg->declare_scalar("eps");
  return alg;
}

}  // namespace

TEST_CASE("parser accepts the grammar") {
  const AlgebraPtr alg = xp_algebra();

  const ClassicalPoly h = parse_classical("p^2/(2*m) + k*x^2", alg);
  CHECK(h.terms().size() == 2);

  // Operator context keeps factor order: x*p and p*x are distinct words.
  const NCPoly comm_expr = parse_operator("x*p - p*x", alg);
  CHECK(comm_expr.terms().size() == 2);

  // Exact rationals from integer and decimal literals.
  const ClassicalPoly q = parse_classical("3/4 + 0.25", alg);
  CHECK(q == ClassicalPoly::constant(alg, RationalComplex(1)));

  const ClassicalPoly ix = parse_classical("i*x - i*x", alg);
  CHECK(ix.is_zero());
}

TEST_CASE("parser rejects malformed input with positions") {
  const AlgebraPtr alg = xp_algebra();

  try {
    parse_classical("x +* p", alg);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 3);
  }

  CHECK_THROWS_AS(parse_classical("x + unknown_sym", alg),
                  UnknownSymbolError);
  CHECK_THROWS_AS(parse_classical("x/(p)", alg), ParseError);   // non-scalar divisor
  CHECK_THROWS_AS(parse_classical("(x", alg), ParseError);
  CHECK_THROWS_AS(parse_operator("x^", alg), ParseError);
}

TEST_CASE("poisson bracket on canonical pairs") {
  const AlgebraPtr alg = xp_algebra();
  const auto x = alg->require("x");
  const auto p = alg->require("p");
  const std::vector<std::pair<SymbolId, SymbolId>> pairs{{x, p}};

  CHECK(poisson(parse_classical("x", alg), parse_classical("p", alg), pairs) ==
        parse_classical("1", alg));

  CHECK(poisson(parse_classical("x", alg), parse_classical("c*p", alg),
                pairs) == parse_classical("c", alg));

  CHECK(poisson(parse_classical("x^3", alg), parse_classical("g*p^3", alg),
                pairs) == parse_classical("9*g*x^2*p^2", alg));

  // Symbols outside the canonical set are rejected.
  auto other = std::make_shared<Algebra>();
  other->declare_canonical_pair("x", "p");
  other->declare_observable("y");
  CHECK_THROWS_AS(
      poisson(parse_classical("y", other), parse_classical("x", other),
              {{other->require("x"), other->require("p")}}),
      UnknownSymbolError);
}

TEST_CASE("simplicity detection") {
  auto alg = std::make_shared<Algebra>();
  const auto a = alg->declare_observable("a");
  const auto b = alg->declare_observable("b");

  SUBCASE("noncommuting pair") {
    alg->set_noncommuting(a, b);
    CHECK(is_simple(parse_classical("a + b", alg)).simple);
    CHECK(is_simple(parse_classical("a^2 + 3*b", alg)).simple);

    const auto rep = is_simple(parse_classical("a*b + a", alg));
    CHECK_FALSE(rep.simple);
    REQUIRE(rep.offenders.size() == 1);
    CHECK(rep.offenders[0].str(*alg) == "a*b");
  }

  SUBCASE("commuting pair") {
    CHECK(is_simple(parse_classical("a*b", alg)).simple);
  }
}

TEST_CASE("quantization of simple polynomials") {
  const AlgebraPtr alg = xp_algebra();

  // Scalar multiples map through: c p -> c P.
  CHECK(quantize(parse_classical("c*p", alg)) ==
        parse_operator("c*p", alg));

  // Affine shift: x + eps -> X + eps 1.
  CHECK(quantize(parse_classical("x + eps", alg)) ==
        parse_operator("x + eps", alg));

  // Products of noncommuting observables are refused with the offender.
  auto free_alg = std::make_shared<Algebra>();
  const auto a = free_alg->declare_observable("a");
  const auto b = free_alg->declare_observable("b");
  free_alg->set_noncommuting(a, b);
  try {
    quantize(parse_classical("a*b", free_alg));
    FAIL("expected NotSimpleError");
  } catch (const NotSimpleError& e) {
    REQUIRE(e.offenders().size() == 1);
    CHECK(e.offenders()[0] == "a*b");
  }

  // Commuting products keep the plain product rule.
  auto comm_alg = std::make_shared<Algebra>();
  comm_alg->declare_observable("a");
  comm_alg->declare_observable("b");
  CHECK(quantize(parse_classical("a*b", comm_alg)) ==
        parse_operator("a*b", comm_alg));
}

TEST_CASE("bindings rename classical symbols to operator symbols") {
  auto alg = std::make_shared<Algebra>();
  const auto a = alg->declare_observable("a");
  const auto op = alg->declare_observable("A_op");
  const NCPoly mapped = quantize(parse_classical("a^2 + 2*a", alg), {{a, op}});
  CHECK(mapped == parse_operator("A_op^2 + 2*A_op", alg));
}

TEST_CASE("symmetrized product rule and its groupings") {
  auto alg = std::make_shared<Algebra>();
  const auto a = alg->declare_observable("a");
  const auto b = alg->declare_observable("b");
  alg->set_noncommuting(a, b);

  const ClassicalPoly fa = parse_classical("a", alg);
  const ClassicalPoly fa2 = parse_classical("a^2", alg);
  const ClassicalPoly fb = parse_classical("b", alg);

  // The flag is mandatory.
  CHECK_THROWS_AS(hermitize_unsound(fa, fb, {}, false), FlagMissingError);

  // a b -> (AB + BA)/2.
  const UnsoundNCPoly ab = hermitize_unsound(fa, fb, {}, true);
  CHECK(ab.poly == parse_operator("(a*b + b*a)/2", alg));

  // Grouping (a, result-of(ab)): (1/4)(A^2 B + 2 A B A + B A^2).
  const UnsoundNCPoly grouped1 =
      hermitize_unsound(quantize(fa), ab.poly, true);
  CHECK(grouped1.poly ==
        parse_operator("(a^2*b + 2*a*b*a + b*a^2)/4", alg));

  // Grouping (a^2, b): (1/2)(A^2 B + B A^2).
  const UnsoundNCPoly grouped2 = hermitize_unsound(fa2, fb, {}, true);
  CHECK(grouped2.poly == parse_operator("(a^2*b + b*a^2)/2", alg));

  // The groupings are inequivalent; the gap is the double commutator.
  const NCPoly na = NCPoly::symbol(alg, a);
  const NCPoly nb = NCPoly::symbol(alg, b);
  const NCPoly inner = na * nb - nb * na;
  const NCPoly reference =
      (na * inner - inner * na).scaled(RationalComplex::rational(-1, 4));
  CHECK(grouped1.poly - grouped2.poly == reference);
  CHECK_FALSE(grouped1.poly == grouped2.poly);
}

TEST_CASE("classical polynomial arithmetic stays exact") {
  const AlgebraPtr alg = xp_algebra();
  const ClassicalPoly f = parse_classical("x^2/3 + 2*p - 1/6", alg);

  // 18*(x^2/3 + 2p - 1/6) = 6x^2 + 36p - 3, exactly.
  CHECK(f.scaled(RationalComplex(18)) ==
        parse_classical("6*x^2 + 36*p - 3", alg));

  CHECK(f.derivative(alg->require("x")) == parse_classical("2*x/3", alg));
  CHECK(f.derivative(alg->require("p")) == parse_classical("2", alg));

  const auto val = parse_classical("x^2 + i*p", alg).evaluate(
      {{alg->require("x"), {2.0, 0.0}}, {alg->require("p"), {0.0, 1.0}}});
  CHECK(val.real() == doctest::Approx(3.0));  // 4 + i*(i) = 4 - 1
  CHECK(val.imag() == doctest::Approx(0.0));
}
