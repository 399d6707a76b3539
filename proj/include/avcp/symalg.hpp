#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avcp/errors.hpp"
#include "avcp/opcore.hpp"
#include "avcp/rational.hpp"

namespace avcp::symalg {

using SymbolId = int;

enum class SymbolKind { Scalar, Observable };

class Monomial;
class ClassicalPoly;
class NCPoly;

using TermMap = std::map<Monomial, RationalComplex>;

// Symbol registry plus the commutation table over observable symbols.
// Scalars (hbar, coupling constants, masses) commute with everything and may
// carry negative exponents, so expressions like p^2/(2*m) stay exact.
// Observable pairs default to commuting; noncommuting pairs are declared
// explicitly, optionally with a scalar commutator [X,Y] = c*1 used by
// normal ordering. Precedence for canonical ordering is declaration order.
class Algebra : public std::enable_shared_from_this<Algebra> {
public:
  // "hbar" is always present as symbol 0.
  Algebra();

  SymbolId declare_scalar(const std::string& name);
  SymbolId declare_observable(const std::string& name);

  // Marks the pair noncommuting with no scalar commutator (free/opaque pair).
  void set_noncommuting(SymbolId a, SymbolId b);

  // Declares [a, b] = c * identity where c is a polynomial in scalar symbols.
  // Requires a declared before b (a has lower precedence index).
  void set_scalar_commutator(SymbolId a, SymbolId b, const ClassicalPoly& c);

  // Declares observables q, p (in that order) with [q, p] = i*hbar.
  std::pair<SymbolId, SymbolId> declare_canonical_pair(const std::string& q,
                                                       const std::string& p);

  SymbolId hbar() const { return 0; }

  std::optional<SymbolId> lookup(std::string_view name) const;
  SymbolId require(std::string_view name) const;
  const std::string& name(SymbolId s) const;
  SymbolKind kind(SymbolId s) const;
  int size() const { return static_cast<int>(symbols_.size()); }

  bool commute(SymbolId a, SymbolId b) const;
  // Commutator [a, b] as raw terms, or nullptr when the pair has none
  // declared. Only stored for a < b; callers negate for the swapped order.
  const TermMap* scalar_commutator_terms(SymbolId a, SymbolId b) const;

private:
  struct SymbolInfo {
    std::string name;
    SymbolKind kind;
  };
  struct Relation {
    bool commuting = true;
    std::optional<TermMap> commutator;  // for key pair (lo, hi): [lo, hi]
  };

  SymbolId declare(const std::string& name, SymbolKind kind);

  std::vector<SymbolInfo> symbols_;
  std::map<std::string, SymbolId, std::less<>> index_;
  std::map<std::pair<SymbolId, SymbolId>, Relation> relations_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Commutative product of symbol powers; exponents nonzero, negative only for
// scalar symbols. Sorted by symbol id, usable as an ordered map key.
class Monomial {
public:
  Monomial() = default;

  static Monomial unit() { return {}; }
  static Monomial symbol(SymbolId s, int exp = 1);

  Monomial times(const Monomial& o) const;
  Monomial inverse() const;  // for division by scalar monomials

  int exponent(SymbolId s) const;
  const std::vector<std::pair<SymbolId, int>>& factors() const {
    return factors_;
  }
  bool is_unit() const { return factors_.empty(); }
  int total_degree() const;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.factors_ == b.factors_;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.factors_ < b.factors_;
  }

  std::string str(const Algebra& alg) const;

private:
  std::vector<std::pair<SymbolId, int>> factors_;
};

// Commutative polynomial with exact complex-rational coefficients.
class ClassicalPoly {
public:
  ClassicalPoly() = default;  // zero over no algebra; assign before use

  static ClassicalPoly zero(AlgebraPtr alg);
  static ClassicalPoly constant(AlgebraPtr alg, const RationalComplex& c);
  static ClassicalPoly symbol(AlgebraPtr alg, SymbolId s);
  static ClassicalPoly monomial(AlgebraPtr alg, const Monomial& m,
                                const RationalComplex& c);
  static ClassicalPoly from_terms(AlgebraPtr alg, TermMap terms);

  const AlgebraPtr& algebra() const { return alg_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_scalar_only() const;
  // Single-term polynomial in scalar symbols only (a legal divisor).
  bool is_scalar_monomial() const;
  int degree() const;

  ClassicalPoly operator-() const;
  ClassicalPoly& operator+=(const ClassicalPoly& o);
  ClassicalPoly& operator-=(const ClassicalPoly& o);
  friend ClassicalPoly operator+(ClassicalPoly a, const ClassicalPoly& b) {
    return a += b;
  }
  friend ClassicalPoly operator-(ClassicalPoly a, const ClassicalPoly& b) {
    return a -= b;
  }
  friend ClassicalPoly operator*(const ClassicalPoly& a, const ClassicalPoly& b);
  ClassicalPoly scaled(const RationalComplex& c) const;
  ClassicalPoly pow(unsigned n) const;
  // Division by a single-term scalar-only polynomial; throws DomainError
  // otherwise.
  ClassicalPoly divided_by(const ClassicalPoly& divisor) const;

  ClassicalPoly derivative(SymbolId s) const;

  // Evaluates with the given symbol values; "hbar" defaults to 1 when not
  // bound. Throws UnknownSymbolError for any other unbound symbol.
  std::complex<double> evaluate(
      const std::map<SymbolId, std::complex<double>>& values) const;

  friend bool operator==(const ClassicalPoly& a, const ClassicalPoly& b) {
    return a.terms_ == b.terms_;
  }

  std::string str() const;

private:
  void prune();

  AlgebraPtr alg_;
  TermMap terms_;
};

// In coefficient positions a ClassicalPoly must satisfy is_scalar_only().
using ScalarPoly = ClassicalPoly;

// Ordered product of observable symbols.
using Word = std::vector<SymbolId>;

// Noncommutative polynomial: words of observable symbols with scalar-
// polynomial coefficients.
class NCPoly {
public:
  NCPoly() = default;

  static NCPoly zero(AlgebraPtr alg);
  static NCPoly constant(AlgebraPtr alg, const RationalComplex& c);
  static NCPoly scalar(const ScalarPoly& s);
  static NCPoly symbol(AlgebraPtr alg, SymbolId s);
  static NCPoly word(AlgebraPtr alg, Word w, const ScalarPoly& coeff);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::map<Word, ScalarPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // True when the only term is the empty word (a multiple of the identity).
  bool is_scalar_multiple_of_identity() const;

  NCPoly operator-() const;
  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b);
  NCPoly scaled(const RationalComplex& c) const;
  NCPoly scaled(const ScalarPoly& s) const;
  NCPoly pow(unsigned n) const;
  NCPoly divided_by(const ClassicalPoly& divisor) const;

  friend bool operator==(const NCPoly& a, const NCPoly& b) {
    return a.terms_ == b.terms_;
  }

  std::string str() const;

private:
  void prune();

  AlgebraPtr alg_;
  std::map<Word, ScalarPoly> terms_;
};

// ---- Parsing ----

// Grammar (both contexts):
//   expr   := ["-"] term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*     division only by scalar factors
//   factor := base ("^" uint)?
//   base   := number | ident | "(" expr ")"
//   number := integer | decimal              exact rational in either form
// Reserved identifiers: "hbar" (symbolic scalar), "i" (imaginary unit).
// Classical context multiplies commutatively; operator context preserves
// factor order.
ClassicalPoly parse_classical(std::string_view text, AlgebraPtr alg);
NCPoly parse_operator(std::string_view text, AlgebraPtr alg);

// ---- Classical operations ----

// Canonical Poisson bracket sum_i (dF/dq_i dH/dp_i - dH/dq_i dF/dp_i).
ClassicalPoly poisson(const ClassicalPoly& f, const ClassicalPoly& h,
                      const std::vector<std::pair<SymbolId, SymbolId>>& pairs);

struct SimplicityReport {
  bool simple = true;
  std::vector<Monomial> offenders;
};

// A polynomial is simple when no monomial mixes two observables whose
// operators do not commute; only simple polynomials have an operator
// counterpart under the average-value rules.
SimplicityReport is_simple(const ClassicalPoly& f);

using Bindings = std::map<SymbolId, SymbolId>;

// Maps a simple polynomial to its operator counterpart. `bindings` renames
// classical symbols to operator symbols; unmapped observables keep their id.
// Throws NotSimpleError (with offender monomials) otherwise.
NCPoly quantize(const ClassicalPoly& f, const Bindings& bindings = {});

// Result of the symmetrized product rule, kept only to demonstrate its
// inconsistencies; the wrapper marks every downstream use as unsound.
struct UnsoundNCPoly {
  NCPoly poly;
};

// (F1 F2 + F2 F1)/2 for a factored f = f1*f2. Both factors must be simple.
// Refuses to run unless the caller acknowledges the rule is unsound.
UnsoundNCPoly hermitize_unsound(const ClassicalPoly& f1,
                                const ClassicalPoly& f2,
                                const Bindings& bindings,
                                bool acknowledge_unsound);
// Grouping variant for iterated application, e.g. (A, result-of(AB)).
UnsoundNCPoly hermitize_unsound(const NCPoly& g1, const NCPoly& g2,
                                bool acknowledge_unsound);

// ---- Noncommutative operations ----

// Rewrites every word into canonical (declaration-precedence) order using the
// declared scalar commutators: YX -> XY - [X,Y]. Idempotent and linear.
// Throws NonScalarCommutatorError when a swap needs an undeclared pair.
NCPoly nc_normal_form(const NCPoly& p);

NCPoly nc_commutator(const NCPoly& p, const NCPoly& q);

using OperatorBindings = std::map<SymbolId, opcore::HermitianOperator>;
using ScalarValues = std::map<SymbolId, std::complex<double>>;

// Evaluates word-by-word as matrix products. Scalar symbols take values from
// `scalars` (hbar defaults to 1).
opcore::ComplexMatrix nc_to_matrix(const NCPoly& p,
                                   const OperatorBindings& ops,
                                   const ScalarValues& scalars = {});

}  // namespace avcp::symalg
