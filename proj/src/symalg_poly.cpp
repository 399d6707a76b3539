#include <algorithm>
#include <cmath>

#include "avcp/symalg.hpp"

namespace avcp::symalg {

// ---- Algebra ----

Algebra::Algebra() { declare("hbar", SymbolKind::Scalar); }

SymbolId Algebra::declare(const std::string& name, SymbolKind kind) {
  if (name.empty()) throw Error("symbol name must be nonempty");
  if (name == "i") throw Error("'i' is reserved for the imaginary unit");
  if (auto it = index_.find(name); it != index_.end()) {
    if (symbols_[it->second].kind != kind) {
      throw Error("symbol '" + name + "' already declared with another kind");
    }
    return it->second;
  }
  const SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(SymbolInfo{name, kind});
  index_.emplace(name, id);
  return id;
}

SymbolId Algebra::declare_scalar(const std::string& name) {
  return declare(name, SymbolKind::Scalar);
}

SymbolId Algebra::declare_observable(const std::string& name) {
  return declare(name, SymbolKind::Observable);
}

void Algebra::set_noncommuting(SymbolId a, SymbolId b) {
  if (a == b) throw Error("a symbol cannot fail to commute with itself");
  if (kind(a) != SymbolKind::Observable || kind(b) != SymbolKind::Observable) {
    throw Error("commutation relations apply to observable symbols only");
  }
  const auto key = std::minmax(a, b);
  relations_[{key.first, key.second}] = Relation{false, std::nullopt};
}

void Algebra::set_scalar_commutator(SymbolId a, SymbolId b,
                                    const ClassicalPoly& c) {
  if (a >= b) {
    throw Error(
        "scalar commutator must be declared with the lower-precedence symbol "
        "first");
  }
  if (kind(a) != SymbolKind::Observable || kind(b) != SymbolKind::Observable) {
    throw Error("commutation relations apply to observable symbols only");
  }
  if (!c.is_scalar_only()) {
    throw Error("commutator value must be a polynomial in scalar symbols");
  }
  relations_[{a, b}] = Relation{c.is_zero(), c.terms()};
}

std::pair<SymbolId, SymbolId> Algebra::declare_canonical_pair(
    const std::string& q, const std::string& p) {
  const SymbolId qi = declare_observable(q);
  const SymbolId pi = declare_observable(p);
  if (qi >= pi) {
    throw Error("canonical pair must declare q before p");
  }
  TermMap ihbar;
  ihbar.emplace(Monomial::symbol(hbar()), RationalComplex::i());
  relations_[{qi, pi}] = Relation{false, std::move(ihbar)};
  return {qi, pi};
}

std::optional<SymbolId> Algebra::lookup(std::string_view name) const {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  return std::nullopt;
}

SymbolId Algebra::require(std::string_view name) const {
  if (auto id = lookup(name)) return *id;
  throw UnknownSymbolError("unknown symbol '" + std::string(name) + "'");
}

const std::string& Algebra::name(SymbolId s) const {
  return symbols_.at(static_cast<std::size_t>(s)).name;
}

SymbolKind Algebra::kind(SymbolId s) const {
  return symbols_.at(static_cast<std::size_t>(s)).kind;
}

bool Algebra::commute(SymbolId a, SymbolId b) const {
  if (a == b) return true;
  if (kind(a) == SymbolKind::Scalar || kind(b) == SymbolKind::Scalar) {
    return true;
  }
  const auto key = std::minmax(a, b);
  if (auto it = relations_.find({key.first, key.second});
      it != relations_.end()) {
    return it->second.commuting;
  }
  return true;  // undeclared pairs default to commuting
}

const TermMap* Algebra::scalar_commutator_terms(SymbolId a, SymbolId b) const {
  if (a >= b) throw Error("scalar_commutator_terms expects a < b");
  if (auto it = relations_.find({a, b}); it != relations_.end()) {
    return it->second.commutator ? &*it->second.commutator : nullptr;
  }
  return nullptr;
}

// ---- Monomial ----

Monomial Monomial::symbol(SymbolId s, int exp) {
  Monomial m;
  if (exp != 0) m.factors_.emplace_back(s, exp);
  return m;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial out;
  auto a = factors_.begin();
  auto b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      const int e = a->second + b->second;
      if (e != 0) out.factors_.emplace_back(a->first, e);
      ++a;
      ++b;
    }
  }
  return out;
}

Monomial Monomial::inverse() const {
  Monomial out;
  out.factors_ = factors_;
  for (auto& [s, e] : out.factors_) e = -e;
  return out;
}

int Monomial::exponent(SymbolId s) const {
  for (const auto& [sym, e] : factors_) {
    if (sym == s) return e;
  }
  return 0;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& [sym, e] : factors_) d += e;
  return d;
}

std::string Monomial::str(const Algebra& alg) const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [sym, e] : factors_) {
    if (!out.empty()) out += "*";
    out += alg.name(sym);
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---- ClassicalPoly ----

ClassicalPoly ClassicalPoly::zero(AlgebraPtr alg) {
  ClassicalPoly p;
  p.alg_ = std::move(alg);
  return p;
}

ClassicalPoly ClassicalPoly::constant(AlgebraPtr alg, const RationalComplex& c) {
  return monomial(std::move(alg), Monomial::unit(), c);
}

ClassicalPoly ClassicalPoly::symbol(AlgebraPtr alg, SymbolId s) {
  return monomial(std::move(alg), Monomial::symbol(s), RationalComplex(1));
}

ClassicalPoly ClassicalPoly::monomial(AlgebraPtr alg, const Monomial& m,
                                      const RationalComplex& c) {
  ClassicalPoly p;
  p.alg_ = std::move(alg);
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

ClassicalPoly ClassicalPoly::from_terms(AlgebraPtr alg, TermMap terms) {
  ClassicalPoly p;
  p.alg_ = std::move(alg);
  p.terms_ = std::move(terms);
  p.prune();
  return p;
}

void ClassicalPoly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
}

bool ClassicalPoly::is_scalar_only() const {
  for (const auto& [mono, coef] : terms_) {
    for (const auto& [sym, e] : mono.factors()) {
      if (alg_->kind(sym) != SymbolKind::Scalar) return false;
    }
  }
  return true;
}

bool ClassicalPoly::is_scalar_monomial() const {
  return terms_.size() == 1 && is_scalar_only();
}

int ClassicalPoly::degree() const {
  int d = 0;
  for (const auto& [mono, coef] : terms_) {
    d = std::max(d, mono.total_degree());
  }
  return d;
}

ClassicalPoly ClassicalPoly::operator-() const {
  ClassicalPoly out = *this;
  for (auto& [mono, coef] : out.terms_) coef = -coef;
  return out;
}

ClassicalPoly& ClassicalPoly::operator+=(const ClassicalPoly& o) {
  if (!alg_) alg_ = o.alg_;
  for (const auto& [mono, coef] : o.terms_) {
    auto [it, inserted] = terms_.emplace(mono, coef);
    if (!inserted) it->second += coef;
  }
  prune();
  return *this;
}

ClassicalPoly& ClassicalPoly::operator-=(const ClassicalPoly& o) {
  return *this += -o;
}

ClassicalPoly operator*(const ClassicalPoly& a, const ClassicalPoly& b) {
  ClassicalPoly out = ClassicalPoly::zero(a.alg_ ? a.alg_ : b.alg_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      const Monomial m = ma.times(mb);
      const RationalComplex c = ca * cb;
      auto [it, inserted] = out.terms_.emplace(m, c);
      if (!inserted) it->second += c;
    }
  }
  out.prune();
  return out;
}

ClassicalPoly ClassicalPoly::scaled(const RationalComplex& c) const {
  ClassicalPoly out = *this;
  for (auto& [mono, coef] : out.terms_) coef *= c;
  out.prune();
  return out;
}

ClassicalPoly ClassicalPoly::pow(unsigned n) const {
  ClassicalPoly out = constant(alg_, RationalComplex(1));
  for (unsigned k = 0; k < n; ++k) out = out * *this;
  return out;
}

ClassicalPoly ClassicalPoly::divided_by(const ClassicalPoly& divisor) const {
  if (!divisor.is_scalar_monomial()) {
    throw DomainError(
        "division is only defined by a single scalar monomial, got '" +
        divisor.str() + "'");
  }
  const auto& [mono, coef] = *divisor.terms_.begin();
  const Monomial inv = mono.inverse();
  ClassicalPoly out = zero(alg_);
  for (const auto& [m, c] : terms_) {
    out.terms_.emplace(m.times(inv), c / coef);
  }
  out.prune();
  return out;
}

ClassicalPoly ClassicalPoly::derivative(SymbolId s) const {
  ClassicalPoly out = zero(alg_);
  for (const auto& [mono, coef] : terms_) {
    const int e = mono.exponent(s);
    if (e == 0) continue;
    if (e < 0) {
      throw DomainError("derivative of a negative power of '" +
                        alg_->name(s) + "'");
    }
    const Monomial m = mono.times(Monomial::symbol(s, -1));
    const RationalComplex c = coef * RationalComplex(e);
    auto [it, inserted] = out.terms_.emplace(m, c);
    if (!inserted) it->second += c;
  }
  out.prune();
  return out;
}

std::complex<double> ClassicalPoly::evaluate(
    const std::map<SymbolId, std::complex<double>>& values) const {
  std::complex<double> total = 0.0;
  for (const auto& [mono, coef] : terms_) {
    std::complex<double> term = coef.to_complex();
    for (const auto& [sym, e] : mono.factors()) {
      std::complex<double> v;
      if (auto it = values.find(sym); it != values.end()) {
        v = it->second;
      } else if (sym == alg_->hbar()) {
        v = 1.0;
      } else {
        throw UnknownSymbolError("no value bound for symbol '" +
                                 alg_->name(sym) + "'");
      }
      term *= std::pow(v, e);
    }
    total += term;
  }
  return total;
}

std::string ClassicalPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [mono, coef] : terms_) {
    if (!out.empty()) out += " + ";
    if (mono.is_unit()) {
      out += coef.str();
    } else if (coef == RationalComplex(1)) {
      out += mono.str(*alg_);
    } else {
      out += coef.str() + "*" + mono.str(*alg_);
    }
  }
  return out;
}

// ---- Classical operations ----

ClassicalPoly poisson(const ClassicalPoly& f, const ClassicalPoly& h,
                      const std::vector<std::pair<SymbolId, SymbolId>>& pairs) {
  const AlgebraPtr alg = f.algebra() ? f.algebra() : h.algebra();
  if (!alg) throw Error("poisson: polynomials carry no algebra");

  // Every observable symbol must be one of the canonical coordinates.
  auto check_coords = [&](const ClassicalPoly& p) {
    for (const auto& [mono, coef] : p.terms()) {
      for (const auto& [sym, e] : mono.factors()) {
        if (alg->kind(sym) == SymbolKind::Scalar) continue;
        bool found = false;
        for (const auto& [q, pp] : pairs) {
          if (sym == q || sym == pp) {
            found = true;
            break;
          }
        }
        if (!found) {
          throw UnknownSymbolError("symbol '" + alg->name(sym) +
                                   "' is not a canonical coordinate");
        }
      }
    }
  };
  check_coords(f);
  check_coords(h);

  ClassicalPoly out = ClassicalPoly::zero(alg);
  for (const auto& [q, p] : pairs) {
    out += f.derivative(q) * h.derivative(p) - h.derivative(q) * f.derivative(p);
  }
  return out;
}

SimplicityReport is_simple(const ClassicalPoly& f) {
  SimplicityReport report;
  const AlgebraPtr& alg = f.algebra();
  for (const auto& [mono, coef] : f.terms()) {
    bool offends = false;
    const auto& factors = mono.factors();
    for (std::size_t a = 0; a < factors.size() && !offends; ++a) {
      for (std::size_t b = a + 1; b < factors.size() && !offends; ++b) {
        if (!alg->commute(factors[a].first, factors[b].first)) offends = true;
      }
    }
    if (offends) {
      report.simple = false;
      report.offenders.push_back(mono);
    }
  }
  return report;
}

NCPoly quantize(const ClassicalPoly& f, const Bindings& bindings) {
  const SimplicityReport report = is_simple(f);
  const AlgebraPtr& alg = f.algebra();
  if (!report.simple) {
    std::vector<std::string> names;
    names.reserve(report.offenders.size());
    for (const auto& m : report.offenders) names.push_back(m.str(*alg));
    std::string what = "polynomial is not simple; offending monomials:";
    for (const auto& n : names) what += " " + n;
    throw NotSimpleError(what, std::move(names));
  }

  NCPoly out = NCPoly::zero(alg);
  for (const auto& [mono, coef] : f.terms()) {
    Monomial scalar_part;
    Word word;
    for (const auto& [sym, e] : mono.factors()) {
      if (alg->kind(sym) == SymbolKind::Scalar) {
        scalar_part = scalar_part.times(Monomial::symbol(sym, e));
        continue;
      }
      SymbolId target = sym;
      if (auto it = bindings.find(sym); it != bindings.end()) {
        target = it->second;
      }
      if (alg->kind(target) == SymbolKind::Scalar) {
        throw Error("binding maps observable '" + alg->name(sym) +
                    "' to a scalar symbol");
      }
      if (e < 0) {
        throw DomainError("negative power of observable '" + alg->name(sym) +
                          "' cannot be quantized");
      }
      for (int k = 0; k < e; ++k) word.push_back(target);
    }
    // All factors commute pairwise (f is simple), so sorting into precedence
    // order is harmless and makes the word canonical.
    std::sort(word.begin(), word.end());
    out += NCPoly::word(alg, std::move(word),
                        ClassicalPoly::monomial(alg, scalar_part, coef));
  }
  return out;
}

UnsoundNCPoly hermitize_unsound(const ClassicalPoly& f1,
                                const ClassicalPoly& f2,
                                const Bindings& bindings,
                                bool acknowledge_unsound) {
  if (!acknowledge_unsound) {
    throw FlagMissingError(
        "hermitize_unsound requires acknowledge_unsound=true");
  }
  return hermitize_unsound(quantize(f1, bindings), quantize(f2, bindings),
                           true);
}

UnsoundNCPoly hermitize_unsound(const NCPoly& g1, const NCPoly& g2,
                                bool acknowledge_unsound) {
  if (!acknowledge_unsound) {
    throw FlagMissingError(
        "hermitize_unsound requires acknowledge_unsound=true");
  }
  const NCPoly sym = (g1 * g2 + g2 * g1).scaled(RationalComplex::rational(1, 2));
  return UnsoundNCPoly{sym};
}

}  // namespace avcp::symalg
