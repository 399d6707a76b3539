#include <deque>

#include "avcp/symalg.hpp"

namespace avcp::symalg {

// ---- NCPoly ----

NCPoly NCPoly::zero(AlgebraPtr alg) {
  NCPoly p;
  p.alg_ = std::move(alg);
  return p;
}

NCPoly NCPoly::constant(AlgebraPtr alg, const RationalComplex& c) {
  return scalar(ClassicalPoly::constant(std::move(alg), c));
}

NCPoly NCPoly::scalar(const ScalarPoly& s) {
  if (!s.is_scalar_only()) {
    throw Error("NCPoly coefficient must be a scalar-only polynomial, got '" +
                s.str() + "'");
  }
  NCPoly p;
  p.alg_ = s.algebra();
  if (!s.is_zero()) p.terms_.emplace(Word{}, s);
  return p;
}

NCPoly NCPoly::symbol(AlgebraPtr alg, SymbolId s) {
  if (alg->kind(s) == SymbolKind::Scalar) {
    return scalar(ClassicalPoly::symbol(alg, s));
  }
  NCPoly p;
  p.alg_ = alg;
  p.terms_.emplace(Word{s}, ClassicalPoly::constant(alg, RationalComplex(1)));
  return p;
}

NCPoly NCPoly::word(AlgebraPtr alg, Word w, const ScalarPoly& coeff) {
  if (!coeff.is_scalar_only()) {
    throw Error("NCPoly coefficient must be a scalar-only polynomial");
  }
  NCPoly p;
  p.alg_ = std::move(alg);
  if (!coeff.is_zero()) p.terms_.emplace(std::move(w), coeff);
  return p;
}

bool NCPoly::is_scalar_multiple_of_identity() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.empty();
}

void NCPoly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
}

NCPoly NCPoly::operator-() const {
  NCPoly out = *this;
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  if (!alg_) alg_ = o.alg_;
  for (const auto& [w, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(w, c);
    if (!inserted) it->second += c;
  }
  prune();
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) { return *this += -o; }

NCPoly operator*(const NCPoly& a, const NCPoly& b) {
  NCPoly out = NCPoly::zero(a.alg_ ? a.alg_ : b.alg_);
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      const ClassicalPoly c = ca * cb;
      auto [it, inserted] = out.terms_.emplace(std::move(w), c);
      if (!inserted) it->second += c;
    }
  }
  out.prune();
  return out;
}

NCPoly NCPoly::scaled(const RationalComplex& c) const {
  NCPoly out = *this;
  for (auto& [w, coef] : out.terms_) coef = coef.scaled(c);
  out.prune();
  return out;
}

NCPoly NCPoly::scaled(const ScalarPoly& s) const {
  if (!s.is_scalar_only()) {
    throw Error("NCPoly scale factor must be scalar-only");
  }
  NCPoly out = zero(alg_);
  for (const auto& [w, coef] : terms_) {
    const ClassicalPoly c = coef * s;
    auto [it, inserted] = out.terms_.emplace(w, c);
    if (!inserted) it->second += c;
  }
  out.prune();
  return out;
}

NCPoly NCPoly::pow(unsigned n) const {
  NCPoly out = constant(alg_, RationalComplex(1));
  for (unsigned k = 0; k < n; ++k) out = out * *this;
  return out;
}

NCPoly NCPoly::divided_by(const ClassicalPoly& divisor) const {
  NCPoly out = zero(alg_);
  for (const auto& [w, coef] : terms_) {
    out.terms_.emplace(w, coef.divided_by(divisor));
  }
  out.prune();
  return out;
}

std::string NCPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [w, coef] : terms_) {
    if (!out.empty()) out += " + ";
    std::string word_str;
    for (SymbolId s : w) {
      if (!word_str.empty()) word_str += "*";
      word_str += alg_->name(s);
    }
    if (w.empty()) {
      out += "(" + coef.str() + ")";
    } else {
      out += "(" + coef.str() + ")*" + word_str;
    }
  }
  return out;
}

// ---- Normal form ----

namespace {

// First adjacent position where the word violates precedence order, or -1.
int first_inversion(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] > w[i + 1]) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

NCPoly nc_normal_form(const NCPoly& p) {
  const AlgebraPtr& alg = p.algebra();
  NCPoly out = NCPoly::zero(alg);

  std::deque<std::pair<Word, ScalarPoly>> work(p.terms().begin(),
                                               p.terms().end());
  while (!work.empty()) {
    auto [w, coef] = std::move(work.front());
    work.pop_front();
    if (coef.is_zero()) continue;

    const int i = first_inversion(w);
    if (i < 0) {
      out += NCPoly::word(alg, std::move(w), coef);
      continue;
    }

    // w = u Y X v with precedence(X) < precedence(Y).
    const SymbolId y = w[static_cast<std::size_t>(i)];
    const SymbolId x = w[static_cast<std::size_t>(i) + 1];
    if (alg->commute(x, y)) {
      std::swap(w[static_cast<std::size_t>(i)],
                w[static_cast<std::size_t>(i) + 1]);
      work.emplace_back(std::move(w), std::move(coef));
      continue;
    }
    const TermMap* comm = alg->scalar_commutator_terms(x, y);
    if (comm == nullptr) {
      throw NonScalarCommutatorError(
          "no scalar commutator declared for noncommuting pair (" +
          alg->name(x) + ", " + alg->name(y) + ")");
    }
    // YX = XY - [X,Y].
    Word swapped = w;
    std::swap(swapped[static_cast<std::size_t>(i)],
              swapped[static_cast<std::size_t>(i) + 1]);
    work.emplace_back(std::move(swapped), coef);

    Word shortened = w;
    shortened.erase(shortened.begin() + i, shortened.begin() + i + 2);
    const ClassicalPoly c =
        coef * ClassicalPoly::from_terms(alg, *comm);
    work.emplace_back(std::move(shortened), -c);
  }
  return out;
}

NCPoly nc_commutator(const NCPoly& p, const NCPoly& q) {
  return nc_normal_form(p * q - q * p);
}

opcore::ComplexMatrix nc_to_matrix(const NCPoly& p, const OperatorBindings& ops,
                                   const ScalarValues& scalars) {
  const AlgebraPtr& alg = p.algebra();
  if (!alg) throw Error("nc_to_matrix: polynomial carries no algebra");

  Eigen::Index dim = -1;
  for (const auto& [sym, op] : ops) {
    if (dim < 0) {
      dim = op.dim();
    } else if (op.dim() != dim) {
      throw DimensionMismatchError("operator bindings have mixed dimensions");
    }
  }
  if (dim < 0) {
    throw Error("nc_to_matrix: no operator bindings supplied");
  }

  std::map<SymbolId, std::complex<double>> values = scalars;
  opcore::ComplexMatrix total = opcore::ComplexMatrix::Zero(dim, dim);
  for (const auto& [w, coef] : p.terms()) {
    opcore::ComplexMatrix prod =
        opcore::ComplexMatrix::Identity(dim, dim);
    for (SymbolId s : w) {
      auto it = ops.find(s);
      if (it == ops.end()) {
        throw UnknownSymbolError("no operator bound for symbol '" +
                                 alg->name(s) + "'");
      }
      prod = prod * it->second.matrix();
    }
    total += coef.evaluate(values) * prod;
  }
  return total;
}

}  // namespace avcp::symalg
