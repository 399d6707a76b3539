#pragma once

#include <vector>

#include "avcp/symalg.hpp"

// Ground-truth representation of one canonical pair: the position symbol
// acts as multiplication by x and the momentum symbol as -i hbar d/dx on
// polynomials in x. Normal ordering is never consulted, so results obtained
// here are an independent check of nc_normal_form and of any constants it
// produces. Coefficients stay exact (scalar polynomials in hbar and friends).
namespace avcp::symalg::lineop {

// coeffs[k] multiplies x^k.
using LinePoly = std::vector<ClassicalPoly>;

struct LineRep {
  SymbolId x;
  SymbolId p;
};

inline LinePoly basis(const AlgebraPtr& alg, int k) {
  LinePoly out(static_cast<std::size_t>(k) + 1, ClassicalPoly::zero(alg));
  out.back() = ClassicalPoly::constant(alg, RationalComplex(1));
  return out;
}

inline LinePoly trim(LinePoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

inline LinePoly apply_symbol(const AlgebraPtr& alg, const LineRep& rep,
                             SymbolId s, const LinePoly& in) {
  if (s == rep.x) {
    LinePoly out(in.size() + 1, ClassicalPoly::zero(alg));
    for (std::size_t k = 0; k < in.size(); ++k) out[k + 1] = in[k];
    return out;
  }
  if (s == rep.p) {
    if (in.size() <= 1) return {};
    const ClassicalPoly minus_i_hbar =
        ClassicalPoly::symbol(alg, alg->hbar())
            .scaled(-RationalComplex::i());
    LinePoly out(in.size() - 1, ClassicalPoly::zero(alg));
    for (std::size_t k = 1; k < in.size(); ++k) {
      out[k - 1] =
          in[k].scaled(RationalComplex(static_cast<long>(k))) * minus_i_hbar;
    }
    return out;
  }
  throw Error("line representation only covers the declared (x, p) pair");
}

inline LinePoly apply_word(const AlgebraPtr& alg, const LineRep& rep,
                           const Word& w, const LinePoly& in) {
  LinePoly cur = in;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    cur = apply_symbol(alg, rep, *it, cur);
  }
  return cur;
}

inline LinePoly apply_ncpoly(const NCPoly& p, const LineRep& rep,
                             const LinePoly& in) {
  const AlgebraPtr& alg = p.algebra();
  LinePoly total;
  for (const auto& [w, coef] : p.terms()) {
    LinePoly part = apply_word(alg, rep, w, in);
    for (auto& c : part) c = c * coef;
    if (part.size() > total.size()) {
      total.resize(part.size(), ClassicalPoly::zero(alg));
    }
    for (std::size_t k = 0; k < part.size(); ++k) total[k] += part[k];
  }
  return trim(std::move(total));
}

inline bool equal(const LinePoly& a, const LinePoly& b) {
  const LinePoly ta = trim(a);
  const LinePoly tb = trim(b);
  if (ta.size() != tb.size()) return false;
  for (std::size_t k = 0; k < ta.size(); ++k) {
    if (!(ta[k] == tb[k])) return false;
  }
  return true;
}

}  // namespace avcp::symalg::lineop
