#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace avcp {

// Exact complex number with rational real and imaginary parts. Backed by GMP
// rationals so coefficient growth in polynomial expansions never overflows.
class RationalComplex {
public:
  RationalComplex() : re_(0), im_(0) {}
  RationalComplex(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  RationalComplex(const mpq_class& re) : re_(re), im_(0) {}
  RationalComplex(mpq_class re, mpq_class im)
      : re_(std::move(re)), im_(std::move(im)) {}

  static RationalComplex i() { return RationalComplex(mpq_class(0), mpq_class(1)); }
  static RationalComplex rational(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return RationalComplex(q);
  }

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  RationalComplex operator-() const { return {mpq_class(-re_), mpq_class(-im_)}; }

  RationalComplex& operator+=(const RationalComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  RationalComplex& operator-=(const RationalComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  RationalComplex& operator*=(const RationalComplex& o) {
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  RationalComplex& operator/=(const RationalComplex& o) {
    const mpq_class d = o.re_ * o.re_ + o.im_ * o.im_;
    if (d == 0) throw std::domain_error("division by zero RationalComplex");
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / d;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) {
    return a += b;
  }
  friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) {
    return a -= b;
  }
  friend RationalComplex operator*(RationalComplex a, const RationalComplex& b) {
    return a *= b;
  }
  friend RationalComplex operator/(RationalComplex a, const RationalComplex& b) {
    return a /= b;
  }
  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const RationalComplex& a, const RationalComplex& b) {
    return !(a == b);
  }

  std::complex<double> to_complex() const {
    return {re_.get_d(), im_.get_d()};
  }

  std::string str() const;

private:
  mpq_class re_, im_;
};

}  // namespace avcp
