#include "avcp/rational.hpp"

namespace avcp {

namespace {
std::string rat_str(const mpq_class& q) { return q.get_str(); }
}  // namespace

std::string RationalComplex::str() const {
  if (im_ == 0) return rat_str(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = rat_str(im_) + "i";
  }
  if (re_ == 0) return imag;
  const std::string sign = im_ > 0 ? "+" : "";
  return "(" + rat_str(re_) + sign + imag + ")";
}

}  // namespace avcp
