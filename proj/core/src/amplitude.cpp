#include "tisim/amplitude.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace tisim {

Amplitude::Amplitude(double re, double im) : re_(re), im_(im) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw std::domain_error("amplitude components must be finite");
  }
}

Amplitude conj(const Amplitude& a) { return {a.re(), -a.im()}; }

double norm_sq(const Amplitude& a) { return a.re() * a.re() + a.im() * a.im(); }

Amplitude mul(const Amplitude& a, const Amplitude& b) {
  return {a.re() * b.re() - a.im() * b.im(), a.re() * b.im() + a.im() * b.re()};
}

Amplitude scale(const Amplitude& a, double factor) {
  return {a.re() * factor, a.im() * factor};
}

Amplitude add(const Amplitude& a, const Amplitude& b) {
  return {a.re() + b.re(), a.im() + b.im()};
}

std::ostream& operator<<(std::ostream& os, const Amplitude& a) {
  return os << '(' << a.re() << ", " << a.im() << ')';
}


} // namespace tisim
