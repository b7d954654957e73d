#pragma once

#include <iosfwd>

namespace tisim {

/// Complex wave amplitude. Construction rejects NaN and infinities, so every
/// stored value is finite.
class Amplitude {
public:
  Amplitude() = default;
  Amplitude(double re, double im);

  [[nodiscard]] double re() const noexcept { return re_; }
  [[nodiscard]] double im() const noexcept { return im_; }

  friend bool operator==(const Amplitude&, const Amplitude&) = default;

private:
  double re_ = 0.0;
  double im_ = 0.0;
};

[[nodiscard]] Amplitude conj(const Amplitude& a);
[[nodiscard]] double norm_sq(const Amplitude& a);
[[nodiscard]] Amplitude mul(const Amplitude& a, const Amplitude& b);
[[nodiscard]] Amplitude scale(const Amplitude& a, double factor);
[[nodiscard]] Amplitude add(const Amplitude& a, const Amplitude& b);

std::ostream& operator<<(std::ostream& os, const Amplitude& a);

} // namespace tisim
