#include "tisim/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace tisim {

std::string format_decimal(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("cannot format a non-finite value");
  }
  if (x == 0.0) {
    return "0";
  }
  // Round to 12 significant digits first, then print that value in fixed notation.
  std::array<char, 64> sci{};
  auto res = std::to_chars(sci.data(), sci.data() + sci.size(), x, std::chars_format::scientific, 11);
  const double rounded = std::strtod(std::string(sci.data(), res.ptr).c_str(), nullptr);
  const int exponent = static_cast<int>(std::floor(std::log10(std::fabs(rounded))));
  const int decimals = std::max(0, 11 - exponent);

  std::array<char, 512> buf{};
  res = std::to_chars(buf.data(), buf.data() + buf.size(), rounded, std::chars_format::fixed, decimals);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("decimal formatting overflow");
  }
  std::string out(buf.data(), res.ptr);
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') {
      out.pop_back();
    }
    if (out.back() == '.') {
      out.pop_back();
    }
  }
  return out;
}

} // namespace tisim
