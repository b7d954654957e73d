#pragma once

#include <string>

namespace tisim {

/// Plain decimal rendering (never exponent notation) with at most 12
/// significant digits and no trailing zeros. Output depends only on the value.
[[nodiscard]] std::string format_decimal(double x);

} // namespace tisim
