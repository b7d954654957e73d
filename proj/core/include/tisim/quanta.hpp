#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string_view>

namespace tisim {

enum class Quantity { Energy, Momentum, SpinZ };

inline constexpr std::array<Quantity, 3> kAllQuantities{Quantity::Energy, Quantity::Momentum,
                                                        Quantity::SpinZ};

[[nodiscard]] std::string_view to_string(Quantity q) noexcept;

/// Exact integer conserved quantities moved by one transaction.
/// spin_z is counted in units of hbar/2.
struct QuantaBundle {
  std::int64_t energy = 0;
  std::int64_t momentum = 0;
  std::int64_t spin_z = 0;

  [[nodiscard]] std::int64_t get(Quantity q) const noexcept;
  [[nodiscard]] bool is_zero() const noexcept { return energy == 0 && momentum == 0 && spin_z == 0; }

  friend bool operator==(const QuantaBundle&, const QuantaBundle&) = default;
};

/// Component-wise sum. Throws QuantaOverflow instead of wrapping.
[[nodiscard]] QuantaBundle bundle_add(const QuantaBundle& p, const QuantaBundle& q);
[[nodiscard]] QuantaBundle negate(const QuantaBundle& p);
[[nodiscard]] QuantaBundle bundle_sub(const QuantaBundle& p, const QuantaBundle& q);

/// Every component of `part` lies between 0 and the matching component of
/// `whole` (inclusive), so spending `part` never flips the sign of a balance.
[[nodiscard]] bool covered_by(const QuantaBundle& part, const QuantaBundle& whole) noexcept;

std::ostream& operator<<(std::ostream& os, const QuantaBundle& b);

} // namespace tisim
