#pragma once

#include <cstdint>
#include <iosfwd>

namespace tisim {

/// A point of the 1+1-D lattice. Spacing and time step are both 1, so
/// signals travel at exactly one cell per tick.
struct SpacetimeEvent {
  std::int64_t site = 0;
  std::int64_t tick = 0;

  friend bool operator==(const SpacetimeEvent&, const SpacetimeEvent&) = default;
  friend auto operator<=>(const SpacetimeEvent&, const SpacetimeEvent&) = default;
};

/// True when `to` lies on the forward light cone of `from` (strictly later).
[[nodiscard]] constexpr bool on_forward_cone(const SpacetimeEvent& from,
                                             const SpacetimeEvent& to) noexcept {
  const std::int64_t dt = to.tick - from.tick;
  const std::int64_t dx = to.site - from.site;
  return dt > 0 && (dx == dt || dx == -dt);
}

std::ostream& operator<<(std::ostream& os, const SpacetimeEvent& e);

} // namespace tisim
