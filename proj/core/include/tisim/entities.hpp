#pragma once

#include "tisim/amplitude.hpp"
#include "tisim/quanta.hpp"
#include "tisim/spacetime.hpp"

#include <compare>
#include <cstdint>

namespace tisim {

/// Identifier shared by emitters and absorbers; ledger parties use the same space.
struct PartyId {
  std::uint64_t value = 0;

  friend bool operator==(const PartyId&, const PartyId&) = default;
  friend auto operator<=>(const PartyId&, const PartyId&) = default;
};

/// The source: supplies the conserved quantities of a transaction.
struct Emitter {
  PartyId id;
  SpacetimeEvent at;
  Amplitude source_amplitude{1.0, 0.0};
  QuantaBundle inventory;
  QuantaBundle offer_quanta;

  /// The offer must fit inside the inventory.
  [[nodiscard]] bool can_cover_offer() const noexcept {
    return covered_by(offer_quanta, inventory);
  }
};

/// A potential receiver of the transferred quantities.
struct Absorber {
  PartyId id;
  SpacetimeEvent at;
  double efficiency = 1.0;  // in [0,1]; 0 never responds
};

/// Validates efficiency range; throws ConfigError.
void validate(const Absorber& a);

} // namespace tisim
