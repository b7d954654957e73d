#include "tisim/quanta.hpp"

#include "tisim/entities.hpp"
#include "tisim/errors.hpp"

#include <ostream>

namespace tisim {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b, Quantity q) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw QuantaOverflow("overflow adding " + std::string(to_string(q)) + " quanta");
  }
  return out;
}

std::int64_t checked_neg(std::int64_t a, Quantity q) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(std::int64_t{0}, a, &out)) {
    throw QuantaOverflow("overflow negating " + std::string(to_string(q)) + " quanta");
  }
  return out;
}

bool component_covered(std::int64_t part, std::int64_t whole) {
  return whole >= 0 ? (part >= 0 && part <= whole) : (part <= 0 && part >= whole);
}

} // namespace

std::string_view to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::Energy: return "energy";
    case Quantity::Momentum: return "momentum";
    case Quantity::SpinZ: return "spin_z";
  }
  return "?";
}

std::int64_t QuantaBundle::get(Quantity q) const noexcept {
  switch (q) {
    case Quantity::Energy: return energy;
    case Quantity::Momentum: return momentum;
    case Quantity::SpinZ: return spin_z;
  }
  return 0;
}

QuantaBundle bundle_add(const QuantaBundle& p, const QuantaBundle& q) {
  return {checked_add(p.energy, q.energy, Quantity::Energy),
          checked_add(p.momentum, q.momentum, Quantity::Momentum),
          checked_add(p.spin_z, q.spin_z, Quantity::SpinZ)};
}

QuantaBundle negate(const QuantaBundle& p) {
  return {checked_neg(p.energy, Quantity::Energy), checked_neg(p.momentum, Quantity::Momentum),
          checked_neg(p.spin_z, Quantity::SpinZ)};
}

QuantaBundle bundle_sub(const QuantaBundle& p, const QuantaBundle& q) {
  return bundle_add(p, negate(q));
}

bool covered_by(const QuantaBundle& part, const QuantaBundle& whole) noexcept {
  return component_covered(part.energy, whole.energy) &&
         component_covered(part.momentum, whole.momentum) &&
         component_covered(part.spin_z, whole.spin_z);
}

std::ostream& operator<<(std::ostream& os, const QuantaBundle& b) {
  return os << '(' << b.energy << ", " << b.momentum << ", " << b.spin_z << ')';
}

std::ostream& operator<<(std::ostream& os, const SpacetimeEvent& e) {
  return os << "(site " << e.site << ", tick " << e.tick << ')';
}

void validate(const Absorber& a) {
  if (!(a.efficiency >= 0.0 && a.efficiency <= 1.0)) {
    throw ConfigError(ConfigError::Kind::Range,
                      "absorber " + std::to_string(a.id.value) + " efficiency must lie in [0,1]");
  }
}

} // namespace tisim
