#include "tisim/propagation.hpp"

#include "tisim/errors.hpp"

#include <cmath>

namespace tisim {

std::string_view to_string(EvaluationSite s) noexcept {
  return s == EvaluationSite::Post ? "post" : "prior";
}

void validate(const Medium& m) {
  if (!(m.attenuation > 0.0 && m.attenuation <= 1.0)) {
    throw ConfigError(ConfigError::Kind::Range, "attenuation (beta) must lie in (0,1]");
  }
  if (!std::isfinite(m.phase_rate)) {
    throw ConfigError(ConfigError::Kind::Range, "phase rate (omega) must be finite");
  }
  if (!(m.t_violation >= 0.0) || !std::isfinite(m.t_violation)) {
    throw ConfigError(ConfigError::Kind::Range, "t-violation (eta) must be finite and >= 0");
  }
}

Amplitude retarded_kernel(const SpacetimeEvent& src, const SpacetimeEvent& dst, const Medium& m) {
  if (!on_forward_cone(src, dst)) {
    return {};
  }
  const auto dt = static_cast<double>(dst.tick - src.tick);
  const double magnitude = std::pow(m.attenuation, dt);
  const double phase = m.phase_rate * dt;
  return {magnitude * std::cos(phase), magnitude * std::sin(phase)};
}

Amplitude advanced_kernel(const SpacetimeEvent& src, const SpacetimeEvent& dst, const Medium& m) {
  return conj(retarded_kernel(dst, src, m));
}

OfferWaveSample offer_wave(const Emitter& e, const SpacetimeEvent& at, const Medium& m) {
  return {at, mul(e.source_amplitude, retarded_kernel(e.at, at, m))};
}

ConfirmationEcho echo_strength(const Emitter& e, const Absorber& a, const Medium& m,
                               EvaluationSite site) {
  ConfirmationEcho echo{a.id, 0.0, site};
  if (!on_forward_cone(e.at, a.at)) {
    return echo;
  }
  // |source * beta^dt e^{i omega dt}|^2: the phase cancels in psi * conj(psi),
  // so it is dropped before squaring and the result is bit-identical for every omega.
  const double magnitude = std::pow(m.attenuation, static_cast<double>(a.at.tick - e.at.tick));
  double strength = norm_sq(e.source_amplitude) * (magnitude * magnitude) * a.efficiency;
  if (site == EvaluationSite::Prior && m.t_violation != 0.0) {
    strength *= std::pow(1.0 + m.t_violation, static_cast<double>(a.at.tick - e.at.tick));
  }
  echo.strength = strength;
  return echo;
}

} // namespace tisim
