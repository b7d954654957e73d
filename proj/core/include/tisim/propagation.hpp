#pragma once

#include "tisim/amplitude.hpp"
#include "tisim/entities.hpp"
#include "tisim/spacetime.hpp"

#include <string_view>

namespace tisim {

/// Where the transition probability is evaluated: at the emitter (Post) or at
/// the future absorber end (Prior).
enum class EvaluationSite { Post, Prior };

[[nodiscard]] std::string_view to_string(EvaluationSite s) noexcept;

enum class PropagationMode { LightCone };

/// Propagation medium for offer and confirmation waves.
struct Medium {
  double attenuation = 1.0;   // beta in (0,1], amplitude factor per tick
  double phase_rate = 0.0;    // omega, radians per tick
  PropagationMode mode = PropagationMode::LightCone;
  double t_violation = 0.0;   // eta >= 0; 0 keeps Post and Prior identical
};

/// Throws ConfigError(Range) for beta outside (0,1], eta < 0 or non-finite values.
void validate(const Medium& m);

struct OfferWaveSample {
  SpacetimeEvent at;
  Amplitude value;
};

struct ConfirmationEcho {
  PartyId absorber_id;
  double strength = 0.0;  // real, >= 0
  EvaluationSite site_evaluated = EvaluationSite::Post;
};

/// Massless 1+1-D retarded kernel: beta^dt * exp(i omega dt) on the forward
/// light cone (dt > 0, |dx| = dt), exactly zero everywhere else.
[[nodiscard]] Amplitude retarded_kernel(const SpacetimeEvent& src, const SpacetimeEvent& dst,
                                        const Medium& m);

/// conj(retarded_kernel(dst, src)): nonzero only toward the backward light cone.
[[nodiscard]] Amplitude advanced_kernel(const SpacetimeEvent& src, const SpacetimeEvent& dst,
                                        const Medium& m);

/// The emitter's offer wave sampled at `at`.
[[nodiscard]] OfferWaveSample offer_wave(const Emitter& e, const SpacetimeEvent& at,
                                         const Medium& m);

/// Strength of the confirmation echo returned by `a` at the instant of emission.
///
/// Post: |source * K_ret(e -> a)|^2 * efficiency.
/// Prior: the Post value times (1 + eta)^dt, dt = a.tick - e.tick. Each tick of
/// advanced propagation back from the absorber picks up the same (1 + eta)
/// asymmetry, so absorbers at different distances are reweighted differently.
/// With eta = 0 both sites agree exactly.
[[nodiscard]] ConfirmationEcho echo_strength(const Emitter& e, const Absorber& a, const Medium& m,
                                             EvaluationSite site);

} // namespace tisim
