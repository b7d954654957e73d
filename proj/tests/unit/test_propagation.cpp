#include "tisim/errors.hpp"
#include "tisim/propagation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tisim;

namespace {

Medium unit_medium() { return Medium{}; }

Emitter emitter_at(SpacetimeEvent at, Amplitude amp = {1.0, 0.0}) {
  Emitter e;
  e.id = PartyId{0};
  e.at = at;
  e.source_amplitude = amp;
  return e;
}

} // namespace

TEST_CASE("retarded kernel vanishes off the forward light cone") {
  const Medium m = unit_medium();
  CHECK(retarded_kernel({0, 0}, {3, 5}, m) == Amplitude{});   // dt = 5, dx = 3
  CHECK(retarded_kernel({0, 0}, {-2, -2}, m) == Amplitude{}); // past target
  CHECK(retarded_kernel({0, 0}, {0, 0}, m) == Amplitude{});   // same event
  CHECK(retarded_kernel({0, 0}, {2, 2}, m) == Amplitude(1, 0));
  CHECK(retarded_kernel({4, 1}, {1, 4}, m) == Amplitude(1, 0)); // left-moving branch
}

TEST_CASE("retarded kernel carries attenuation and phase") {
  Medium m;
  m.attenuation = 0.5;
  m.phase_rate = std::numbers::pi / 2;
  const Amplitude k = retarded_kernel({0, 0}, {3, 3}, m);
  // 0.125 * exp(i 3pi/2) = (0, -0.125)
  CHECK(k.re() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(k.im() == doctest::Approx(-0.125));
}

TEST_CASE("advanced kernel is the conjugate of the reversed retarded kernel") {
  Medium m;
  m.phase_rate = std::numbers::pi / 2;
  const SpacetimeEvent e{0, 0}, a{1, 1};
  const Amplitude ret = retarded_kernel(e, a, m);
  CHECK(ret.re() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ret.im() == doctest::Approx(1.0));
  const Amplitude adv = advanced_kernel(a, e, m);
  CHECK(adv.re() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(adv.im() == doctest::Approx(-1.0));

  CHECK(advanced_kernel({0, 0}, {3, 3}, m) == Amplitude{});  // cannot target the future

  std::mt19937_64 gen(21);
  std::uniform_int_distribution<std::int64_t> coord(-6, 6);
  std::uniform_real_distribution<double> beta(0.05, 1.0), omega(-4.0, 4.0);
  for (int k = 0; k < 10000; ++k) {
    const SpacetimeEvent p{coord(gen), coord(gen)}, q{coord(gen), coord(gen)};
    Medium mm;
    mm.attenuation = beta(gen);
    mm.phase_rate = omega(gen);
    CHECK(advanced_kernel(q, p, mm) == conj(retarded_kernel(p, q, mm)));
    CHECK((advanced_kernel(q, p, mm) != Amplitude{}) == (retarded_kernel(p, q, mm) != Amplitude{}));
  }
}

TEST_CASE("echo strength examples") {
  const Medium m = unit_medium();
  const Absorber on_cone{PartyId{1}, {2, 2}, 1.0};
  CHECK(echo_strength(emitter_at({0, 0}), on_cone, m, EvaluationSite::Post).strength == 1.0);
  CHECK(echo_strength(emitter_at({0, 0}), on_cone, m, EvaluationSite::Prior).strength == 1.0);

  const Absorber half{PartyId{2}, {-1, 1}, 0.5};
  CHECK(echo_strength(emitter_at({0, 0}, {0.6, 0.8}), half, m, EvaluationSite::Post).strength ==
        doctest::Approx(0.5).epsilon(1e-15));

  const Absorber off_cone{PartyId{3}, {1, 3}, 1.0};
  CHECK(echo_strength(emitter_at({0, 0}), off_cone, m, EvaluationSite::Post).strength == 0.0);

  const ConfirmationEcho echo = echo_strength(emitter_at({0, 0}), on_cone, m, EvaluationSite::Prior);
  CHECK(echo.absorber_id == PartyId{1});
  CHECK(echo.site_evaluated == EvaluationSite::Prior);
}

TEST_CASE("prior site applies the per-tick asymmetry only when eta > 0") {
  Medium m;
  m.t_violation = 0.5;
  const Emitter e = emitter_at({0, 0});
  const Absorber near{PartyId{1}, {-1, 1}, 1.0};
  const Absorber far{PartyId{2}, {3, 3}, 1.0};
  CHECK(echo_strength(e, near, m, EvaluationSite::Post).strength == 1.0);
  CHECK(echo_strength(e, near, m, EvaluationSite::Prior).strength == doctest::Approx(1.5));
  CHECK(echo_strength(e, far, m, EvaluationSite::Prior).strength == doctest::Approx(3.375));

  m.t_violation = 0.0;
  CHECK(echo_strength(e, far, m, EvaluationSite::Prior).strength ==
        echo_strength(e, far, m, EvaluationSite::Post).strength);
}

TEST_CASE("echo strength agrees with the explicit psi * conj(psi) route") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<std::int64_t> coord(-8, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0), amp(-2.0, 2.0), omega(-3.0, 3.0);
  for (int k = 0; k < 10000; ++k) {
    const Emitter e = emitter_at({coord(gen), coord(gen)}, {amp(gen), amp(gen)});
    const Absorber a{PartyId{1}, {coord(gen), coord(gen)}, unit(gen)};
    Medium m;
    m.attenuation = 0.05 + 0.95 * unit(gen);
    m.phase_rate = omega(gen);
    const double s = echo_strength(e, a, m, EvaluationSite::Post).strength;

    const Amplitude psi = mul(e.source_amplitude, retarded_kernel(e.at, a.at, m));
    const Amplitude echo = mul(psi, conj(psi));
    CHECK(echo.im() == 0.0);
    const double expected = echo.re() * a.efficiency;
    CHECK(std::fabs(s - expected) <= 1e-12 * std::max(1.0, expected));

    // Realness and causality.
    CHECK(s >= 0.0);
    if (a.at.tick <= e.at.tick) {
      CHECK(s == 0.0);
      CHECK(echo_strength(e, a, m, EvaluationSite::Prior).strength == 0.0);
    }
  }
}

TEST_CASE("echo strength does not depend on the phase rate") {
  const Emitter e = emitter_at({0, 0}, {0.3, -0.7});
  const Absorber a{PartyId{1}, {-4, 4}, 0.9};
  Medium m;
  m.attenuation = 0.8;
  m.phase_rate = 0.0;
  const double s0 = echo_strength(e, a, m, EvaluationSite::Post).strength;
  for (double omega : {1.0, std::numbers::pi / 2}) {
    m.phase_rate = omega;
    CHECK(echo_strength(e, a, m, EvaluationSite::Post).strength == s0);
    CHECK(echo_strength(e, a, m, EvaluationSite::Prior).strength == s0);
  }
}

TEST_CASE("medium validation") {
  Medium m;
  CHECK_NOTHROW(validate(m));
  m.attenuation = 1.5;
  CHECK_THROWS_AS(validate(m), ConfigError);
  m.attenuation = 0.0;
  CHECK_THROWS_AS(validate(m), ConfigError);
  m = Medium{};
  m.t_violation = -0.1;
  CHECK_THROWS_AS(validate(m), ConfigError);
}

TEST_CASE("offer wave samples") {
  const Emitter e = emitter_at({0, 0}, {0.0, 2.0});
  const auto on = offer_wave(e, {1, 1}, Medium{});
  CHECK(on.value == Amplitude(0.0, 2.0));
  CHECK(offer_wave(e, {0, 1}, Medium{}).value == Amplitude{});
}
