#include "tisim/arrow.hpp"
#include "tisim/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace tisim;

namespace {

bool close(const Velocity& a, const Velocity& b, double tol) {
  return std::fabs(a.x - b.x) <= tol && std::fabs(a.y - b.y) <= tol;
}

} // namespace

TEST_CASE("h_value") {
  CHECK(h_value(std::vector<double>{1.0}) == 0.0);
  CHECK(h_value(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);
  CHECK(h_value(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(-1.386294361).epsilon(1e-9));
  CHECK(h_value(std::vector<double>{0.5, 0.5}) == doctest::Approx(-0.693147181).epsilon(1e-9));
  CHECK_THROWS_AS((void)h_value(std::vector<double>{0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS((void)h_value(std::vector<double>{1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("the two-delta start occupies exactly two bins") {
  const GasState s = two_delta_state(1000);
  CHECK(s.size() == 1000);
  CHECK(s.rms_speed() == doctest::Approx(1.0).epsilon(1e-12));
  const VelocityBinning b = VelocityBinning::for_state(s);
  CHECK(b.max_speed == doctest::Approx(3.0));
  CHECK(h_value(histogram(s, b)) == doctest::Approx(-std::numbers::ln2).epsilon(1e-12));
  CHECK(std::fabs(s.momentum().x) < 1e-12);
  CHECK(std::fabs(s.momentum().y) < 1e-12);
}

TEST_CASE("binning layout") {
  const VelocityBinning b{3.0, 32, 16};
  CHECK(b.bin_count() == 512);
  CHECK(b.bin_of({0.0, 0.0}) == 0);
  CHECK(b.bin_of({1.0, 0.0}) == 10 * 16);
  CHECK(b.bin_of({0.0, 1.0}) == 10 * 16 + 4);
  CHECK(b.bin_of({100.0, 0.0}) == 31 * 16);   // too fast: last speed bin
  CHECK(b.bin_of({1.0, -1e-9}) == 10 * 16 + 15);
}

TEST_CASE("elastic collisions") {
  SUBCASE("zero rotation is the identity") {
    GasState s{{{1.0, 2.0}, {-3.0, 0.5}}};
    const GasState before = s;
    apply_collision(s, 0, 1, 0.0);
    CHECK(s == before);
  }
  SUBCASE("a half turn swaps the two velocities") {
    GasState s{{{1.0, 0.0}, {-1.0, 0.0}}};
    apply_collision(s, 0, 1, std::numbers::pi);
    CHECK(close(s.velocities[0], {-1.0, 0.0}, 1e-15));
    CHECK(close(s.velocities[1], {1.0, 0.0}, 1e-15));
  }
  SUBCASE("a quarter turn deflects a head-on pair sideways") {
    GasState s{{{1.0, 0.0}, {-1.0, 0.0}}};
    apply_collision(s, 0, 1, std::numbers::pi / 2);
    CHECK(close(s.velocities[0], {0.0, 1.0}, 1e-15));
    CHECK(close(s.velocities[1], {0.0, -1.0}, 1e-15));
  }
  SUBCASE("random collisions conserve energy and momentum") {
    RandomSource rng(17);
    GasState s;
    for (int k = 0; k < 200; ++k) {
      s.velocities.push_back({rng.normal(), rng.normal()});
    }
    const double e0 = s.kinetic_energy();
    const Velocity p0 = s.momentum();
    for (std::uint64_t step = 0; step < 10000; ++step) {
      const auto rec = collide_pre_chaos(s, rng, step);
      REQUIRE(rec.i != rec.j);
      REQUIRE(rec.i < 200);
      REQUIRE(rec.j < 200);
    }
    CHECK(s.kinetic_energy() == doctest::Approx(e0).epsilon(1e-10));
    CHECK(close(s.momentum(), p0, 1e-9));
  }
  SUBCASE("fewer than two particles") {
    GasState s{{{1.0, 0.0}}};
    RandomSource rng(1);
    CHECK_THROWS_AS((void)collide_pre_chaos(s, rng), std::invalid_argument);
  }
}

TEST_CASE("forward sampling schedule") {
  RandomSource rng(3);
  SUBCASE("zero steps") {
    const ForwardRun run = simulate_forward(100, 0, rng);
    REQUIRE(run.trace.size() == 1);
    CHECK(run.trace[0].step == 0);
    CHECK(run.history.records.empty());
    CHECK(run.history.final_state == run.initial);
  }
  SUBCASE("every n/10 collisions plus the final one") {
    const ForwardRun run = simulate_forward(100, 1005, rng);
    CHECK(run.history.sample_interval == 10);
    REQUIRE(run.trace.size() == 102);
    CHECK(run.trace[1].step == 10);
    CHECK(run.trace[100].step == 1000);
    CHECK(run.trace.back().step == 1005);
  }
}

TEST_CASE("equal seeds reproduce a run exactly") {
  RandomSource a(99), b(99);
  const ForwardRun x = simulate_forward(300, 3000, a);
  const ForwardRun y = simulate_forward(300, 3000, b);
  CHECK(x.history.final_state == y.history.final_state);
  REQUIRE(x.trace.size() == y.trace.size());
  for (std::size_t k = 0; k < x.trace.size(); ++k) {
    CHECK(x.trace[k].h == y.trace[k].h);
  }
}

TEST_CASE("reverse replay retraces the forward run") {
  RandomSource rng(5);
  const ForwardRun run = simulate_forward(500, 5000, rng);
  const ReplayResult rev = reverse_replay(run.initial, run.history);

  const GasState target = run.initial.negated();
  double worst = 0.0;
  for (std::size_t p = 0; p < target.size(); ++p) {
    worst = std::max({worst, std::fabs(rev.final_state.velocities[p].x - target.velocities[p].x),
                      std::fabs(rev.final_state.velocities[p].y - target.velocities[p].y)});
  }
  CHECK(worst < 1e-9);

  // Negation maps sector k to sector k + 8 and keeps speeds, so with 16
  // sectors the reversed H samples mirror the forward ones.
  REQUIRE(rev.trace.size() == run.trace.size());
  const std::size_t n = run.trace.size();
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(rev.trace[k].h == doctest::Approx(run.trace[n - 1 - k].h).epsilon(1e-9));
  }
  CHECK(rev.trace.back().step == 5000);
}

TEST_CASE("tampered histories are rejected") {
  RandomSource rng(6);
  const ForwardRun run = simulate_forward(100, 500, rng);
  SUBCASE("changed angle") {
    CollisionHistory h = run.history;
    h.records[250].angle += 0.1;
    CHECK_THROWS_AS((void)reverse_replay(run.initial, h), ReplayMismatch);
  }
  SUBCASE("out of range particle") {
    CollisionHistory h = run.history;
    h.records[3].j = 100;
    CHECK_THROWS_AS((void)reverse_replay(run.initial, h), ReplayMismatch);
  }
  SUBCASE("missing record") {
    CollisionHistory h = run.history;
    h.records.erase(h.records.begin() + 10);
    CHECK_THROWS_AS((void)reverse_replay(run.initial, h), ReplayMismatch);
  }
  SUBCASE("wrong initial state") {
    CHECK_THROWS_AS((void)reverse_replay(two_delta_state(100, 2.0), run.history), ReplayMismatch);
  }
}

TEST_CASE("H falls forward and rises under reversal across seeds") {
  std::size_t forward_violations = 0;
  std::size_t reverse_violations = 0;
  std::size_t samples = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomSource rng(seed);
    const ForwardRun run = simulate_forward(1000, 10000, rng);
    const TrendCheck fwd = check_trend(run.trace, TrendDirection::NonIncreasing);
    CHECK(fwd.endpoints_ok);
    CHECK(run.trace.back().h < run.trace.front().h - 3.0);

    const ReplayResult rev = reverse_replay(run.initial, run.history);
    const TrendCheck back = check_trend(rev.trace, TrendDirection::NonDecreasing);
    CHECK(back.endpoints_ok);
    forward_violations += fwd.violations;
    reverse_violations += back.violations;
    samples += fwd.steps;
  }
  // Single excursions beyond 3 sigma happen; they must stay rare.
  CHECK(static_cast<double>(forward_violations) < 0.01 * static_cast<double>(samples));
  CHECK(static_cast<double>(reverse_violations) < 0.01 * static_cast<double>(samples));
}

TEST_CASE("the relaxed gas approaches the Maxwell reference") {
  RandomSource rng(8);
  const ForwardRun run = simulate_forward(1000, 10000, rng);
  RandomSource ref_rng(9);
  const double ref = maxwell_reference_h(1000, run.initial.rms_speed(), run.history.binning, ref_rng);
  CHECK(std::fabs(run.trace.back().h - ref) < 0.1);
}

TEST_CASE("the arrow survives a finer speed binning") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GasState start = two_delta_state(1000);
    RandomSource rng(seed);
    const ForwardRun run =
        simulate_forward(start, 10000, rng, VelocityBinning::for_state(start, 64, 16));
    CHECK(run.trace.back().h < run.trace.front().h);
    CHECK(check_trend(run.trace, TrendDirection::NonIncreasing).endpoints_ok);
    const ReplayResult rev = reverse_replay(run.initial, run.history);
    CHECK(check_trend(rev.trace, TrendDirection::NonDecreasing).endpoints_ok);
  }
}

TEST_CASE("check_trend on hand-made traces") {
  const HTrace down{{0, 0.0}, {1, -1.0}, {2, -1.5}, {3, -1.6}, {4, -1.6}};
  const TrendCheck c = check_trend(down, TrendDirection::NonIncreasing);
  CHECK(c.endpoints_ok);
  CHECK(c.violations == 0);
  CHECK(c.steps == 4);
  CHECK_FALSE(check_trend(down, TrendDirection::NonDecreasing).endpoints_ok);
  CHECK(check_trend(HTrace{}, TrendDirection::NonIncreasing).endpoints_ok);
}
