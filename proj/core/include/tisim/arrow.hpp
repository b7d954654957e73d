#pragma once

#include "tisim/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tisim {

struct Velocity {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Velocity&, const Velocity&) = default;
};

/// Equal-mass particles, velocities only (no positions: partners are drawn
/// mean-field, DSMC style).
struct GasState {
  std::vector<Velocity> velocities;

  [[nodiscard]] std::size_t size() const noexcept { return velocities.size(); }
  /// Sum of |v|^2 / 2 (unit mass).
  [[nodiscard]] double kinetic_energy() const noexcept;
  [[nodiscard]] Velocity momentum() const noexcept;
  [[nodiscard]] double rms_speed() const noexcept;
  [[nodiscard]] GasState negated() const;

  friend bool operator==(const GasState&, const GasState&) = default;
};

/// Low-entropy start: every particle has speed `speed`, half moving along
/// angle pi/16 and half along the opposite direction. Both directions sit in
/// the middle of a 16-sector direction bin.
[[nodiscard]] GasState two_delta_state(std::size_t n, double speed = 1.0);

struct CollisionRecord {
  std::uint64_t step = 0;
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double angle = 0.0;  // rotation applied to the relative velocity, radians
};

/// Joint (speed, direction) histogram layout: `speed_bins` equal-width speed
/// bins on [0, max_speed) (faster particles land in the last bin) times
/// `direction_sectors` equal angular sectors starting at angle 0.
struct VelocityBinning {
  double max_speed = 3.0;
  std::uint32_t speed_bins = 32;
  std::uint32_t direction_sectors = 16;

  /// max_speed = 3 x the RMS speed of `s`.
  [[nodiscard]] static VelocityBinning for_state(const GasState& s, std::uint32_t speed_bins = 32,
                                                 std::uint32_t direction_sectors = 16);

  [[nodiscard]] std::size_t bin_count() const noexcept {
    return static_cast<std::size_t>(speed_bins) * direction_sectors;
  }
  [[nodiscard]] std::size_t bin_of(const Velocity& v) const noexcept;
};

/// Occupation fractions of every bin.
[[nodiscard]] std::vector<double> histogram(const GasState& s, const VelocityBinning& b);

/// Boltzmann H = sum over occupied bins of f ln f. Throws std::invalid_argument
/// for negative fractions or a total that is not 1 (1e-9 slack).
[[nodiscard]] double h_value(std::span<const double> fractions);

struct HSample {
  std::uint64_t step = 0;
  double h = 0.0;
};
using HTrace = std::vector<HSample>;

/// Equal-mass 2-D elastic collision: centre-of-mass velocity kept, relative
/// velocity rotated by `angle`.
void apply_collision(GasState& s, std::uint32_t i, std::uint32_t j, double angle);

/// One collision under molecular chaos before the collision: the pair is drawn
/// uniformly regardless of velocity history, the angle uniformly in [0, 2pi).
/// Requires at least two particles.
CollisionRecord collide_pre_chaos(GasState& s, RandomSource& rng, std::uint64_t step = 0);

/// Everything needed to replay a forward run exactly.
struct CollisionHistory {
  std::vector<CollisionRecord> records;
  std::uint64_t sample_interval = 1;
  VelocityBinning binning;
  GasState final_state;
};

struct ForwardRun {
  GasState initial;
  HTrace trace;
  CollisionHistory history;
};

/// Applies `steps` collisions, sampling H every max(1, N/10) collisions and at
/// the final step.
[[nodiscard]] ForwardRun simulate_forward(GasState initial, std::uint64_t steps, RandomSource& rng);
[[nodiscard]] ForwardRun simulate_forward(GasState initial, std::uint64_t steps, RandomSource& rng,
                                          const VelocityBinning& binning);
/// Default low-entropy start (two_delta_state).
[[nodiscard]] ForwardRun simulate_forward(std::size_t n, std::uint64_t steps, RandomSource& rng);

struct ReplayResult {
  HTrace trace;
  GasState final_state;
};

/// Time-reversed run: negate the forward final velocities, then undo the
/// collisions newest first with angle -phi on the same pairs. Samples are
/// taken at the mirror images of the forward sampling steps, so
/// trace[k] corresponds to forward trace[n - 1 - k].
///
/// The history is first checked against `initial` by replaying it forward;
/// out-of-range pairs, non-consecutive steps or a final state that disagrees
/// with the recorded one (1e-9 absolute) raise ReplayMismatch.
[[nodiscard]] ReplayResult reverse_replay(const GasState& initial, const CollisionHistory& history);

/// Mean H of `draws` independent samples of `n` velocities from the 2-D
/// Maxwell distribution with the given RMS speed, histogrammed with `b`.
[[nodiscard]] double maxwell_reference_h(std::size_t n, double rms_speed, const VelocityBinning& b,
                                         RandomSource& rng, std::size_t draws = 16);

enum class TrendDirection { NonIncreasing, NonDecreasing };

struct TrendCheck {
  bool endpoints_ok = false;     // H(final) vs H(initial) in the expected direction
  double tau = 0.0;              // 3 x step-to-step sigma over the second half
  std::size_t violations = 0;    // steps moving against the trend by more than tau
  std::size_t steps = 0;
};

/// Monotonicity verdict for an H trace, with a fluctuation band estimated
/// from the tail of the trace (assumed near equilibrium for forward runs).
[[nodiscard]] TrendCheck check_trend(const HTrace& trace, TrendDirection direction);

} // namespace tisim
