#pragma once

#include "tisim/amplitude.hpp"
#include "tisim/random.hpp"

#include <cstdint>
#include <utility>

namespace tisim {

/// a|0> + b|1>, kept normalized.
struct TwoLevelState {
  Amplitude a{1.0, 0.0};
  Amplitude b{0.0, 0.0};

  [[nodiscard]] static TwoLevelState ground() { return {}; }
  [[nodiscard]] static TwoLevelState excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }
  [[nodiscard]] double norm() const { return norm_sq(a) + norm_sq(b); }

  friend bool operator==(const TwoLevelState&, const TwoLevelState&) = default;
};

enum class Outcome { Zero, One };

/// Real rotation by theta: a' = a cos - b sin, b' = a sin + b cos.
[[nodiscard]] TwoLevelState evolve(const TwoLevelState& s, double theta);

/// Projective measurement in the {|0>, |1>} basis. Outcome Zero with
/// probability |a|^2; the collapsed state is exactly |0> or |1>.
[[nodiscard]] std::pair<Outcome, TwoLevelState> measure(const TwoLevelState& s, RandomSource& rng);

struct ZenoResult {
  std::uint64_t steps = 0;       // measurements per trial (N)
  std::uint64_t trials = 0;
  std::uint64_t survivors = 0;
  double expected = 0.0;         // (cos^2(theta/N))^N
  double empirical = 0.0;
  double three_sigma = 0.0;      // 3 sqrt(p(1-p)/trials) at the expected p

  [[nodiscard]] bool within_band() const;
};

/// (cos^2(theta_total / n))^n
[[nodiscard]] double zeno_survival_expected(double theta_total, std::uint64_t n);

/// Survival statistics of `trials` runs that start in |0> and alternate
/// evolve(theta_total / n) with a measurement n times; a trial survives when
/// every outcome is Zero. Trial k uses rng.split(k).
[[nodiscard]] ZenoResult zeno_run(double theta_total, std::uint64_t n, std::uint64_t trials,
                                  RandomSource& rng);

} // namespace tisim
