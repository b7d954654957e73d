#pragma once

#include <array>
#include <cstdint>

namespace tisim {

/// SplitMix64 output function (Steele, Lea, Flood 2014). Used for seeding and
/// seed splitting.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Child seed for trial `k` of a run seeded with `master`:
///   derive_seed(master, k) = splitmix64 step from state master ^ (k * 0xD1B54A32D192ED03)
/// Trials can therefore be run in any order, or in parallel, with the same result.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) noexcept;

/// Seedable generator: xoshiro256** 1.0 (Blackman & Vigna), state filled by
/// four SplitMix64 draws from the seed. Only integer arithmetic is involved, so
/// identical seeds give identical streams on every platform.
class RandomSource {
public:
  explicit RandomSource(std::uint64_t seed) noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform double in [0,1) built from the top 53 bits.
  double uniform() noexcept;

  /// Uniform integer in [0, n). n must be nonzero. Lemire's nearly-divisionless
  /// rejection, so there is no modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal() noexcept;

  /// Independent child source for trial `k`, without advancing this one.
  [[nodiscard]] RandomSource split(std::uint64_t k) const noexcept {
    return RandomSource(derive_seed(seed_, k));
  }

private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

} // namespace tisim
