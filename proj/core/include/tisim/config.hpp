#pragma once

#include "tisim/handshake.hpp"
#include "tisim/propagation.hpp"
#include "tisim/quanta.hpp"

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tisim {

enum class Experiment { Born, Sites, Zeno, HTheorem, Frontier };

[[nodiscard]] std::string_view to_string(Experiment e) noexcept;
[[nodiscard]] std::optional<Experiment> experiment_from_string(std::string_view name) noexcept;

/// Everything a run needs. Each field's default is what an empty config
/// file produces; see README for the key names.
struct RunConfig {
  Experiment experiment = Experiment::Born;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;  // unset: per-experiment default
  std::string out = "out";

  Medium medium;
  ReinforcementParams reinforcement;

  // Handshake geometry: one emitter (id 0), absorbers numbered 1..n in list order.
  std::int64_t emitter_site = 0;
  std::int64_t emitter_tick = 0;
  double source_re = 1.0;
  double source_im = 0.0;
  QuantaBundle offer{1, 0, 0};
  std::vector<std::int64_t> absorber_sites{-1, 3};
  std::vector<std::int64_t> absorber_ticks{1, 3};
  std::vector<double> absorber_efficiency{0.25, 0.75};

  // Gas.
  std::uint64_t particles = 1000;
  std::uint64_t collisions = 10000;
  std::uint32_t speed_bins = 32;
  std::uint32_t direction_sectors = 16;

  // Zeno.
  double theta_total = std::numbers::pi / 2.0;
  std::vector<std::uint64_t> n_list{1, 3, 64, 1024};

  // Frontier.
  std::int64_t frontier_sites = 64;
  std::uint64_t frontier_attempts = 200;
  std::int64_t frontier_max_span = 3;
  std::vector<std::int64_t> box_scales{1, 2, 4, 8, 16, 32, 64};

  /// trials, or the experiment default: born 100000, sites 10000, zeno 100000,
  /// htheorem 20 seeded runs, frontier 20 seeds.
  [[nodiscard]] std::uint64_t resolved_trials() const noexcept;

  [[nodiscard]] Scenario scenario() const;
};

[[nodiscard]] std::uint64_t default_trials(Experiment e) noexcept;

/// Sets one key from its textual value. Throws ConfigError(UnknownKey) for
/// unknown keys, ConfigError(Syntax) for unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Cross-field and range validation; throws ConfigError(Range).
void validate(const RunConfig& cfg);

/// Parses `key = value` text. Several pairs may share a line separated by
/// commas; lists are written [a, b, c]; '#' starts a comment. Errors name the
/// offending line and key. The result is validated.
[[nodiscard]] RunConfig parse_config_text(std::string_view text);

/// Throws ConfigError(MissingFile) if the file cannot be read.
[[nodiscard]] RunConfig parse_config(const std::filesystem::path& path);

} // namespace tisim
