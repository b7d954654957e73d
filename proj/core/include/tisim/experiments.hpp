#pragma once

#include "tisim/config.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tisim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Everything an experiment produces, fully rendered. Files are written
/// verbatim, so equal configs give byte-identical outputs.
struct RunResult {
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const noexcept;
  [[nodiscard]] const std::string& file(const std::string& name) const;
};

/// Runs the configured experiment. Always produces result.csv and
/// summary.json; summary.json embeds the resolved config, seed and version.
[[nodiscard]] RunResult run_experiment(const RunConfig& cfg);

/// Writes every file into `dir` (created if needed). Names are plain file
/// names, so nothing lands outside `dir`.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

[[nodiscard]] std::string_view artifact_version() noexcept;

} // namespace tisim
