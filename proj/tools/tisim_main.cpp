// tisim: run transaction-handshake experiments from a config file or flags.
//
// Exit codes: 0 success, 1 a --check criterion failed, 2 bad syntax / unknown
// key / unknown experiment / bad command line, 3 config file missing,
// 4 value out of range, 5 runtime failure.

#include "tisim/config.hpp"
#include "tisim/errors.hpp"
#include "tisim/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigSyntax = 2,
  kMissingFile = 3,
  kOutOfRange = 4,
  kRuntime = 5,
};

int exit_code_for(const tisim::ConfigError& e) {
  switch (e.kind()) {
    case tisim::ConfigError::Kind::MissingFile: return kMissingFile;
    case tisim::ConfigError::Kind::Range: return kOutOfRange;
    case tisim::ConfigError::Kind::Syntax:
    case tisim::ConfigError::Kind::UnknownKey: return kConfigSyntax;
  }
  return kConfigSyntax;
}

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> out;
  std::optional<std::string> config;
  bool check = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Master seed (64-bit)");
  cmd->add_option("--trials", flags.trials, "Trials, runs or seeds, depending on the experiment");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_flag("--check", flags.check, "Exit 1 if any acceptance criterion fails");
}

int execute(tisim::RunConfig cfg, const CommonFlags& flags) {
  if (flags.seed) {
    cfg.seed = *flags.seed;
  }
  if (flags.trials) {
    cfg.trials = *flags.trials;
  }
  if (flags.out) {
    cfg.out = *flags.out;
  }
  tisim::validate(cfg);

  const tisim::RunResult result = tisim::run_experiment(cfg);
  tisim::write_outputs(result, cfg.out);

  std::cout << "experiment " << tisim::to_string(cfg.experiment) << " seed " << cfg.seed
            << " -> " << cfg.out << "\n";
  for (const auto& c : result.checks) {
    std::cout << (c.passed ? "  PASS " : "  FAIL ") << c.name << ": " << c.detail << "\n";
  }
  if (flags.check && !result.passed()) {
    return kCheckFailed;
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transactional handshake simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_config;
  auto* run = app.add_subcommand("run", "Run the experiment named in a config file");
  run->add_option("config", run_config, "Config file")->required();
  add_common(run, run_flags);

  CommonFlags exp_flags;
  std::vector<std::pair<CLI::App*, tisim::Experiment>> named;
  for (auto e : {tisim::Experiment::Born, tisim::Experiment::Sites, tisim::Experiment::Zeno,
                 tisim::Experiment::HTheorem, tisim::Experiment::Frontier}) {
    auto* cmd = app.add_subcommand(std::string(tisim::to_string(e)),
                                   "Run the " + std::string(tisim::to_string(e)) + " experiment");
    add_common(cmd, exp_flags);
    cmd->add_option("--config", exp_flags.config, "Config file with further settings");
    named.emplace_back(cmd, e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigSyntax;
  }

  try {
    if (run->parsed()) {
      return execute(tisim::parse_config(run_config), run_flags);
    }
    for (const auto& [cmd, experiment] : named) {
      if (cmd->parsed()) {
        tisim::RunConfig cfg = exp_flags.config ? tisim::parse_config(*exp_flags.config)
                                                : tisim::RunConfig{};
        cfg.experiment = experiment;
        return execute(cfg, exp_flags);
      }
    }
  } catch (const tisim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kConfigSyntax;
}
