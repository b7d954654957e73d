#include "tisim/config.hpp"
#include "tisim/errors.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace tisim;

namespace {

ConfigError::Kind kind_of_failure(std::string_view text) {
  try {
    (void)parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  FAIL("expected a ConfigError");
  return ConfigError::Kind::Syntax;
}

} // namespace

TEST_CASE("an empty file gives the documented defaults") {
  const RunConfig c = parse_config_text("");
  CHECK(c.experiment == Experiment::Born);
  CHECK(c.seed == 1);
  CHECK_FALSE(c.trials);
  CHECK(c.resolved_trials() == 100000);
  CHECK(c.medium.attenuation == 1.0);
  CHECK(c.medium.phase_rate == 0.0);
  CHECK(c.medium.t_violation == 0.0);
  CHECK(c.reinforcement.factor == 2.0);
  CHECK(c.reinforcement.epsilon == 1e-3);
  CHECK(c.particles == 1000);
  CHECK(c.collisions == 10000);
  CHECK(c.n_list == std::vector<std::uint64_t>{1, 3, 64, 1024});
  CHECK(c.theta_total == std::numbers::pi / 2.0);

  const Scenario s = c.scenario();
  CHECK(s.emitter.id == PartyId{0});
  REQUIRE(s.absorbers.size() == 2);
  CHECK(s.absorbers[0].id == PartyId{1});
  CHECK(s.absorbers[1].at == SpacetimeEvent{3, 3});
  CHECK(s.absorbers[1].efficiency == 0.75);
}

TEST_CASE("comments, blank lines and several pairs per line") {
  const RunConfig c = parse_config_text(
      "# leading comment\n"
      "\n"
      "experiment = zeno, theta_total = 1.5707963, n_list = [1,3,64]  # trailing\n"
      "seed=77\n"
      "trials = 20000\n");
  CHECK(c.experiment == Experiment::Zeno);
  CHECK(c.theta_total == 1.5707963);
  CHECK(c.n_list == std::vector<std::uint64_t>{1, 3, 64});
  CHECK(c.seed == 77);
  CHECK(c.resolved_trials() == 20000);
}

TEST_CASE("absorber lists") {
  const RunConfig c = parse_config_text(
      "absorber_sites = [ -2, 0, 5 ]\n"
      "absorber_ticks = [2, 4, 5]\n"
      "absorber_efficiency = [0.1, 0.2, 1]\n");
  const Scenario s = c.scenario();
  REQUIRE(s.absorbers.size() == 3);
  CHECK(s.absorbers[2].id == PartyId{3});
  CHECK(s.absorbers[0].at == SpacetimeEvent{-2, 2});
}

TEST_CASE("range errors") {
  using K = ConfigError::Kind;
  CHECK(kind_of_failure("eta = -0.1") == K::Range);
  CHECK(kind_of_failure("beta = 1.5") == K::Range);
  CHECK(kind_of_failure("beta = 0") == K::Range);
  CHECK(kind_of_failure("r = 1") == K::Range);
  CHECK(kind_of_failure("epsilon = 1") == K::Range);
  CHECK(kind_of_failure("absorber_efficiency = [0.5, 1.2]") == K::Range);
  CHECK(kind_of_failure("absorber_sites = [1, 2, 3]") == K::Range);
  CHECK(kind_of_failure("experiment = sites, trials = 10") == K::Range);
  CHECK(kind_of_failure("particles = 10") == K::Range);
  CHECK(kind_of_failure("box_scales = [3]") == K::Range);
}

TEST_CASE("syntax and unknown keys") {
  using K = ConfigError::Kind;
  CHECK(kind_of_failure("beat = 0.5") == K::UnknownKey);
  CHECK(kind_of_failure("experiment = teleport") == K::Syntax);
  CHECK(kind_of_failure("seed = abc") == K::Syntax);
  CHECK(kind_of_failure("seed") == K::Syntax);
  CHECK(kind_of_failure("n_list = [1, 2") == K::Syntax);
  CHECK(kind_of_failure("beta = 0.5x") == K::Syntax);
}

TEST_CASE("errors name the offending line and key") {
  try {
    (void)parse_config_text("seed = 3\n\nbeat = 0.5\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("beat") != std::string::npos);
  }
}

TEST_CASE("config files") {
  CHECK_THROWS_AS((void)parse_config("/nonexistent/dir/run.cfg"), ConfigError);
  try {
    (void)parse_config("/nonexistent/dir/run.cfg");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::MissingFile);
  }

  const auto path = std::filesystem::temp_directory_path() / "tisim_test_config.cfg";
  {
    std::ofstream f(path);
    f << "experiment = htheorem\nparticles = 200, collisions = 500\n";
  }
  const RunConfig c = parse_config(path);
  std::filesystem::remove(path);
  CHECK(c.experiment == Experiment::HTheorem);
  CHECK(c.particles == 200);
  CHECK(c.collisions == 500);
  CHECK(c.resolved_trials() == 20);
}

TEST_CASE("experiment names round-trip") {
  for (auto e : {Experiment::Born, Experiment::Sites, Experiment::Zeno, Experiment::HTheorem,
                 Experiment::Frontier}) {
    CHECK(experiment_from_string(to_string(e)) == e);
  }
  CHECK_FALSE(experiment_from_string("Born"));
}
