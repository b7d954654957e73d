#include "tisim/config.hpp"

#include "tisim/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tisim {

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::Born: return "born";
    case Experiment::Sites: return "sites";
    case Experiment::Zeno: return "zeno";
    case Experiment::HTheorem: return "htheorem";
    case Experiment::Frontier: return "frontier";
  }
  return "?";
}

std::optional<Experiment> experiment_from_string(std::string_view name) noexcept {
  for (auto e : {Experiment::Born, Experiment::Sites, Experiment::Zeno, Experiment::HTheorem,
                 Experiment::Frontier}) {
    if (name == to_string(e)) {
      return e;
    }
  }
  return std::nullopt;
}

std::uint64_t default_trials(Experiment e) noexcept {
  switch (e) {
    case Experiment::Born: return 100000;
    case Experiment::Sites: return 10000;
    case Experiment::Zeno: return 100000;
    case Experiment::HTheorem: return 20;
    case Experiment::Frontier: return 20;
  }
  return 1;
}

std::uint64_t RunConfig::resolved_trials() const noexcept {
  return trials.value_or(default_trials(experiment));
}

Scenario RunConfig::scenario() const {
  Scenario s;
  s.emitter.id = PartyId{0};
  s.emitter.at = {emitter_site, emitter_tick};
  s.emitter.source_amplitude = Amplitude(source_re, source_im);
  s.emitter.offer_quanta = offer;
  s.emitter.inventory = offer;
  for (std::size_t k = 0; k < absorber_sites.size(); ++k) {
    s.absorbers.push_back(
        {PartyId{k + 1}, {absorber_sites[k], absorber_ticks[k]}, absorber_efficiency[k]});
  }
  s.medium = medium;
  s.reinforcement = reinforcement;
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void syntax(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError(ConfigError::Kind::Syntax, "key '" + std::string(key) + "': cannot read '" +
                                                   std::string(value) + "' as " +
                                                   std::string(expected));
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    syntax(key, text, "an integer");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    syntax(key, text, "a number");
  }
  if (used != s.size() || !std::isfinite(v)) {
    syntax(key, text, "a finite number");
  }
  return v;
}

std::string parse_string(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') &&
      text.back() == text.front()) {
    text = text.substr(1, text.size() - 2);
  }
  return std::string(text);
}

std::vector<std::string_view> list_items(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    syntax(key, text, "a list [a, b, ...]");
  }
  std::vector<std::string_view> items;
  std::string_view body = trim(text.substr(1, text.size() - 2));
  if (body.empty()) {
    return items;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    items.push_back(trim(body.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return items;
}

template <typename T>
std::vector<T> parse_integer_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (auto item : list_items(key, text)) {
    out.push_back(parse_integer<T>(key, item));
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (auto item : list_items(key, text)) {
    out.push_back(parse_real(key, item));
  }
  return out;
}

[[noreturn]] void range(const std::string& what) {
  throw ConfigError(ConfigError::Kind::Range, what);
}

// Splits a line into comma-separated segments, ignoring commas inside brackets.
std::vector<std::string_view> split_pairs(std::string_view line) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '[') {
      ++depth;
    } else if (line[k] == ']') {
      --depth;
    } else if (line[k] == ',' && depth == 0) {
      out.push_back(line.substr(start, k - start));
      start = k + 1;
    }
  }
  out.push_back(line.substr(start));
  return out;
}

} // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "experiment") {
    const auto name = parse_string(value);
    const auto e = experiment_from_string(name);
    if (!e) {
      throw ConfigError(ConfigError::Kind::Syntax, "unknown experiment '" + name + "'");
    }
    cfg.experiment = *e;
  } else if (key == "seed") {
    cfg.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_integer<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.out = parse_string(value);
  } else if (key == "beta") {
    cfg.medium.attenuation = parse_real(key, value);
  } else if (key == "omega") {
    cfg.medium.phase_rate = parse_real(key, value);
  } else if (key == "eta") {
    cfg.medium.t_violation = parse_real(key, value);
  } else if (key == "r") {
    cfg.reinforcement.factor = parse_real(key, value);
  } else if (key == "epsilon") {
    cfg.reinforcement.epsilon = parse_real(key, value);
  } else if (key == "emitter_site") {
    cfg.emitter_site = parse_integer<std::int64_t>(key, value);
  } else if (key == "emitter_tick") {
    cfg.emitter_tick = parse_integer<std::int64_t>(key, value);
  } else if (key == "source_re") {
    cfg.source_re = parse_real(key, value);
  } else if (key == "source_im") {
    cfg.source_im = parse_real(key, value);
  } else if (key == "offer_energy") {
    cfg.offer.energy = parse_integer<std::int64_t>(key, value);
  } else if (key == "offer_momentum") {
    cfg.offer.momentum = parse_integer<std::int64_t>(key, value);
  } else if (key == "offer_spin_z") {
    cfg.offer.spin_z = parse_integer<std::int64_t>(key, value);
  } else if (key == "absorber_sites") {
    cfg.absorber_sites = parse_integer_list<std::int64_t>(key, value);
  } else if (key == "absorber_ticks") {
    cfg.absorber_ticks = parse_integer_list<std::int64_t>(key, value);
  } else if (key == "absorber_efficiency") {
    cfg.absorber_efficiency = parse_real_list(key, value);
  } else if (key == "particles") {
    cfg.particles = parse_integer<std::uint64_t>(key, value);
  } else if (key == "collisions") {
    cfg.collisions = parse_integer<std::uint64_t>(key, value);
  } else if (key == "speed_bins") {
    cfg.speed_bins = parse_integer<std::uint32_t>(key, value);
  } else if (key == "direction_sectors") {
    cfg.direction_sectors = parse_integer<std::uint32_t>(key, value);
  } else if (key == "theta_total") {
    cfg.theta_total = parse_real(key, value);
  } else if (key == "n_list") {
    cfg.n_list = parse_integer_list<std::uint64_t>(key, value);
  } else if (key == "frontier_sites") {
    cfg.frontier_sites = parse_integer<std::int64_t>(key, value);
  } else if (key == "frontier_attempts") {
    cfg.frontier_attempts = parse_integer<std::uint64_t>(key, value);
  } else if (key == "frontier_max_span") {
    cfg.frontier_max_span = parse_integer<std::int64_t>(key, value);
  } else if (key == "box_scales") {
    cfg.box_scales = parse_integer_list<std::int64_t>(key, value);
  } else {
    throw ConfigError(ConfigError::Kind::UnknownKey, "unknown key '" + std::string(key) + "'");
  }
}

void validate(const RunConfig& cfg) {
  validate(cfg.medium);
  validate(cfg.reinforcement);
  if (cfg.resolved_trials() == 0) {
    range("trials must be positive");
  }
  if ((cfg.experiment == Experiment::Sites || cfg.experiment == Experiment::Zeno) &&
      cfg.resolved_trials() < 10000) {
    range("the " + std::string(to_string(cfg.experiment)) + " experiment needs trials >= 10000");
  }
  if (cfg.out.empty()) {
    range("out must name a directory");
  }
  if (cfg.absorber_sites.size() != cfg.absorber_ticks.size() ||
      cfg.absorber_sites.size() != cfg.absorber_efficiency.size()) {
    range("absorber_sites, absorber_ticks and absorber_efficiency must have equal lengths");
  }
  for (double eff : cfg.absorber_efficiency) {
    if (!(eff >= 0.0 && eff <= 1.0)) {
      range("absorber_efficiency values must lie in [0,1]");
    }
  }
  if (cfg.particles < 100) {
    range("particles must be >= 100");
  }
  if (cfg.particles > UINT32_MAX) {
    range("particles must fit in 32 bits");
  }
  if (cfg.speed_bins == 0 || cfg.direction_sectors == 0) {
    range("speed_bins and direction_sectors must be positive");
  }
  if (cfg.n_list.empty()) {
    range("n_list must not be empty");
  }
  for (auto n : cfg.n_list) {
    if (n == 0) {
      range("n_list entries must be >= 1");
    }
  }
  if (cfg.frontier_sites < 2) {
    range("frontier_sites must be >= 2");
  }
  if (cfg.frontier_max_span < 1) {
    range("frontier_max_span must be >= 1");
  }
  for (auto s : cfg.box_scales) {
    if (s < 1 || (s & (s - 1)) != 0) {
      range("box_scales entries must be powers of two >= 1");
    }
  }
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (trim(line).empty()) {
      continue;
    }
    for (auto pair : split_pairs(line)) {
      pair = trim(pair);
      if (pair.empty()) {
        continue;
      }
      const auto eq = pair.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError(ConfigError::Kind::Syntax,
                          "line " + std::to_string(line_no) + ": expected key = value, got '" +
                              std::string(pair) + "'");
      }
      const auto key = trim(pair.substr(0, eq));
      const auto value = trim(pair.substr(eq + 1));
      try {
        apply_setting(cfg, key, value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(ConfigError::Kind::MissingFile,
                      "cannot read config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

} // namespace tisim
