#include "tisim/arrow.hpp"

#include "tisim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tisim {

double GasState::kinetic_energy() const noexcept {
  double e = 0.0;
  for (const auto& v : velocities) {
    e += 0.5 * (v.x * v.x + v.y * v.y);
  }
  return e;
}

Velocity GasState::momentum() const noexcept {
  Velocity p;
  for (const auto& v : velocities) {
    p.x += v.x;
    p.y += v.y;
  }
  return p;
}

double GasState::rms_speed() const noexcept {
  if (velocities.empty()) {
    return 0.0;
  }
  return std::sqrt(2.0 * kinetic_energy() / static_cast<double>(velocities.size()));
}

GasState GasState::negated() const {
  GasState out = *this;
  for (auto& v : out.velocities) {
    v = {-v.x, -v.y};
  }
  return out;
}

GasState two_delta_state(std::size_t n, double speed) {
  const double angle = std::numbers::pi / 16.0;
  const Velocity forward{speed * std::cos(angle), speed * std::sin(angle)};
  GasState s;
  s.velocities.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.velocities.push_back(k % 2 == 0 ? forward : Velocity{-forward.x, -forward.y});
  }
  return s;
}

VelocityBinning VelocityBinning::for_state(const GasState& s, std::uint32_t speed_bins,
                                           std::uint32_t direction_sectors) {
  if (speed_bins == 0 || direction_sectors == 0) {
    throw std::invalid_argument("binning needs at least one speed bin and one sector");
  }
  const double rms = s.rms_speed();
  return {rms > 0.0 ? 3.0 * rms : 1.0, speed_bins, direction_sectors};
}

std::size_t VelocityBinning::bin_of(const Velocity& v) const noexcept {
  const double speed = std::hypot(v.x, v.y);
  auto sb = static_cast<std::size_t>(speed / max_speed * speed_bins);
  sb = std::min<std::size_t>(sb, speed_bins - 1);

  double angle = std::atan2(v.y, v.x);
  if (angle < 0.0) {
    angle += 2.0 * std::numbers::pi;
  }
  auto db = static_cast<std::size_t>(angle / (2.0 * std::numbers::pi) * direction_sectors);
  db = std::min<std::size_t>(db, direction_sectors - 1);
  return sb * direction_sectors + db;
}

std::vector<double> histogram(const GasState& s, const VelocityBinning& b) {
  std::vector<std::size_t> counts(b.bin_count(), 0);
  for (const auto& v : s.velocities) {
    ++counts[b.bin_of(v)];
  }
  std::vector<double> f(counts.size(), 0.0);
  if (s.velocities.empty()) {
    return f;
  }
  const auto n = static_cast<double>(s.velocities.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    f[k] = static_cast<double>(counts[k]) / n;
  }
  return f;
}

double h_value(std::span<const double> fractions) {
  double total = 0.0;
  double h = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) {
      throw std::invalid_argument("histogram fractions must be non-negative");
    }
    total += f;
    if (f > 0.0) {
      h += f * std::log(f);
    }
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("histogram fractions must sum to 1");
  }
  return h;
}

void apply_collision(GasState& s, std::uint32_t i, std::uint32_t j, double angle) {
  Velocity& a = s.velocities[i];
  Velocity& b = s.velocities[j];
  const double cx = 0.5 * (a.x + b.x);
  const double cy = 0.5 * (a.y + b.y);
  const double gx = a.x - b.x;
  const double gy = a.y - b.y;
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  const double rx = c * gx - sn * gy;
  const double ry = sn * gx + c * gy;
  a = {cx + 0.5 * rx, cy + 0.5 * ry};
  b = {cx - 0.5 * rx, cy - 0.5 * ry};
}

CollisionRecord collide_pre_chaos(GasState& s, RandomSource& rng, std::uint64_t step) {
  const std::size_t n = s.size();
  if (n < 2) {
    throw std::invalid_argument("a collision needs at least two particles");
  }
  // Uniform unordered pair: i uniform, j uniform over the other n - 1.
  const auto i = static_cast<std::uint32_t>(rng.uniform_index(n));
  auto j = static_cast<std::uint32_t>(rng.uniform_index(n - 1));
  if (j >= i) {
    ++j;
  }
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  apply_collision(s, i, j, angle);
  return {step, i, j, angle};
}

namespace {

std::uint64_t interval_for(std::size_t n) { return std::max<std::uint64_t>(1, n / 10); }

bool is_sample_step(std::uint64_t step, std::uint64_t interval, std::uint64_t total) {
  return step % interval == 0 || step == total;
}

} // namespace

ForwardRun simulate_forward(GasState initial, std::uint64_t steps, RandomSource& rng,
                            const VelocityBinning& binning) {
  if (initial.size() < 2) {
    throw std::invalid_argument("the gas needs at least two particles");
  }
  ForwardRun run;
  run.history.binning = binning;
  run.history.sample_interval = interval_for(initial.size());
  run.history.records.reserve(steps);
  run.initial = initial;

  GasState state = std::move(initial);
  run.trace.push_back({0, h_value(histogram(state, binning))});
  for (std::uint64_t step = 0; step < steps; ++step) {
    run.history.records.push_back(collide_pre_chaos(state, rng, step));
    const std::uint64_t done = step + 1;
    if (is_sample_step(done, run.history.sample_interval, steps)) {
      run.trace.push_back({done, h_value(histogram(state, binning))});
    }
  }
  run.history.final_state = std::move(state);
  return run;
}

ForwardRun simulate_forward(GasState initial, std::uint64_t steps, RandomSource& rng) {
  const VelocityBinning binning = VelocityBinning::for_state(initial);
  return simulate_forward(std::move(initial), steps, rng, binning);
}

ForwardRun simulate_forward(std::size_t n, std::uint64_t steps, RandomSource& rng) {
  return simulate_forward(two_delta_state(n), steps, rng);
}

ReplayResult reverse_replay(const GasState& initial, const CollisionHistory& history) {
  const std::size_t n = initial.size();
  if (history.final_state.size() != n) {
    throw ReplayMismatch("history final state has a different particle count");
  }
  if (history.sample_interval == 0) {
    throw ReplayMismatch("history sample interval must be positive");
  }

  GasState check = initial;
  for (std::size_t k = 0; k < history.records.size(); ++k) {
    const auto& r = history.records[k];
    if (r.step != k) {
      throw ReplayMismatch("collision record " + std::to_string(k) + " has step " +
                           std::to_string(r.step));
    }
    if (r.i >= n || r.j >= n || r.i == r.j || !std::isfinite(r.angle)) {
      throw ReplayMismatch("collision record " + std::to_string(k) + " is malformed");
    }
    apply_collision(check, r.i, r.j, r.angle);
  }
  for (std::size_t p = 0; p < n; ++p) {
    const Velocity& a = check.velocities[p];
    const Velocity& b = history.final_state.velocities[p];
    if (std::fabs(a.x - b.x) > 1e-9 || std::fabs(a.y - b.y) > 1e-9) {
      throw ReplayMismatch("history does not reproduce the recorded final state (particle " +
                           std::to_string(p) + ")");
    }
  }

  const std::uint64_t total = history.records.size();
  ReplayResult out;
  GasState state = history.final_state.negated();
  out.trace.push_back({0, h_value(histogram(state, history.binning))});
  for (std::uint64_t r = 0; r < total; ++r) {
    const auto& rec = history.records[total - 1 - r];
    apply_collision(state, rec.i, rec.j, -rec.angle);
    const std::uint64_t done = r + 1;
    if (is_sample_step(total - done, history.sample_interval, total)) {
      out.trace.push_back({done, h_value(histogram(state, history.binning))});
    }
  }
  out.final_state = std::move(state);
  return out;
}

double maxwell_reference_h(std::size_t n, double rms_speed, const VelocityBinning& b,
                           RandomSource& rng, std::size_t draws) {
  if (n == 0 || draws == 0) {
    throw std::invalid_argument("maxwell reference needs n > 0 and draws > 0");
  }
  // <|v|^2> = 2 sigma^2 in two dimensions.
  const double sigma = rms_speed / std::numbers::sqrt2;
  double sum = 0.0;
  GasState sample;
  sample.velocities.resize(n);
  for (std::size_t d = 0; d < draws; ++d) {
    for (auto& v : sample.velocities) {
      v.x = sigma * rng.normal();
      v.y = sigma * rng.normal();
    }
    sum += h_value(histogram(sample, b));
  }
  return sum / static_cast<double>(draws);
}

TrendCheck check_trend(const HTrace& trace, TrendDirection direction) {
  TrendCheck out;
  if (trace.empty()) {
    out.endpoints_ok = true;
    return out;
  }
  const double first = trace.front().h;
  const double last = trace.back().h;
  out.endpoints_ok = direction == TrendDirection::NonIncreasing ? last <= first : last >= first;

  std::vector<double> diffs;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    diffs.push_back(trace[k].h - trace[k - 1].h);
  }
  out.steps = diffs.size();
  if (diffs.empty()) {
    return out;
  }

  // The equilibrium end is the tail of a forward trace and the head of a reversed one.
  const std::size_t half = diffs.size() / 2;
  const auto lo = direction == TrendDirection::NonIncreasing ? diffs.begin() + half : diffs.begin();
  const auto hi = direction == TrendDirection::NonIncreasing ? diffs.end()
                                                             : diffs.begin() + (diffs.size() - half);
  const auto count = static_cast<double>(hi - lo);
  double mean = 0.0;
  for (auto it = lo; it != hi; ++it) {
    mean += *it;
  }
  mean /= count;
  double var = 0.0;
  for (auto it = lo; it != hi; ++it) {
    var += (*it - mean) * (*it - mean);
  }
  out.tau = 3.0 * std::sqrt(var / count);

  for (double d : diffs) {
    const bool against = direction == TrendDirection::NonIncreasing ? d > out.tau : -d > out.tau;
    if (against) {
      ++out.violations;
    }
  }
  return out;
}

} // namespace tisim
