#include "tisim/zeno.hpp"

#include <cmath>
#include <stdexcept>

namespace tisim {

TwoLevelState evolve(const TwoLevelState& s, double theta) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return {add(scale(s.a, c), scale(s.b, -sn)), add(scale(s.a, sn), scale(s.b, c))};
}

std::pair<Outcome, TwoLevelState> measure(const TwoLevelState& s, RandomSource& rng) {
  const double p_zero = norm_sq(s.a) / s.norm();
  if (rng.uniform() < p_zero) {
    return {Outcome::Zero, TwoLevelState::ground()};
  }
  return {Outcome::One, TwoLevelState::excited()};
}

bool ZenoResult::within_band() const {
  return std::fabs(empirical - expected) <= three_sigma;
}

double zeno_survival_expected(double theta_total, std::uint64_t n) {
  const double c = std::cos(theta_total / static_cast<double>(n));
  return std::pow(c * c, static_cast<double>(n));
}

ZenoResult zeno_run(double theta_total, std::uint64_t n, std::uint64_t trials, RandomSource& rng) {
  if (n == 0) {
    throw std::invalid_argument("zeno run needs at least one measurement");
  }
  if (trials == 0) {
    throw std::invalid_argument("zeno run needs at least one trial");
  }
  const double step = theta_total / static_cast<double>(n);
  ZenoResult r;
  r.steps = n;
  r.trials = trials;
  for (std::uint64_t k = 0; k < trials; ++k) {
    RandomSource trial_rng = rng.split(k);
    TwoLevelState s = TwoLevelState::ground();
    bool survived = true;
    for (std::uint64_t m = 0; m < n; ++m) {
      auto [outcome, collapsed] = measure(evolve(s, step), trial_rng);
      if (outcome == Outcome::One) {
        survived = false;
        break;
      }
      s = collapsed;
    }
    if (survived) {
      ++r.survivors;
    }
  }
  r.expected = zeno_survival_expected(theta_total, n);
  r.empirical = static_cast<double>(r.survivors) / static_cast<double>(trials);
  r.three_sigma = 3.0 * std::sqrt(r.expected * (1.0 - r.expected) / static_cast<double>(trials));
  return r;
}

} // namespace tisim
