#include "tisim/handshake.hpp"

#include "tisim/errors.hpp"
#include "tisim/format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

namespace tisim {

EchoTable::EchoTable(std::vector<EchoEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const EchoEntry& a, const EchoEntry& b) { return a.absorber_id < b.absorber_id; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i].strength > 0.0) || !std::isfinite(entries_[i].strength)) {
      throw std::invalid_argument("echo strengths must be finite and strictly positive");
    }
    if (i > 0 && entries_[i].absorber_id == entries_[i - 1].absorber_id) {
      throw std::invalid_argument("duplicate absorber id " +
                                  std::to_string(entries_[i].absorber_id.value) + " in echo table");
    }
  }
}

double EchoTable::total_strength() const noexcept {
  double total = 0.0;
  for (const auto& e : entries_) {
    total += e.strength;
  }
  return total;
}

std::optional<double> EchoTable::strength_of(PartyId id) const noexcept {
  for (const auto& e : entries_) {
    if (e.absorber_id == id) {
      return e.strength;
    }
  }
  return std::nullopt;
}

EchoTable EchoTable::scaled(double factor) const {
  std::vector<EchoEntry> out(entries_.begin(), entries_.end());
  for (auto& e : out) {
    e.strength *= factor;
  }
  return EchoTable(std::move(out));
}

void validate(const ReinforcementParams& p) {
  if (!(p.factor > 1.0) || !std::isfinite(p.factor)) {
    throw ConfigError(ConfigError::Kind::Range, "reinforcement factor r must be > 1");
  }
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) {
    throw ConfigError(ConfigError::Kind::Range, "dominance tolerance epsilon must lie in (0,1)");
  }
}

StateKind kind_of(const TransactionState& s) noexcept {
  return static_cast<StateKind>(s.index());
}

std::string_view to_string(StateKind k) noexcept {
  switch (k) {
    case StateKind::Offered: return "offered";
    case StateKind::Confirmed: return "confirmed";
    case StateKind::Selected: return "selected";
    case StateKind::Reinforcing: return "reinforcing";
    case StateKind::Completed: return "completed";
    case StateKind::Aborted: return "aborted";
  }
  return "?";
}

bool is_legal_transition(StateKind from, StateKind to) noexcept {
  using K = StateKind;
  switch (from) {
    case K::Offered: return to == K::Confirmed || to == K::Aborted;
    case K::Confirmed: return to == K::Selected || to == K::Aborted;
    case K::Selected: return to == K::Reinforcing;
    case K::Reinforcing: return to == K::Reinforcing || to == K::Completed;
    case K::Completed:
    case K::Aborted: return false;
  }
  return false;
}

void Transaction::advance(TransactionState next) {
  const StateKind from = kind();
  const StateKind to = kind_of(next);
  if (!is_legal_transition(from, to)) {
    throw IllegalTransition("illegal transaction transition " + std::string(to_string(from)) +
                            " -> " + std::string(to_string(to)));
  }
  if (from == StateKind::Reinforcing && to == StateKind::Reinforcing &&
      std::get<Reinforcing>(next).round <= std::get<Reinforcing>(state).round) {
    throw IllegalTransition("reinforcement rounds must strictly increase");
  }
  state = std::move(next);
  trail.push_back(to);
}

EchoTable collect_confirmations(const Emitter& e, std::span<const Absorber> absorbers,
                                const Medium& m, EvaluationSite site) {
  std::set<PartyId> seen;
  std::vector<EchoEntry> entries;
  for (const auto& a : absorbers) {
    if (!seen.insert(a.id).second) {
      throw std::invalid_argument("duplicate absorber id " + std::to_string(a.id.value));
    }
    const ConfirmationEcho echo = echo_strength(e, a, m, site);
    if (echo.strength > 0.0) {
      entries.push_back({a.id, echo.strength});
    }
  }
  return EchoTable(std::move(entries));
}

PartyId stochastic_choice(const EchoTable& table, RandomSource& rng) {
  if (table.empty()) {
    throw NoAbsorber();
  }
  const double target = rng.uniform() * table.total_strength();
  double cumulative = 0.0;
  for (const auto& entry : table.entries()) {
    cumulative += entry.strength;
    if (cumulative > target) {
      return entry.absorber_id;
    }
  }
  // Rounding can leave the final running sum a hair below u * S.
  return table.entries().back().absorber_id;
}

Transaction reinforce_to_completion(Transaction tx, const ReinforcementParams& p) {
  validate(p);
  if (tx.kind() != StateKind::Selected) {
    throw IllegalTransition("reinforcement requires a Selected transaction");
  }
  const PartyId chosen = std::get<Selected>(tx.state).absorber_id;
  const auto selected_weight = tx.echoes.strength_of(chosen);
  if (!selected_weight) {
    throw IllegalTransition("selected absorber is missing from the echo table");
  }

  double others = 0.0;
  for (const auto& entry : tx.echoes.entries()) {
    if (entry.absorber_id != chosen) {
      others += entry.strength;
    }
  }

  double weight = *selected_weight;
  for (int round = 1;; ++round) {
    weight *= p.factor;
    const double dominance = std::isinf(weight) ? 1.0 : weight / (weight + others);
    tx.advance(Reinforcing{round, dominance});
    // d >= 1 - eps  <=>  eps * w >= (1 - eps) * others, free of the division.
    if (std::isinf(weight) || p.epsilon * weight >= (1.0 - p.epsilon) * others) {
      tx.rounds = round;
      tx.dominance = dominance;
      break;
    }
  }
  tx.advance(Completed{});
  return tx;
}

Transaction run_event(Emitter& e, std::span<const Absorber> absorbers, const Medium& m,
                      EvaluationSite site, RandomSource& rng, const ReinforcementParams& p,
                      std::uint64_t tx_id) {
  validate(p);
  validate(m);
  if (!e.can_cover_offer()) {
    throw InsufficientInventory("emitter " + std::to_string(e.id.value) +
                                " cannot cover its offered quanta");
  }

  Transaction tx;
  tx.id = tx_id;
  tx.seed = rng.seed();
  tx.emitter_id = e.id;
  tx.emission_event = e.at;
  tx.evaluation_site = site;

  // Stages 1 and 2: offer wave out, confirmation echoes back.
  tx.echoes = collect_confirmations(e, absorbers, m, site);
  if (tx.echoes.empty()) {
    tx.advance(Aborted{AbortReason::NoAbsorber});
    return tx;
  }
  tx.advance(Confirmed{tx.echoes});

  // Stage 3: stochastic choice.
  const PartyId chosen = stochastic_choice(tx.echoes, rng);
  tx.advance(Selected{chosen});
  tx.chosen = chosen;
  const auto absorber = std::find_if(absorbers.begin(), absorbers.end(),
                                     [&](const Absorber& a) { return a.id == chosen; });
  tx.absorption_event = absorber->at;

  // Stage 4: repetition to completion.
  tx = reinforce_to_completion(std::move(tx), p);
  tx.quanta = e.offer_quanta;
  e.inventory = bundle_sub(e.inventory, e.offer_quanta);
  return tx;
}

std::vector<Transaction> run_trials(const Scenario& s, EvaluationSite site,
                                    std::uint64_t master_seed, std::uint64_t trials) {
  std::vector<Transaction> out;
  out.reserve(trials);
  for (std::uint64_t k = 0; k < trials; ++k) {
    Emitter emitter = s.emitter;
    RandomSource rng(derive_seed(master_seed, k));
    out.push_back(run_event(emitter, s.absorbers, s.medium, site, rng, s.reinforcement, k));
  }
  return out;
}

std::vector<double> selection_probabilities(const EchoTable& t) {
  const double total = t.total_strength();
  std::vector<double> p;
  p.reserve(t.size());
  for (const auto& e : t.entries()) {
    p.push_back(e.strength / total);
  }
  return p;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distributions differ in support size");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::fabs(p[i] - q[i]);
  }
  return 0.5 * sum;
}

namespace {

std::vector<double> frequencies(const EchoTable& table, std::span<const Transaction> txs) {
  std::vector<std::uint64_t> counts(table.size(), 0);
  const auto entries = table.entries();
  for (const auto& tx : txs) {
    if (!tx.chosen) {
      continue;
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].absorber_id == *tx.chosen) {
        ++counts[i];
        break;
      }
    }
  }
  std::vector<double> f;
  f.reserve(counts.size());
  for (auto c : counts) {
    f.push_back(txs.empty() ? 0.0 : static_cast<double>(c) / static_cast<double>(txs.size()));
  }
  return f;
}

} // namespace

SiteComparison compare_sites(const Scenario& s, RandomSource& rng, std::uint64_t trials) {
  const EchoTable post = collect_confirmations(s.emitter, s.absorbers, s.medium, EvaluationSite::Post);
  const EchoTable prior =
      collect_confirmations(s.emitter, s.absorbers, s.medium, EvaluationSite::Prior);
  if (post.empty()) {
    throw NoAbsorber();
  }

  SiteComparison out;
  out.trials = trials;
  out.tables_equal = post == prior;
  for (const auto& e : post.entries()) {
    out.absorber_ids.push_back(e.absorber_id);
  }
  out.post_expected = selection_probabilities(post);
  out.prior_expected = selection_probabilities(prior);

  const std::uint64_t post_seed = rng.next_u64();
  const std::uint64_t prior_seed = rng.next_u64();
  const auto post_txs = run_trials(s, EvaluationSite::Post, post_seed, trials);
  const auto prior_txs = run_trials(s, EvaluationSite::Prior, prior_seed, trials);
  out.post_frequency = frequencies(post, post_txs);
  out.prior_frequency = frequencies(post, prior_txs);

  out.tv_distance = total_variation(out.post_frequency, out.prior_frequency);
  out.expected_tv = total_variation(out.post_expected, out.prior_expected);

  // Each |p_i - q_i| is a difference of two independent binomial proportions;
  // summing the per-category 3-sigma bounds and halving bounds the TV
  // deviation (exact for two categories).
  const auto n = static_cast<double>(trials);
  double null_sum = 0.0;
  double alt_sum = 0.0;
  for (std::size_t i = 0; i < out.post_expected.size(); ++i) {
    const double p = out.post_expected[i];
    const double q = out.prior_expected[i];
    null_sum += 3.0 * std::sqrt(2.0 * p * (1.0 - p) / n);
    alt_sum += 3.0 * std::sqrt((p * (1.0 - p) + q * (1.0 - q)) / n);
  }
  out.tv_bound = 0.5 * null_sum;
  out.tv_tolerance = 0.5 * alt_sum;
  return out;
}

void write_transaction_log(std::ostream& os, std::span<const Transaction> txs) {
  os << "trial,emitter_id,chosen_id,rounds,energy,momentum,spin_z,site,seed\n";
  for (const auto& tx : txs) {
    os << tx.id << ',' << tx.emitter_id.value << ',';
    if (tx.chosen) {
      os << tx.chosen->value;
    }
    os << ',' << tx.rounds << ',' << tx.quanta.energy << ',' << tx.quanta.momentum << ','
       << tx.quanta.spin_z << ',' << to_string(tx.evaluation_site) << ',' << tx.seed << '\n';
  }
}

} // namespace tisim
