#pragma once

#include "tisim/entities.hpp"
#include "tisim/propagation.hpp"
#include "tisim/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace tisim {

struct EchoEntry {
  PartyId absorber_id;
  double strength = 0.0;

  friend bool operator==(const EchoEntry&, const EchoEntry&) = default;
};

/// Responding absorbers in ascending id order, every strength strictly positive.
class EchoTable {
public:
  EchoTable() = default;

  /// Sorts by id. Throws std::invalid_argument on duplicate ids or a
  /// non-positive / non-finite strength.
  explicit EchoTable(std::vector<EchoEntry> entries);

  [[nodiscard]] std::span<const EchoEntry> entries() const noexcept { return entries_; }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] double total_strength() const noexcept;
  [[nodiscard]] std::optional<double> strength_of(PartyId id) const noexcept;

  /// Same ids, every strength multiplied by `factor` (> 0).
  [[nodiscard]] EchoTable scaled(double factor) const;

  friend bool operator==(const EchoTable&, const EchoTable&) = default;

private:
  std::vector<EchoEntry> entries_;
};

/// Geometric reinforcement: each round multiplies the selected weight by
/// `factor`; the handshake completes once its share reaches 1 - epsilon.
struct ReinforcementParams {
  double factor = 2.0;
  double epsilon = 1e-3;
};

/// Throws ConfigError(Range) unless factor > 1 and epsilon in (0,1).
void validate(const ReinforcementParams& p);

// Transaction states.
enum class StateKind { Offered, Confirmed, Selected, Reinforcing, Completed, Aborted };
enum class AbortReason { NoAbsorber };

struct Offered {};
struct Confirmed {
  EchoTable echoes;
};
struct Selected {
  PartyId absorber_id;
};
struct Reinforcing {
  int round = 0;
  double dominance = 0.0;
};
struct Completed {};
struct Aborted {
  AbortReason reason = AbortReason::NoAbsorber;
};

using TransactionState = std::variant<Offered, Confirmed, Selected, Reinforcing, Completed, Aborted>;

[[nodiscard]] StateKind kind_of(const TransactionState& s) noexcept;
[[nodiscard]] std::string_view to_string(StateKind k) noexcept;

/// Offered -> Confirmed -> Selected -> Reinforcing (-> Reinforcing with the
/// next round) -> Completed, and Offered/Confirmed -> Aborted.
[[nodiscard]] bool is_legal_transition(StateKind from, StateKind to) noexcept;

struct Transaction {
  std::uint64_t id = 0;
  std::uint64_t seed = 0;  // seed of the random source that drove the choice
  PartyId emitter_id;
  SpacetimeEvent emission_event;
  EchoTable echoes;
  std::optional<PartyId> chosen;
  std::optional<SpacetimeEvent> absorption_event;
  QuantaBundle quanta;
  int rounds = 0;
  double dominance = 0.0;
  EvaluationSite evaluation_site = EvaluationSite::Post;
  TransactionState state = Offered{};
  std::vector<StateKind> trail{StateKind::Offered};

  [[nodiscard]] StateKind kind() const noexcept { return kind_of(state); }
  [[nodiscard]] bool completed() const noexcept { return kind() == StateKind::Completed; }

  /// Moves to `next`, recording it in the trail. Throws IllegalTransition.
  void advance(TransactionState next);
};

/// Echoes of every absorber that responds with nonzero strength.
/// Throws std::invalid_argument if absorber ids repeat.
[[nodiscard]] EchoTable collect_confirmations(const Emitter& e, std::span<const Absorber> absorbers,
                                              const Medium& m, EvaluationSite site);

/// Inverse-CDF draw over the table's id order with a single uniform u:
/// the first entry whose running sum exceeds u * S. Throws NoAbsorber when empty.
[[nodiscard]] PartyId stochastic_choice(const EchoTable& table, RandomSource& rng);

/// Runs reinforcement rounds on a Selected transaction until the chosen
/// absorber dominates. No simulated time passes.
[[nodiscard]] Transaction reinforce_to_completion(Transaction tx, const ReinforcementParams& p);

/// The full four-stage handshake for one emission. On completion the offered
/// quanta are removed from `e.inventory`; an empty echo table aborts the
/// transaction and leaves the emitter untouched.
[[nodiscard]] Transaction run_event(Emitter& e, std::span<const Absorber> absorbers, const Medium& m,
                                    EvaluationSite site, RandomSource& rng,
                                    const ReinforcementParams& p, std::uint64_t tx_id = 0);

/// One emitter facing a fixed set of absorbers.
struct Scenario {
  Emitter emitter;
  std::vector<Absorber> absorbers;
  Medium medium;
  ReinforcementParams reinforcement;
};

/// Runs `trials` independent events. Trial k uses a fresh copy of the
/// scenario emitter and RandomSource(derive_seed(master_seed, k)).
[[nodiscard]] std::vector<Transaction> run_trials(const Scenario& s, EvaluationSite site,
                                                  std::uint64_t master_seed, std::uint64_t trials);

/// Absorber selection probabilities e_i / S implied by an echo table.
[[nodiscard]] std::vector<double> selection_probabilities(const EchoTable& t);

struct SiteComparison {
  std::vector<PartyId> absorber_ids;
  std::vector<double> post_expected;
  std::vector<double> prior_expected;
  std::vector<double> post_frequency;
  std::vector<double> prior_frequency;
  std::uint64_t trials = 0;
  double tv_distance = 0.0;  // between the two empirical distributions
  double expected_tv = 0.0;  // between the analytic distributions
  double tv_bound = 0.0;     // 3-sigma allowance for TV under identical distributions
  double tv_tolerance = 0.0; // 3-sigma allowance for |tv_distance - expected_tv|
  bool tables_equal = false; // Post and Prior echo tables identical entry by entry
};

/// Runs the scenario under both evaluation sites with independent child
/// streams drawn from `rng` and compares the selection distributions.
[[nodiscard]] SiteComparison compare_sites(const Scenario& s, RandomSource& rng,
                                           std::uint64_t trials);

/// Total-variation distance 1/2 sum |p_i - q_i|.
[[nodiscard]] double total_variation(std::span<const double> p, std::span<const double> q);

/// CSV header + one row per transaction:
/// trial,emitter_id,chosen_id,rounds,energy,momentum,spin_z,site,seed
void write_transaction_log(std::ostream& os, std::span<const Transaction> txs);

} // namespace tisim
