#pragma once

#include "tisim/handshake.hpp"
#include "tisim/propagation.hpp"
#include "tisim/random.hpp"
#include "tisim/spacetime.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace tisim {

enum class CellState { Open, Pending, Committed };

[[nodiscard]] std::string_view to_string(CellState s) noexcept;

struct Cell {
  CellState state = CellState::Open;
  std::uint64_t commit_order = 0;  // 0 for baseline rows, otherwise 1-based transaction order
};

/// Lattice cells on the light-cone diagonal from `from` to `to`, both ends
/// included. Throws std::invalid_argument if `to` is not on the forward cone.
[[nodiscard]] std::vector<SpacetimeEvent> handshake_path(const SpacetimeEvent& from,
                                                         const SpacetimeEvent& to);

/// Per-site frontier height: the largest tick t such that every cell at that
/// site with tick <= t is committed, or -1.
struct FrontierProfile {
  std::vector<std::int64_t> heights;
};

/// Which cells are settled past, which are held by an in-flight handshake,
/// and which are still open, over sites [0, sites) x ticks [0, ticks).
/// Committed cells never change again.
class CommitmentMap {
public:
  CommitmentMap(std::int64_t sites, std::int64_t ticks);

  [[nodiscard]] std::int64_t sites() const noexcept { return sites_; }
  [[nodiscard]] std::int64_t ticks() const noexcept { return ticks_; }
  [[nodiscard]] bool in_bounds(const SpacetimeEvent& e) const noexcept;
  [[nodiscard]] const Cell& at(std::int64_t site, std::int64_t tick) const;
  [[nodiscard]] std::uint64_t committed_cells() const noexcept { return committed_; }
  [[nodiscard]] std::uint64_t transactions_applied() const noexcept { return order_; }

  /// Commits an entire tick row as the pre-existing past (commit order 0).
  void commit_row(std::int64_t tick);

  /// Marks the span of a Selected/Reinforcing transaction as Pending.
  void mark_pending(const Transaction& tx);

  /// Commits the emitter cell, the absorber cell and the path between them for a
  /// Completed transaction and clears its pending marks; aborted transactions
  /// leave the map unchanged. Throws ConflictError (map untouched) if any cell
  /// is already committed or held by another transaction, std::out_of_range
  /// when the path leaves the grid, IllegalPost for other states.
  void apply(const Transaction& tx);

  [[nodiscard]] FrontierProfile profile() const;

private:
  [[nodiscard]] std::size_t index(std::int64_t site, std::int64_t tick) const noexcept;
  [[nodiscard]] std::vector<std::size_t> span_cells(const Transaction& tx) const;

  std::int64_t sites_;
  std::int64_t ticks_;
  std::vector<Cell> cells_;
  std::map<std::size_t, std::uint64_t> pending_owner_;  // cell -> tx id
  std::uint64_t committed_ = 0;
  std::uint64_t order_ = 0;
};

/// Value-style wrapper around CommitmentMap::apply.
[[nodiscard]] CommitmentMap apply_transaction(CommitmentMap map, const Transaction& tx);

struct Roughness {
  double width = 0.0;            // population standard deviation of h
  std::int64_t finger_max = 0;   // max(h) - median(h), lower median for even counts
};

/// Throws std::invalid_argument if the profile is empty or any site has h < 0.
[[nodiscard]] Roughness roughness(const FrontierProfile& profile);

/// Cells of the settled past (tick <= h(site)) with a 4-neighbour inside the
/// site range that is not settled past. Cells above the grid count as open.
[[nodiscard]] std::vector<SpacetimeEvent> boundary_cells(const CommitmentMap& map);

struct BoxCount {
  std::int64_t scale = 1;
  std::uint64_t boxes = 0;
};

/// Box counts of the boundary at each requested scale, largest first. Scale 1
/// (one lattice cell) is always the last row and nothing finer is reported.
/// Throws std::invalid_argument for scales that are not powers of two or exceed
/// the grid.
[[nodiscard]] std::vector<BoxCount> scale_profile(const CommitmentMap& map,
                                                  std::span<const std::int64_t> scales);

/// site,tick,state,commit_order for every cell, tick-major.
void write_cell_grid_csv(std::ostream& os, const CommitmentMap& map);

/// Random-deposition scenario: each attempt picks a site uniformly, places an
/// emitter one tick above the highest committed cell there and offers one
/// energy quantum to candidate absorbers up to `max_span` cells away along
/// either light-cone direction. Candidates whose path would hit already
/// committed cells are left out, so the generated stream never conflicts.
struct GrowthParams {
  std::int64_t sites = 64;
  std::uint64_t attempts = 200;
  std::int64_t max_span = 3;
  Medium medium;
  ReinforcementParams reinforcement;
};

/// Transactions of the random-deposition scenario (aborted attempts included).
/// The generator keeps its own column tops; it never reads a CommitmentMap.
[[nodiscard]] std::vector<Transaction> grow_many_small(const GrowthParams& p, RandomSource& rng);

/// One handshake from (0,1) to (sites-1, sites) carrying `energy` quanta.
[[nodiscard]] Transaction spanning_transaction(std::int64_t sites, std::int64_t energy,
                                               const Medium& m, const ReinforcementParams& r,
                                               RandomSource& rng);

/// Builds the map for a transaction stream on a grid of `sites` columns, with
/// tick row 0 committed as the initial past and enough ticks for every event.
[[nodiscard]] CommitmentMap track(std::int64_t sites, std::span<const Transaction> txs);

} // namespace tisim
