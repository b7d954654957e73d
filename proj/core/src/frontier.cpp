#include "tisim/frontier.hpp"

#include "tisim/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

namespace tisim {

std::string_view to_string(CellState s) noexcept {
  switch (s) {
    case CellState::Open: return "open";
    case CellState::Pending: return "pending";
    case CellState::Committed: return "committed";
  }
  return "?";
}

std::vector<SpacetimeEvent> handshake_path(const SpacetimeEvent& from, const SpacetimeEvent& to) {
  if (!on_forward_cone(from, to)) {
    throw std::invalid_argument("handshake path endpoints are not light-cone connected");
  }
  const std::int64_t dt = to.tick - from.tick;
  const std::int64_t dir = to.site > from.site ? 1 : -1;
  std::vector<SpacetimeEvent> path;
  path.reserve(static_cast<std::size_t>(dt) + 1);
  for (std::int64_t k = 0; k <= dt; ++k) {
    path.push_back({from.site + dir * k, from.tick + k});
  }
  return path;
}

CommitmentMap::CommitmentMap(std::int64_t sites, std::int64_t ticks)
    : sites_(sites), ticks_(ticks) {
  if (sites <= 0 || ticks <= 0) {
    throw std::invalid_argument("commitment map needs positive extents");
  }
  cells_.resize(static_cast<std::size_t>(sites * ticks));
}

bool CommitmentMap::in_bounds(const SpacetimeEvent& e) const noexcept {
  return e.site >= 0 && e.site < sites_ && e.tick >= 0 && e.tick < ticks_;
}

std::size_t CommitmentMap::index(std::int64_t site, std::int64_t tick) const noexcept {
  return static_cast<std::size_t>(tick * sites_ + site);
}

const Cell& CommitmentMap::at(std::int64_t site, std::int64_t tick) const {
  if (!in_bounds({site, tick})) {
    throw std::out_of_range("cell outside commitment map");
  }
  return cells_[index(site, tick)];
}

void CommitmentMap::commit_row(std::int64_t tick) {
  if (tick < 0 || tick >= ticks_) {
    throw std::out_of_range("row outside commitment map");
  }
  for (std::int64_t s = 0; s < sites_; ++s) {
    Cell& c = cells_[index(s, tick)];
    if (c.state == CellState::Committed) {
      continue;
    }
    if (c.state == CellState::Pending) {
      throw ConflictError("row commit would overwrite a pending cell");
    }
    c = {CellState::Committed, 0};
    ++committed_;
  }
}

std::vector<std::size_t> CommitmentMap::span_cells(const Transaction& tx) const {
  if (!tx.absorption_event) {
    throw IllegalPost("transaction " + std::to_string(tx.id) + " has no absorption event");
  }
  std::vector<std::size_t> out;
  for (const auto& e : handshake_path(tx.emission_event, *tx.absorption_event)) {
    if (!in_bounds(e)) {
      throw std::out_of_range("transaction " + std::to_string(tx.id) + " leaves the grid");
    }
    out.push_back(index(e.site, e.tick));
  }
  return out;
}

void CommitmentMap::mark_pending(const Transaction& tx) {
  const StateKind k = tx.kind();
  if (k != StateKind::Selected && k != StateKind::Reinforcing) {
    throw IllegalPost("only in-flight transactions can hold pending cells");
  }
  const auto span = span_cells(tx);
  for (std::size_t idx : span) {
    const Cell& c = cells_[idx];
    if (c.state == CellState::Committed) {
      throw ConflictError("transaction " + std::to_string(tx.id) + " overlaps committed cells");
    }
    const auto owner = pending_owner_.find(idx);
    if (owner != pending_owner_.end() && owner->second != tx.id) {
      throw ConflictError("transaction " + std::to_string(tx.id) +
                          " overlaps in-flight transaction " + std::to_string(owner->second));
    }
  }
  for (std::size_t idx : span) {
    cells_[idx].state = CellState::Pending;
    pending_owner_[idx] = tx.id;
  }
}

void CommitmentMap::apply(const Transaction& tx) {
  const StateKind k = tx.kind();
  if (k == StateKind::Aborted) {
    return;
  }
  if (k != StateKind::Completed) {
    throw IllegalPost("only completed transactions can be committed");
  }
  const auto span = span_cells(tx);
  for (std::size_t idx : span) {
    if (cells_[idx].state == CellState::Committed) {
      throw ConflictError("transaction " + std::to_string(tx.id) + " conflicts with committed cells");
    }
    const auto owner = pending_owner_.find(idx);
    if (owner != pending_owner_.end() && owner->second != tx.id) {
      throw ConflictError("transaction " + std::to_string(tx.id) +
                          " conflicts with in-flight transaction " + std::to_string(owner->second));
    }
  }
  ++order_;
  for (std::size_t idx : span) {
    cells_[idx] = {CellState::Committed, order_};
    pending_owner_.erase(idx);
    ++committed_;
  }
}

FrontierProfile CommitmentMap::profile() const {
  FrontierProfile p;
  p.heights.assign(static_cast<std::size_t>(sites_), -1);
  for (std::int64_t s = 0; s < sites_; ++s) {
    std::int64_t h = -1;
    while (h + 1 < ticks_ && cells_[index(s, h + 1)].state == CellState::Committed) {
      ++h;
    }
    p.heights[static_cast<std::size_t>(s)] = h;
  }
  return p;
}

CommitmentMap apply_transaction(CommitmentMap map, const Transaction& tx) {
  map.apply(tx);
  return map;
}

Roughness roughness(const FrontierProfile& profile) {
  const auto& h = profile.heights;
  if (h.empty()) {
    throw std::invalid_argument("roughness of an empty profile");
  }
  if (std::any_of(h.begin(), h.end(), [](std::int64_t v) { return v < 0; })) {
    throw std::invalid_argument("roughness needs every site committed at least once");
  }
  const auto n = static_cast<double>(h.size());
  double mean = 0.0;
  for (auto v : h) {
    mean += static_cast<double>(v);
  }
  mean /= n;
  double var = 0.0;
  for (auto v : h) {
    const double d = static_cast<double>(v) - mean;
    var += d * d;
  }
  std::vector<std::int64_t> sorted = h;
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t median = sorted[(sorted.size() - 1) / 2];
  return {std::sqrt(var / n), sorted.back() - median};
}

std::vector<SpacetimeEvent> boundary_cells(const CommitmentMap& map) {
  const FrontierProfile p = map.profile();
  const auto settled = [&](std::int64_t site, std::int64_t tick) {
    return tick <= p.heights[static_cast<std::size_t>(site)];
  };
  std::vector<SpacetimeEvent> out;
  for (std::int64_t s = 0; s < map.sites(); ++s) {
    for (std::int64_t t = 0; t <= p.heights[static_cast<std::size_t>(s)]; ++t) {
      bool edge = !settled(s, t + 1);
      if (s > 0 && !settled(s - 1, t)) {
        edge = true;
      }
      if (s + 1 < map.sites() && !settled(s + 1, t)) {
        edge = true;
      }
      if (edge) {
        out.push_back({s, t});
      }
    }
  }
  return out;
}

std::vector<BoxCount> scale_profile(const CommitmentMap& map, std::span<const std::int64_t> scales) {
  const std::int64_t limit = std::max(map.sites(), map.ticks());
  std::set<std::int64_t, std::greater<>> wanted{1};
  for (auto s : scales) {
    if (s < 1 || !std::has_single_bit(static_cast<std::uint64_t>(s))) {
      throw std::invalid_argument("box scale " + std::to_string(s) + " is not a power of two >= 1");
    }
    if (s > limit) {
      throw std::invalid_argument("box scale " + std::to_string(s) + " exceeds the grid");
    }
    wanted.insert(s);
  }

  const auto boundary = boundary_cells(map);
  std::vector<BoxCount> out;
  for (auto scale : wanted) {
    std::set<std::pair<std::int64_t, std::int64_t>> boxes;
    for (const auto& c : boundary) {
      boxes.insert({c.site / scale, c.tick / scale});
    }
    out.push_back({scale, boxes.size()});
  }
  return out;
}

void write_cell_grid_csv(std::ostream& os, const CommitmentMap& map) {
  os << "site,tick,state,commit_order\n";
  for (std::int64_t t = 0; t < map.ticks(); ++t) {
    for (std::int64_t s = 0; s < map.sites(); ++s) {
      const Cell& c = map.at(s, t);
      os << s << ',' << t << ',' << to_string(c.state) << ',' << c.commit_order << '\n';
    }
  }
}

std::vector<Transaction> grow_many_small(const GrowthParams& p, RandomSource& rng) {
  if (p.sites <= 0 || p.max_span <= 0) {
    throw std::invalid_argument("growth needs positive sites and span");
  }
  std::vector<std::int64_t> top(static_cast<std::size_t>(p.sites), 0);
  std::vector<Transaction> txs;
  txs.reserve(p.attempts);

  for (std::uint64_t k = 0; k < p.attempts; ++k) {
    const auto site = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(p.sites)));
    const std::int64_t tick = top[static_cast<std::size_t>(site)] + 1;

    Emitter e;
    e.id = PartyId{k};
    e.at = {site, tick};
    e.offer_quanta = {1, 0, 0};
    e.inventory = e.offer_quanta;

    std::vector<Absorber> candidates;
    std::uint64_t next_id = 1;
    for (std::int64_t dir : {-1, 1}) {
      for (std::int64_t d = 1; d <= p.max_span; ++d) {
        const std::int64_t target = site + dir * d;
        if (target < 0 || target >= p.sites) {
          break;
        }
        bool clear = true;
        for (std::int64_t step = 1; step <= d; ++step) {
          if (top[static_cast<std::size_t>(site + dir * step)] >= tick + step) {
            clear = false;
            break;
          }
        }
        if (!clear) {
          break;
        }
        candidates.push_back({PartyId{next_id++}, {target, tick + d}, 1.0});
      }
    }

    Transaction tx = run_event(e, candidates, p.medium, EvaluationSite::Post, rng, p.reinforcement, k);
    if (tx.completed()) {
      for (const auto& cell : handshake_path(tx.emission_event, *tx.absorption_event)) {
        auto& t = top[static_cast<std::size_t>(cell.site)];
        t = std::max(t, cell.tick);
      }
    }
    txs.push_back(std::move(tx));
  }
  return txs;
}

Transaction spanning_transaction(std::int64_t sites, std::int64_t energy, const Medium& m,
                                 const ReinforcementParams& r, RandomSource& rng) {
  if (sites < 2) {
    throw std::invalid_argument("a spanning transaction needs at least two sites");
  }
  Emitter e;
  e.id = PartyId{0};
  e.at = {0, 1};
  e.offer_quanta = {energy, 0, 0};
  e.inventory = e.offer_quanta;
  const Absorber a{PartyId{1}, {sites - 1, sites}, 1.0};
  return run_event(e, std::span<const Absorber>(&a, 1), m, EvaluationSite::Post, rng, r, 0);
}

CommitmentMap track(std::int64_t sites, std::span<const Transaction> txs) {
  std::int64_t max_tick = 0;
  for (const auto& tx : txs) {
    max_tick = std::max(max_tick, tx.emission_event.tick);
    if (tx.absorption_event) {
      max_tick = std::max(max_tick, tx.absorption_event->tick);
    }
  }
  CommitmentMap map(sites, max_tick + 2);
  map.commit_row(0);
  for (const auto& tx : txs) {
    map.apply(tx);
  }
  return map;
}

} // namespace tisim
