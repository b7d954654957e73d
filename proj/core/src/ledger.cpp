#include "tisim/ledger.hpp"

#include "tisim/errors.hpp"

#include <json.hpp>

#include <ostream>
#include <stdexcept>
#include <tuple>

namespace tisim {

Ledger Ledger::from_entries(std::vector<LedgerEntry> entries) {
  Ledger out;
  for (const auto& e : entries) {
    out.posted_.insert(e.tx_id);
    QuantaBundle delta;
    switch (e.quantity) {
      case Quantity::Energy: delta.energy = e.amount; break;
      case Quantity::Momentum: delta.momentum = e.amount; break;
      case Quantity::SpinZ: delta.spin_z = e.amount; break;
    }
    out.balances_[e.party_id] = bundle_add(out.balances_[e.party_id], delta);
  }
  out.entries_ = std::move(entries);
  return out;
}

void Ledger::post(const Transaction& tx) {
  if (!tx.completed() || !tx.chosen || !tx.absorption_event) {
    throw IllegalPost("transaction " + std::to_string(tx.id) + " is not completed");
  }
  if (posted_.contains(tx.id)) {
    throw DoubleSpend("transaction " + std::to_string(tx.id) + " already posted");
  }

  // Compute both balances before touching state so an overflow leaves the ledger intact.
  const QuantaBundle debited = bundle_sub(balances_[tx.emitter_id], tx.quanta);
  const QuantaBundle credited = bundle_add(balances_[*tx.chosen], tx.quanta);

  for (Quantity q : kAllQuantities) {
    const std::int64_t amount = tx.quanta.get(q);
    if (amount == 0) {
      continue;
    }
    entries_.push_back({tx.id, tx.emitter_id, q, -amount, tx.emission_event.tick});
    entries_.push_back({tx.id, *tx.chosen, q, amount, tx.absorption_event->tick});
  }
  balances_[tx.emitter_id] = debited;
  balances_[*tx.chosen] = credited;
  posted_.insert(tx.id);
}

QuantaBundle Ledger::balance(PartyId party) const {
  const auto it = balances_.find(party);
  return it == balances_.end() ? QuantaBundle{} : it->second;
}

Ledger post_transaction(const Transaction& tx, Ledger ledger) {
  ledger.post(tx);
  return ledger;
}

Ledger merge_ledgers(std::span<const Ledger> parts) {
  std::vector<LedgerEntry> merged;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (LedgerEntry e : parts[i].entries()) {
      if (e.tx_id >> 32 != 0) {
        throw std::out_of_range("tx id too large to namespace during merge");
      }
      e.tx_id |= static_cast<std::uint64_t>(i) << 32;
      merged.push_back(e);
    }
  }
  return Ledger::from_entries(std::move(merged));
}

namespace {

__extension__ using i128 = __int128;

std::size_t index_of(Quantity q) { return static_cast<std::size_t>(q); }

} // namespace

AuditReport audit(const Ledger& ledger) {
  AuditReport report;
  std::array<i128, 3> global{};
  std::array<std::map<std::uint64_t, i128>, 3> tx_sums;
  std::array<std::set<PartyId>, 3> parties;
  // (tx, quantity) -> (entry count, debits, credits)
  std::map<std::pair<std::uint64_t, std::size_t>, std::tuple<int, int, int>> shape;

  for (const auto& e : ledger.entries()) {
    const std::size_t qi = index_of(e.quantity);
    global[qi] += e.amount;
    tx_sums[qi][e.tx_id] += e.amount;
    parties[qi].insert(e.party_id);
    auto& [count, debits, credits] = shape[{e.tx_id, qi}];
    ++count;
    if (e.amount < 0) {
      ++debits;
    } else if (e.amount > 0) {
      ++credits;
    } else {
      report.violations.push_back("tx " + std::to_string(e.tx_id) + ": zero-amount " +
                                  std::string(to_string(e.quantity)) + " entry");
    }
  }

  for (const auto& [key, s] : shape) {
    const auto& [count, debits, credits] = s;
    if (count != 2 || debits != 1 || credits != 1) {
      report.violations.push_back("tx " + std::to_string(key.first) + ": " +
                                  std::string(to_string(kAllQuantities[key.second])) + " has " +
                                  std::to_string(count) + " entries (" + std::to_string(debits) +
                                  " debits, " + std::to_string(credits) + " credits)");
    }
  }

  const auto narrow = [&](i128 v, const std::string& what) -> std::int64_t {
    if (v > INT64_MAX || v < INT64_MIN) {
      report.violations.push_back(what + " overflows 64 bits");
      return v > 0 ? INT64_MAX : INT64_MIN;
    }
    return static_cast<std::int64_t>(v);
  };

  for (Quantity q : kAllQuantities) {
    const std::size_t qi = index_of(q);
    QuantityAudit& qa = report.per_quantity[qi];
    qa.quantity = q;
    qa.parties = parties[qi].size();
    qa.global_sum = narrow(global[qi], std::string(to_string(q)) + " global sum");
    for (const auto& [tx, sum] : tx_sums[qi]) {
      const std::int64_t s = narrow(sum, "tx " + std::to_string(tx) + " sum");
      qa.tx_sums[tx] = s;
      if (s != 0) {
        qa.pass = false;
        report.violations.push_back("tx " + std::to_string(tx) + ": " + std::string(to_string(q)) +
                                    " does not balance (" + std::to_string(s) + ")");
      }
    }
    if (qa.global_sum != 0) {
      qa.pass = false;
      report.violations.push_back(std::string(to_string(q)) + ": global sum " +
                                  std::to_string(qa.global_sum));
    }
  }
  report.pass = report.violations.empty();
  return report;
}

void write_ledger_csv(std::ostream& os, const Ledger& ledger) {
  os << "tx_id,party_id,quantity,amount,tick\n";
  for (const auto& e : ledger.entries()) {
    os << e.tx_id << ',' << e.party_id.value << ',' << to_string(e.quantity) << ',' << e.amount
       << ',' << e.tick << '\n';
  }
}

std::string audit_to_json(const AuditReport& report) {
  nlohmann::ordered_json j;
  j["pass"] = report.pass;
  auto& quantities = j["quantities"];
  quantities = nlohmann::ordered_json::object();
  for (const auto& qa : report.per_quantity) {
    std::int64_t max_abs = 0;
    for (const auto& [tx, s] : qa.tx_sums) {
      max_abs = std::max(max_abs, s < 0 ? -s : s);
    }
    quantities[std::string(to_string(qa.quantity))] = {
        {"global_sum", qa.global_sum},
        {"transactions", qa.tx_sums.size()},
        {"max_abs_tx_sum", max_abs},
        {"parties", qa.parties},
        {"pass", qa.pass},
    };
  }
  j["violations"] = report.violations;
  return j.dump(2);
}

} // namespace tisim
