#pragma once

#include "tisim/entities.hpp"
#include "tisim/handshake.hpp"
#include "tisim/quanta.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tisim {

struct LedgerEntry {
  std::uint64_t tx_id = 0;
  PartyId party_id;
  Quantity quantity = Quantity::Energy;
  std::int64_t amount = 0;  // nonzero; negative = debit
  std::int64_t tick = 0;    // tick of the party's event

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Append-only double-entry record of conserved-quantity transfers. Every
/// completed transaction is debited once at its emitter and credited once at
/// its absorber, per nonzero quantity.
class Ledger {
public:
  Ledger() = default;

  /// Imports raw entries without any checks, e.g. to audit foreign data.
  [[nodiscard]] static Ledger from_entries(std::vector<LedgerEntry> entries);

  /// Appends the debit/credit pairs for `tx`.
  /// Throws IllegalPost unless tx is Completed, DoubleSpend if tx.id was already posted.
  void post(const Transaction& tx);

  [[nodiscard]] std::span<const LedgerEntry> entries() const noexcept { return entries_; }
  [[nodiscard]] bool contains(std::uint64_t tx_id) const { return posted_.contains(tx_id); }
  [[nodiscard]] std::size_t transaction_count() const noexcept { return posted_.size(); }

  /// Net change of a party's holdings: negative for emitters, positive for absorbers.
  [[nodiscard]] QuantaBundle balance(PartyId party) const;

private:
  std::vector<LedgerEntry> entries_;
  std::set<std::uint64_t> posted_;
  std::map<PartyId, QuantaBundle> balances_;
};

/// Value-style wrapper around Ledger::post.
[[nodiscard]] Ledger post_transaction(const Transaction& tx, Ledger ledger);

/// Concatenates private per-worker ledgers. Ledger i's tx ids become
/// (i << 32) | tx_id; throws std::out_of_range if an id does not fit in 32 bits.
[[nodiscard]] Ledger merge_ledgers(std::span<const Ledger> parts);

struct QuantityAudit {
  Quantity quantity = Quantity::Energy;
  std::int64_t global_sum = 0;
  std::map<std::uint64_t, std::int64_t> tx_sums;
  std::size_t parties = 0;
  bool pass = true;
};

struct AuditReport {
  std::array<QuantityAudit, 3> per_quantity;
  std::vector<std::string> violations;
  bool pass = true;
};

/// Checks global and per-transaction conservation plus the two-entry rule.
/// Violations are reported, never thrown.
[[nodiscard]] AuditReport audit(const Ledger& ledger);

/// tx_id,party_id,quantity,amount,tick
void write_ledger_csv(std::ostream& os, const Ledger& ledger);

/// JSON object with per-quantity sums, party counts, pass flags and violations.
[[nodiscard]] std::string audit_to_json(const AuditReport& report);

} // namespace tisim
