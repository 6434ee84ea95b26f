#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "qcaas/service/job.hpp"

namespace qcaas::service {

/// In-memory billing ledger: per-tenant running totals plus the entry list.
/// Charges are integer micro-credits and idempotent per job id.
class BillingLedger {
 public:
  /// Records shots * price_per_shot against the job's tenant. A second
  /// charge for the same job id is rejected (DuplicateCharge).
  LedgerEntry charge(const QuantumJob& job, std::uint64_t price_per_shot);

  /// Reinstates an entry recovered from the event log, with the same
  /// duplicate protection as a live charge.
  void restore(const LedgerEntry& entry);

  std::uint64_t tenant_total(const std::string& tenant) const;
  BillingSummary summary(const std::string& tenant) const;

 private:
  mutable std::mutex mutex_;
  std::vector<LedgerEntry> entries_;
  std::map<std::string, std::uint64_t> totals_;
  std::set<std::string> charged_jobs_;
};

}  // namespace qcaas::service
