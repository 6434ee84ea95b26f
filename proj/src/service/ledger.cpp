#include "qcaas/service/ledger.hpp"

#include "qcaas/common/error.hpp"

namespace qcaas::service {

LedgerEntry BillingLedger::charge(const QuantumJob& job, std::uint64_t price_per_shot) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!charged_jobs_.insert(job.id).second) {
    throw Error(ErrorCode::DuplicateCharge, "job " + job.id + " has already been charged");
  }
  LedgerEntry entry;
  entry.tenant = job.tenant;
  entry.job_id = job.id;
  entry.shots = job.shots;
  entry.price_per_shot = price_per_shot;
  entry.cost = job.shots * price_per_shot;
  entries_.push_back(entry);
  totals_[entry.tenant] += entry.cost;
  return entry;
}

void BillingLedger::restore(const LedgerEntry& entry) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!charged_jobs_.insert(entry.job_id).second) {
    throw Error(ErrorCode::DuplicateCharge, "job " + entry.job_id + " has already been charged");
  }
  entries_.push_back(entry);
  totals_[entry.tenant] += entry.cost;
}

std::uint64_t BillingLedger::tenant_total(const std::string& tenant) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = totals_.find(tenant);
  return it == totals_.end() ? 0 : it->second;
}

BillingSummary BillingLedger::summary(const std::string& tenant) const {
  std::lock_guard<std::mutex> lock(mutex_);
  BillingSummary result;
  result.tenant = tenant;
  for (const LedgerEntry& entry : entries_) {
    if (entry.tenant == tenant) {
      result.entries.push_back(entry);
      result.total += entry.cost;
    }
  }
  return result;
}

}  // namespace qcaas::service
