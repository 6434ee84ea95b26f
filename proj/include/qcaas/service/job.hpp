#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcaas/qsim/types.hpp"

namespace qcaas::service {

/// An execution resource offered to tenants. Prices are integer
/// micro-credits per shot; billing arithmetic never touches floating point.
struct BackendDescriptor {
  std::string id;
  std::uint32_t max_qubits = 0;
  std::uint64_t price_per_shot = 0;
  std::string display_name;
};

nlohmann::json to_json(const BackendDescriptor& backend);
BackendDescriptor backend_from_json(const nlohmann::json& doc);

enum class JobStatus { Queued, Running, Done, Error };

const char* to_string(JobStatus status);
JobStatus job_status_from_string(const std::string& text);

/// A queued unit of quantum work. cost stays 0 until the Done transition,
/// when it becomes shots * price_per_shot exactly.
struct QuantumJob {
  std::string id;
  std::string tenant;
  std::string backend_id;
  nlohmann::json circuit_wire;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  JobStatus status = JobStatus::Queued;
  std::optional<qsim::ShotResult> result;
  std::uint64_t cost = 0;
  std::int64_t submitted_at_ms = 0;
  std::int64_t completed_at_ms = 0;
  std::string error_message;
  std::optional<std::uint32_t> qubit_budget;  // gateway cross-check, workflow jobs only
};

nlohmann::json to_json(const QuantumJob& job);
QuantumJob job_from_json(const nlohmann::json& doc);

struct LedgerEntry {
  std::string tenant;
  std::string job_id;
  std::uint64_t shots = 0;
  std::uint64_t price_per_shot = 0;
  std::uint64_t cost = 0;
};

nlohmann::json to_json(const LedgerEntry& entry);

struct BillingSummary {
  std::string tenant;
  std::uint64_t total = 0;
  std::vector<LedgerEntry> entries;
};

nlohmann::json to_json(const BillingSummary& summary);

}  // namespace qcaas::service
