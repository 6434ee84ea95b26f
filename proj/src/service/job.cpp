#include "qcaas/service/job.hpp"

#include "qcaas/common/error.hpp"
#include "qcaas/qsim/wire.hpp"

namespace qcaas::service {

using nlohmann::json;

json to_json(const BackendDescriptor& backend) {
  return json{{"id", backend.id},
              {"max_qubits", backend.max_qubits},
              {"price_per_shot", backend.price_per_shot},
              {"display_name", backend.display_name}};
}

BackendDescriptor backend_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("id") || !doc.at("id").is_string() ||
      !doc.contains("max_qubits") || !doc.at("max_qubits").is_number_unsigned() ||
      !doc.contains("price_per_shot") || !doc.at("price_per_shot").is_number_unsigned()) {
    throw Error(ErrorCode::InvalidArgument,
                "backend descriptor needs string id and integer max_qubits, price_per_shot");
  }
  BackendDescriptor backend;
  backend.id = doc.at("id").get<std::string>();
  backend.max_qubits = doc.at("max_qubits").get<std::uint32_t>();
  backend.price_per_shot = doc.at("price_per_shot").get<std::uint64_t>();
  if (doc.contains("display_name") && doc.at("display_name").is_string()) {
    backend.display_name = doc.at("display_name").get<std::string>();
  }
  return backend;
}

const char* to_string(JobStatus status) {
  switch (status) {
    case JobStatus::Queued:  return "queued";
    case JobStatus::Running: return "running";
    case JobStatus::Done:    return "done";
    case JobStatus::Error:   return "error";
  }
  return "unknown";
}

JobStatus job_status_from_string(const std::string& text) {
  if (text == "queued") return JobStatus::Queued;
  if (text == "running") return JobStatus::Running;
  if (text == "done") return JobStatus::Done;
  if (text == "error") return JobStatus::Error;
  throw Error(ErrorCode::InvalidArgument, "unknown job status '" + text + "'");
}

json to_json(const QuantumJob& job) {
  json j{{"job_id", job.id},
         {"tenant", job.tenant},
         {"backend_id", job.backend_id},
         {"circuit", job.circuit_wire},
         {"shots", job.shots},
         {"seed", job.seed},
         {"status", to_string(job.status)},
         {"cost", job.cost},
         {"submitted_at_ms", job.submitted_at_ms}};
  if (job.result) {
    j["result"] = qsim::shot_result_to_wire(*job.result);
  }
  if (job.completed_at_ms != 0) {
    j["completed_at_ms"] = job.completed_at_ms;
  }
  if (!job.error_message.empty()) {
    j["error"] = job.error_message;
  }
  if (job.qubit_budget) {
    j["qubit_budget"] = *job.qubit_budget;
  }
  return j;
}

QuantumJob job_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::InvalidArgument, "job document must be an object");
  }
  QuantumJob job;
  try {
    job.id = doc.at("job_id").get<std::string>();
    job.tenant = doc.at("tenant").get<std::string>();
    job.backend_id = doc.at("backend_id").get<std::string>();
    job.circuit_wire = doc.at("circuit");
    job.shots = doc.at("shots").get<std::uint64_t>();
    job.seed = doc.at("seed").get<std::uint64_t>();
    job.status = job_status_from_string(doc.at("status").get<std::string>());
    job.cost = doc.at("cost").get<std::uint64_t>();
    job.submitted_at_ms = doc.at("submitted_at_ms").get<std::int64_t>();
    if (doc.contains("result")) {
      job.result = qsim::shot_result_from_wire(doc.at("result"));
    }
    if (doc.contains("completed_at_ms")) {
      job.completed_at_ms = doc.at("completed_at_ms").get<std::int64_t>();
    }
    if (doc.contains("error")) {
      job.error_message = doc.at("error").get<std::string>();
    }
    if (doc.contains("qubit_budget")) {
      job.qubit_budget = doc.at("qubit_budget").get<std::uint32_t>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("job document is incomplete: ") + e.what());
  }
  return job;
}

json to_json(const LedgerEntry& entry) {
  return json{{"tenant", entry.tenant},
              {"job_id", entry.job_id},
              {"shots", entry.shots},
              {"price_per_shot", entry.price_per_shot},
              {"cost", entry.cost}};
}

json to_json(const BillingSummary& summary) {
  json entries = json::array();
  for (const LedgerEntry& entry : summary.entries) {
    entries.push_back(to_json(entry));
  }
  return json{{"tenant", summary.tenant}, {"total", summary.total}, {"entries", entries}};
}

}  // namespace qcaas::service
