#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qcaas/common/rng.hpp"
#include "qcaas/service/config.hpp"
#include "qcaas/service/job.hpp"
#include "qcaas/service/ledger.hpp"
#include "qcaas/service/store.hpp"
#include "qcaas/shor/shor.hpp"

namespace qcaas::service {

/// Point-in-time view of a factorization workflow.
struct WorkflowSnapshot {
  std::string id;
  std::string tenant;
  std::uint64_t n = 0;
  std::string status;  // running | succeeded | failed
  std::optional<shor::FactorizationResult> result;
  std::optional<std::string> error_code;
  std::optional<std::string> error_message;
  nlohmann::json trace = nlohmann::json::array();
  std::vector<std::string> job_ids;
  std::uint64_t total_cost = 0;
};

nlohmann::json to_json(const WorkflowSnapshot& snapshot);

/// The job service: gateway validation, FIFO queue with a worker pool,
/// pay-per-shot billing, append-only persistence with startup replay, and
/// factorization workflows driven through the same queue.
///
/// Every accepted job is in the event log before submit_job returns; after
/// a crash, replay restores all acknowledged jobs and billing totals, and
/// interrupted (queued or running) jobs are requeued.
class JobService {
 public:
  explicit JobService(ServiceConfig config);
  ~JobService();

  JobService(const JobService&) = delete;
  JobService& operator=(const JobService&) = delete;

  /// Validates and enqueues a job. Rejections (unknown backend, capacity,
  /// malformed circuit, invalid shots, budget cross-check) happen here;
  /// nothing invalid ever reaches a worker. Returns the new job id.
  std::string submit_job(const std::string& tenant, const nlohmann::json& circuit_wire,
                         std::uint64_t shots, const std::string& backend_id,
                         std::optional<std::uint64_t> seed = std::nullopt,
                         std::optional<std::uint32_t> qubit_budget = std::nullopt);

  QuantumJob job(const std::string& job_id) const;
  QuantumJob await_job(const std::string& job_id);

  /// Backends sorted by id.
  std::vector<BackendDescriptor> backends() const;

  BillingSummary billing(const std::string& tenant) const;

  /// Manual charge entry point. Workers charge every job once on the Done
  /// transition, so this is only useful to demonstrate idempotence: a
  /// repeated charge raises DuplicateCharge.
  LedgerEntry charge(const std::string& job_id);

  struct FactorizeOptions {
    std::uint64_t n = 0;
    std::optional<std::uint32_t> max_attempts;
    std::optional<std::uint64_t> shots_per_attempt;
    std::optional<std::string> backend_id;
    std::optional<std::uint64_t> seed;
  };

  /// Starts a factorization workflow as a tracked long-running task and
  /// returns its handle. Input bounds (3 <= n < 2^20) and the configured
  /// QSR manifest are enforced before the workflow launches.
  std::string start_factorization(const std::string& tenant, const FactorizeOptions& options);

  WorkflowSnapshot workflow(const std::string& workflow_id) const;
  WorkflowSnapshot await_workflow(const std::string& workflow_id);

  const ServiceConfig& config() const { return config_; }

  /// Number of simulator runs since startup (instrumentation; lets tests
  /// prove rejected submissions never reach the simulator).
  std::uint64_t simulator_invocations() const { return sim_invocations_.load(); }

  /// Blocks until the queue is empty, no job is running and no workflow is
  /// in flight.
  void drain();

  /// Stops workers and workflow threads. With drain, waits for outstanding
  /// work first; without, queued jobs stay durable in the log and resume on
  /// the next startup.
  void stop(bool drain_first);

 private:
  struct WorkflowRecord {
    std::string id;
    std::string tenant;
    std::uint64_t n = 0;
    std::string status = "running";
    std::optional<shor::FactorizationResult> result;
    std::optional<std::string> error_code;
    std::optional<std::string> error_message;
    nlohmann::json trace = nlohmann::json::array();
    std::vector<std::string> job_ids;
  };

  class QueueBackend;

  void replay_log();
  void start_workers();
  void worker_loop();
  void run_workflow(const std::string& workflow_id, const std::string& tenant,
                    shor::FactorizationRequest request, BackendDescriptor backend,
                    std::optional<std::uint32_t> budget);
  const BackendDescriptor& backend_or_throw(const std::string& backend_id) const;
  WorkflowSnapshot snapshot_locked(const WorkflowRecord& record) const;

  ServiceConfig config_;
  EventLog log_;
  BillingLedger ledger_;

  mutable std::mutex mutex_;
  std::condition_variable cv_queue_;
  std::condition_variable cv_jobs_;
  std::condition_variable cv_workflows_;
  bool stopping_ = false;

  std::map<std::string, QuantumJob> jobs_;
  std::map<std::string, qsim::Circuit> parsed_;
  std::deque<std::string> queue_;
  std::uint32_t active_jobs_ = 0;
  std::uint64_t next_job_number_ = 1;

  std::map<std::string, WorkflowRecord> workflows_;
  std::uint64_t next_workflow_number_ = 1;
  std::vector<std::thread> workflow_threads_;

  std::vector<std::thread> workers_;
  std::atomic<std::uint64_t> sim_invocations_{0};
  Rng service_rng_;
};

}  // namespace qcaas::service
