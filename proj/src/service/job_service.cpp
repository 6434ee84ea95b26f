#include "qcaas/service/job_service.hpp"

#include <algorithm>
#include <chrono>
#include <utility>

#include "qcaas/common/error.hpp"
#include "qcaas/lifecycle/artifacts.hpp"
#include "qcaas/orchestrator/workflow.hpp"
#include "qcaas/qsim/simulator.hpp"
#include "qcaas/qsim/wire.hpp"
#include "qcaas/shor/arith.hpp"

namespace qcaas::service {
namespace {

std::uint64_t now_ms() {
  using namespace std::chrono;
  return static_cast<std::uint64_t>(
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
}

std::string format_id(const char* prefix, std::uint64_t number) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%08llu", prefix,
                static_cast<unsigned long long>(number));
  return buf;
}

// Largest n accepted by the factorization endpoint. The quantum register
// needs 3*ceil_log2(n) qubits, so 2^20 would already overflow the simulator;
// the bound keeps rejection deterministic instead of capacity-dependent.
constexpr std::uint64_t kMaxFactorizationN = 1ull << 20;

}  // namespace

nlohmann::json to_json(const WorkflowSnapshot& snapshot) {
  nlohmann::json doc{{"workflow_id", snapshot.id},
                     {"tenant", snapshot.tenant},
                     {"n", snapshot.n},
                     {"status", snapshot.status},
                     {"trace", snapshot.trace},
                     {"job_ids", snapshot.job_ids},
                     {"total_cost", snapshot.total_cost}};
  if (snapshot.result.has_value()) {
    doc["result"] = to_json(*snapshot.result);
  }
  if (snapshot.error_code.has_value()) {
    doc["error"] = {{"code", *snapshot.error_code},
                    {"message", snapshot.error_message.value_or("")}};
  }
  return doc;
}

// Adapts the job queue to the workflow engine's backend interface: each
// quantum stage becomes a normal billed job for the workflow's tenant.
class JobService::QueueBackend : public orchestrator::QuantumBackend {
 public:
  QueueBackend(JobService& service, std::string workflow_id, std::string tenant,
               BackendDescriptor backend, std::optional<std::uint32_t> budget)
      : service_(service),
        workflow_id_(std::move(workflow_id)),
        tenant_(std::move(tenant)),
        backend_(std::move(backend)),
        budget_(budget) {}

  std::string id() const override { return backend_.id; }
  std::uint32_t max_qubits() const override { return backend_.max_qubits; }

  Execution execute(const qsim::Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                    const std::function<void(const std::string&)>& on_submitted) override {
    const std::string job_id = service_.submit_job(tenant_, qsim::circuit_to_wire(circuit),
                                                   shots, backend_.id, seed, budget_);
    {
      std::lock_guard<std::mutex> lock(service_.mutex_);
      service_.workflows_.at(workflow_id_).job_ids.push_back(job_id);
    }
    if (on_submitted) {
      on_submitted(job_id);
    }
    QuantumJob done = service_.await_job(job_id);
    if (done.status == JobStatus::Error) {
      throw Error(ErrorCode::BackendFailure,
                  done.error_message.empty() ? "job failed" : done.error_message,
                  {{"job_id", job_id}});
    }
    return Execution{job_id, *done.result};
  }

 private:
  JobService& service_;
  std::string workflow_id_;
  std::string tenant_;
  BackendDescriptor backend_;
  std::optional<std::uint32_t> budget_;
};

JobService::JobService(ServiceConfig config)
    : config_(std::move(config)),
      log_(config_.data_dir),
      service_rng_(splitmix64(now_ms()) ^ 0x9cab0afff7a13755ull) {
  config_.validate();
  replay_log();
  start_workers();
}

JobService::~JobService() { stop(false); }

const BackendDescriptor& JobService::backend_or_throw(const std::string& backend_id) const {
  for (const auto& backend : config_.backends) {
    if (backend.id == backend_id) {
      return backend;
    }
  }
  throw Error(ErrorCode::UnknownBackend, "unknown backend: " + backend_id,
              {{"backend_id", backend_id}});
}

std::string JobService::submit_job(const std::string& tenant, const nlohmann::json& circuit_wire,
                                   std::uint64_t shots, const std::string& backend_id,
                                   std::optional<std::uint64_t> seed,
                                   std::optional<std::uint32_t> qubit_budget) {
  if (tenant.empty()) {
    throw Error(ErrorCode::InvalidArgument, "tenant must not be empty");
  }
  const BackendDescriptor& backend = backend_or_throw(backend_id);
  if (shots == 0) {
    throw Error(ErrorCode::InvalidArgument, "shots must be at least 1");
  }
  qsim::Circuit circuit = qsim::circuit_from_wire(circuit_wire);
  // Capacity is judged against the chosen backend before structural
  // validation, so an oversized circuit reports CapacityExceeded even when
  // it also exceeds the global simulator cap.
  if (circuit.num_qubits > backend.max_qubits) {
    throw Error(ErrorCode::CapacityExceeded,
                "circuit needs " + std::to_string(circuit.num_qubits) + " qubits but backend " +
                    backend.id + " offers " + std::to_string(backend.max_qubits),
                {{"required", circuit.num_qubits}, {"available", backend.max_qubits}});
  }
  if (qubit_budget.has_value() && circuit.num_qubits > *qubit_budget) {
    throw Error(ErrorCode::QsrViolation,
                "circuit needs " + std::to_string(circuit.num_qubits) +
                    " qubits but the declared budget is " + std::to_string(*qubit_budget),
                {{"required", circuit.num_qubits}, {"qubit_budget", *qubit_budget}});
  }
  qsim::validate_circuit(circuit);

  QuantumJob job;
  job.tenant = tenant;
  job.backend_id = backend.id;
  job.circuit_wire = circuit_wire;
  job.shots = shots;
  job.status = JobStatus::Queued;
  job.submitted_at_ms = now_ms();
  job.qubit_budget = qubit_budget;

  std::unique_lock<std::mutex> lock(mutex_);
  if (stopping_) {
    throw Error(ErrorCode::BackendFailure, "service is shutting down");
  }
  job.id = format_id("job", next_job_number_++);
  job.seed = seed.has_value() ? *seed : service_rng_.next_u64();

  // The submission is durable before the caller gets the id back.
  log_.append({{"event", "job_submitted"}, {"job", to_json(job)}});
  parsed_.emplace(job.id, std::move(circuit));
  queue_.push_back(job.id);
  std::string job_id = job.id;
  jobs_.emplace(job_id, std::move(job));
  lock.unlock();
  cv_queue_.notify_one();
  return job_id;
}

QuantumJob JobService::job(const std::string& job_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) {
    throw Error(ErrorCode::NotFound, "no such job: " + job_id, {{"job_id", job_id}});
  }
  return it->second;
}

QuantumJob JobService::await_job(const std::string& job_id) {
  std::unique_lock<std::mutex> lock(mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) {
    throw Error(ErrorCode::NotFound, "no such job: " + job_id, {{"job_id", job_id}});
  }
  cv_jobs_.wait(lock, [&] {
    const JobStatus status = jobs_.at(job_id).status;
    return stopping_ || status == JobStatus::Done || status == JobStatus::Error;
  });
  const QuantumJob& job = jobs_.at(job_id);
  if (job.status != JobStatus::Done && job.status != JobStatus::Error) {
    throw Error(ErrorCode::BackendFailure, "service stopped before job " + job_id + " finished",
                {{"job_id", job_id}});
  }
  return job;
}

std::vector<BackendDescriptor> JobService::backends() const {
  std::vector<BackendDescriptor> list = config_.backends;
  std::sort(list.begin(), list.end(),
            [](const BackendDescriptor& a, const BackendDescriptor& b) { return a.id < b.id; });
  return list;
}

BillingSummary JobService::billing(const std::string& tenant) const {
  return ledger_.summary(tenant);
}

LedgerEntry JobService::charge(const std::string& job_id) {
  std::unique_lock<std::mutex> lock(mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) {
    throw Error(ErrorCode::NotFound, "no such job: " + job_id, {{"job_id", job_id}});
  }
  if (it->second.status != JobStatus::Done) {
    throw Error(ErrorCode::InvalidArgument, "only completed jobs can be charged",
                {{"job_id", job_id}, {"status", to_string(it->second.status)}});
  }
  const BackendDescriptor& backend = backend_or_throw(it->second.backend_id);
  LedgerEntry entry = ledger_.charge(it->second, backend.price_per_shot);
  log_.append({{"event", "charged"},
               {"tenant", entry.tenant},
               {"job_id", entry.job_id},
               {"shots", entry.shots},
               {"price_per_shot", entry.price_per_shot},
               {"cost", entry.cost}});
  return entry;
}

void JobService::start_workers() {
  for (std::uint32_t i = 0; i < config_.worker_threads; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

void JobService::worker_loop() {
  for (;;) {
    std::string job_id;
    qsim::Circuit circuit;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      cv_queue_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) {
        return;  // queued jobs stay durable in the log
      }
      job_id = queue_.front();
      queue_.pop_front();
      QuantumJob& job = jobs_.at(job_id);
      job.status = JobStatus::Running;
      shots = job.shots;
      seed = job.seed;
      auto parsed = parsed_.find(job_id);
      if (parsed != parsed_.end()) {
        circuit = std::move(parsed->second);
        parsed_.erase(parsed);
      } else {
        circuit = qsim::circuit_from_wire(job.circuit_wire);
      }
      ++active_jobs_;
    }
    log_.append({{"event", "job_running"}, {"job_id", job_id}});

    std::optional<qsim::ShotResult> result;
    std::string failure;
    try {
      sim_invocations_.fetch_add(1);
      result = qsim::run_circuit(circuit, shots, seed);
    } catch (const std::exception& e) {
      failure = e.what();
    }

    {
      std::unique_lock<std::mutex> lock(mutex_);
      QuantumJob& job = jobs_.at(job_id);
      job.completed_at_ms = now_ms();
      if (result.has_value()) {
        const BackendDescriptor& backend = backend_or_throw(job.backend_id);
        job.status = JobStatus::Done;
        job.result = std::move(result);
        job.cost = job.shots * backend.price_per_shot;
        // The terminal event and the charge land in the log together, so a
        // replay can never see a completed job without its ledger entry.
        log_.append({{"event", "job_done"},
                     {"job_id", job_id},
                     {"completed_at_ms", job.completed_at_ms},
                     {"cost", job.cost},
                     {"result", qsim::shot_result_to_wire(*job.result)}});
        LedgerEntry entry = ledger_.charge(job, backend.price_per_shot);
        log_.append({{"event", "charged"},
                     {"tenant", entry.tenant},
                     {"job_id", entry.job_id},
                     {"shots", entry.shots},
                     {"price_per_shot", entry.price_per_shot},
                     {"cost", entry.cost}});
      } else {
        job.status = JobStatus::Error;
        job.error_message = failure;
        log_.append({{"event", "job_error"},
                     {"job_id", job_id},
                     {"completed_at_ms", job.completed_at_ms},
                     {"error", failure}});
      }
      --active_jobs_;
    }
    cv_jobs_.notify_all();
    cv_queue_.notify_all();
  }
}

void JobService::replay_log() {
  std::vector<std::string> requeued;
  for (const nlohmann::json& event : log_.replay()) {
    const std::string kind = event.value("event", "");
    if (kind == "job_submitted") {
      QuantumJob job = job_from_json(event.at("job"));
      job.status = JobStatus::Queued;
      const std::uint64_t number = std::strtoull(job.id.c_str() + 4, nullptr, 10);
      next_job_number_ = std::max(next_job_number_, number + 1);
      jobs_[job.id] = std::move(job);
    } else if (kind == "job_running") {
      auto it = jobs_.find(event.at("job_id").get<std::string>());
      if (it == jobs_.end()) {
        throw Error(ErrorCode::StorageFailure, "event log references unknown job");
      }
      it->second.status = JobStatus::Running;
    } else if (kind == "job_done") {
      auto it = jobs_.find(event.at("job_id").get<std::string>());
      if (it == jobs_.end()) {
        throw Error(ErrorCode::StorageFailure, "event log references unknown job");
      }
      it->second.status = JobStatus::Done;
      it->second.completed_at_ms = event.at("completed_at_ms").get<std::uint64_t>();
      it->second.cost = event.at("cost").get<std::uint64_t>();
      it->second.result = qsim::shot_result_from_wire(event.at("result"));
    } else if (kind == "job_error") {
      auto it = jobs_.find(event.at("job_id").get<std::string>());
      if (it == jobs_.end()) {
        throw Error(ErrorCode::StorageFailure, "event log references unknown job");
      }
      it->second.status = JobStatus::Error;
      it->second.completed_at_ms = event.at("completed_at_ms").get<std::uint64_t>();
      it->second.error_message = event.at("error").get<std::string>();
    } else if (kind == "job_requeued") {
      auto it = jobs_.find(event.at("job_id").get<std::string>());
      if (it == jobs_.end()) {
        throw Error(ErrorCode::StorageFailure, "event log references unknown job");
      }
      it->second.status = JobStatus::Queued;
    } else if (kind == "charged") {
      LedgerEntry entry;
      entry.tenant = event.at("tenant").get<std::string>();
      entry.job_id = event.at("job_id").get<std::string>();
      entry.shots = event.at("shots").get<std::uint64_t>();
      entry.price_per_shot = event.at("price_per_shot").get<std::uint64_t>();
      entry.cost = event.at("cost").get<std::uint64_t>();
      ledger_.restore(entry);
    } else {
      throw Error(ErrorCode::StorageFailure, "event log contains unknown event: " + kind);
    }
  }

  // Interrupted work resumes: jobs that were queued, or running without a
  // terminal event, go back on the queue in submission order (ids are
  // zero-padded, so map order is submission order).
  for (auto& [id, job] : jobs_) {
    if (job.status == JobStatus::Running) {
      job.status = JobStatus::Queued;
      log_.append({{"event", "job_requeued"}, {"job_id", id}});
      requeued.push_back(id);
    }
    if (job.status == JobStatus::Queued) {
      parsed_.emplace(id, qsim::circuit_from_wire(job.circuit_wire));
      queue_.push_back(id);
    }
  }
}

std::string JobService::start_factorization(const std::string& tenant,
                                            const FactorizeOptions& options) {
  if (tenant.empty()) {
    throw Error(ErrorCode::InvalidArgument, "tenant must not be empty");
  }
  if (options.n < 3 || options.n >= kMaxFactorizationN) {
    throw Error(ErrorCode::InvalidN,
                "n must satisfy 3 <= n < " + std::to_string(kMaxFactorizationN),
                {{"n", options.n}});
  }
  const std::string backend_id = options.backend_id.value_or(config_.default_backend_id);
  const BackendDescriptor& backend = backend_or_throw(backend_id);

  shor::FactorizationRequest request;
  request.n = options.n;
  if (options.max_attempts.has_value()) {
    request.max_attempts = *options.max_attempts;
  }
  if (options.shots_per_attempt.has_value()) {
    request.shots_per_attempt = *options.shots_per_attempt;
  }
  if (request.max_attempts == 0 || request.shots_per_attempt == 0) {
    throw Error(ErrorCode::InvalidArgument, "max_attempts and shots_per_attempt must be >= 1");
  }
  request.backend_id = backend.id;

  // With a QSR manifest configured, the plan must clear it before any
  // quantum resource is touched; the budget then travels with every job as
  // a gateway cross-check.
  std::optional<std::uint32_t> budget;
  if (config_.qsr_manifest.has_value()) {
    const std::uint32_t width =
        shor::counting_qubits_for(request.n) + shor::work_qubits_for(request.n);
    lifecycle::FactorizationPlan plan;
    plan.circuit_width = width;
    for (const auto& name : orchestrator::workflow_services()) {
      if (orchestrator::classify_step(name) == orchestrator::StepKind::Quantum) {
        plan.quantum_services.push_back(name);
      } else {
        plan.classical_services.push_back(name);
      }
    }
    plan.verifies_product = true;
    lifecycle::QsrReport report = lifecycle::validate_qsr(*config_.qsr_manifest, plan);
    if (!report.passed()) {
      throw Error(ErrorCode::QsrViolation, "factorization plan violates the QSR manifest",
                  {{"report", to_json(report)}});
    }
    for (const auto& attr : config_.qsr_manifest->quality) {
      if (attr.name == "qubit_budget" && attr.bound.is_number()) {
        budget = attr.bound.get<std::uint32_t>();
      }
    }
  }

  std::unique_lock<std::mutex> lock(mutex_);
  if (stopping_) {
    throw Error(ErrorCode::BackendFailure, "service is shutting down");
  }
  WorkflowRecord record;
  record.id = format_id("wf", next_workflow_number_++);
  record.tenant = tenant;
  record.n = request.n;
  request.seed = options.seed.has_value() ? *options.seed : service_rng_.next_u64();
  std::string workflow_id = record.id;
  workflows_.emplace(workflow_id, std::move(record));
  workflow_threads_.emplace_back([this, workflow_id, tenant, request, backend, budget] {
    run_workflow(workflow_id, tenant, request, backend, budget);
  });
  return workflow_id;
}

void JobService::run_workflow(const std::string& workflow_id, const std::string& tenant,
                              shor::FactorizationRequest request, BackendDescriptor backend,
                              std::optional<std::uint32_t> budget) {
  QueueBackend queue_backend(*this, workflow_id, tenant, std::move(backend), budget);
  std::optional<shor::FactorizationResult> result;
  std::optional<std::string> code;
  std::string message;
  nlohmann::json trace = nlohmann::json::array();
  try {
    result = orchestrator::run_factorization(request, queue_backend);
    for (const auto& record : result->trace) {
      trace.push_back(to_json(record));
    }
  } catch (const Error& e) {
    code = to_string(e.code());
    message = e.what();
    if (e.details().contains("trace")) {
      trace = e.details().at("trace");
    }
  } catch (const std::exception& e) {
    code = "internal";
    message = e.what();
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    WorkflowRecord& record = workflows_.at(workflow_id);
    if (result.has_value()) {
      record.status = "succeeded";
      record.result = std::move(result);
    } else {
      record.status = "failed";
      record.error_code = code;
      record.error_message = message;
    }
    record.trace = std::move(trace);
  }
  cv_workflows_.notify_all();
  cv_queue_.notify_all();
}

WorkflowSnapshot JobService::snapshot_locked(const WorkflowRecord& record) const {
  WorkflowSnapshot snapshot;
  snapshot.id = record.id;
  snapshot.tenant = record.tenant;
  snapshot.n = record.n;
  snapshot.status = record.status;
  snapshot.result = record.result;
  snapshot.error_code = record.error_code;
  snapshot.error_message = record.error_message;
  snapshot.trace = record.trace;
  snapshot.job_ids = record.job_ids;
  for (const auto& job_id : record.job_ids) {
    auto it = jobs_.find(job_id);
    if (it != jobs_.end()) {
      snapshot.total_cost += it->second.cost;
    }
  }
  return snapshot;
}

WorkflowSnapshot JobService::workflow(const std::string& workflow_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = workflows_.find(workflow_id);
  if (it == workflows_.end()) {
    throw Error(ErrorCode::NotFound, "no such workflow: " + workflow_id,
                {{"workflow_id", workflow_id}});
  }
  return snapshot_locked(it->second);
}

WorkflowSnapshot JobService::await_workflow(const std::string& workflow_id) {
  std::unique_lock<std::mutex> lock(mutex_);
  auto it = workflows_.find(workflow_id);
  if (it == workflows_.end()) {
    throw Error(ErrorCode::NotFound, "no such workflow: " + workflow_id,
                {{"workflow_id", workflow_id}});
  }
  cv_workflows_.wait(lock, [&] { return stopping_ || workflows_.at(workflow_id).status != "running"; });
  return snapshot_locked(workflows_.at(workflow_id));
}

void JobService::drain() {
  std::unique_lock<std::mutex> lock(mutex_);
  cv_queue_.wait(lock, [&] {
    if (stopping_) {
      return true;
    }
    if (!queue_.empty() || active_jobs_ != 0) {
      return false;
    }
    for (const auto& [id, record] : workflows_) {
      if (record.status == "running") {
        return false;
      }
    }
    return true;
  });
}

void JobService::stop(bool drain_first) {
  if (drain_first) {
    drain();
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (stopping_) {
      // Idempotent: a second stop only needs the threads joined below.
    }
    stopping_ = true;
  }
  cv_queue_.notify_all();
  cv_jobs_.notify_all();
  cv_workflows_.notify_all();
  for (auto& thread : workflow_threads_) {
    if (thread.joinable()) {
      thread.join();
    }
  }
  for (auto& thread : workers_) {
    if (thread.joinable()) {
      thread.join();
    }
  }
}

}  // namespace qcaas::service
