#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcaas/qsim/types.hpp"
#include "qcaas/shor/shor.hpp"

namespace qcaas::orchestrator {

enum class StepKind { Classical, Quantum };

const char* to_string(StepKind kind);

/// The declared services of the factorization workflow, in execution order.
/// The spellings are the platform's canonical service identifiers and are
/// what deployment descriptors must reference.
const std::vector<std::string>& workflow_services();

/// Node-kind classification of a workflow service: random base drawing,
/// gcd checks and controller post-processing are Classical; circuit staging
/// and order-finding execution are Quantum. Unknown names are rejected
/// (UnknownService).
StepKind classify_step(std::string_view service_name);

enum class WorkflowPhase {
  Init,
  ClassicalPre,
  QuantumSubmitted,
  PostProcessing,
  Succeeded,
  Failed,
};

const char* to_string(WorkflowPhase phase);

/// Mutable workflow bookkeeping. pending_job is set exactly while a quantum
/// job is in flight (phase == QuantumSubmitted).
struct WorkflowState {
  WorkflowPhase phase = WorkflowPhase::Init;
  std::uint32_t attempt = 0;
  std::optional<std::uint64_t> current_base;
  std::optional<std::string> pending_job;
  std::vector<shor::AttemptRecord> trace;
};

/// Handle to a quantum execution resource. Implementations run circuits
/// locally or hand them to the job service.
class QuantumBackend {
 public:
  virtual ~QuantumBackend() = default;

  virtual std::string id() const = 0;
  virtual std::uint32_t max_qubits() const = 0;

  struct Execution {
    std::string job_id;
    qsim::ShotResult result;
  };

  /// Runs the circuit for the given number of shots. on_submitted fires once
  /// the job has been accepted, before results exist.
  virtual Execution execute(const qsim::Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                            const std::function<void(const std::string&)>& on_submitted) = 0;
};

/// In-process backend running circuits directly on the statevector
/// simulator. Job ids are "local-1", "local-2", ... per instance.
class LocalBackend final : public QuantumBackend {
 public:
  explicit LocalBackend(std::uint32_t max_qubits = qsim::kMaxQubits, std::string id = "local-sim");

  std::string id() const override { return id_; }
  std::uint32_t max_qubits() const override { return max_qubits_; }
  Execution execute(const qsim::Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                    const std::function<void(const std::string&)>& on_submitted) override;

 private:
  std::uint32_t max_qubits_;
  std::string id_;
  std::uint64_t next_job_ = 0;
};

/// Observation hooks for workflow progress. on_step fires when a named
/// service step begins; on_phase after every state transition.
class WorkflowObserver {
 public:
  virtual ~WorkflowObserver() = default;
  virtual void on_step(std::string_view service, StepKind kind) {}
  virtual void on_phase(const WorkflowState& state) {}
};

/// Classical shortcuts that make quantum order finding unnecessary:
/// even n -> (2, n/2); perfect power b^e -> (b, n/b). Returns nothing for
/// odd non-power n, including primes (run_factorization rejects those
/// separately). Requires n >= 3.
std::optional<std::pair<std::uint64_t, std::uint64_t>> classical_prechecks(std::uint64_t n);

/// Runs the factorization workflow: classical prechecks, then up to
/// max_attempts rounds of base selection, gcd shortcut, order-finding
/// circuit execution on the backend, and continued-fraction post-processing.
/// Fresh base per attempt; all convergents of the modal measurement are
/// tried (with multiple repair) before a new base is drawn. The modal y
/// breaks count ties toward the smallest value.
///
/// Errors: InvalidN (n < 3), NoNontrivialFactors (prime n, fail-fast,
/// zero shots), AttemptsExhausted (trace attached to details), and backend
/// failures annotated with the attempt number.
shor::FactorizationResult run_factorization(const shor::FactorizationRequest& request,
                                            QuantumBackend& backend,
                                            WorkflowObserver* observer = nullptr);

}  // namespace qcaas::orchestrator
