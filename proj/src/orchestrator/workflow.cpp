#include "qcaas/orchestrator/workflow.hpp"

#include <algorithm>
#include <array>

#include "qcaas/common/error.hpp"
#include "qcaas/qsim/simulator.hpp"
#include "qcaas/shor/arith.hpp"

namespace qcaas::orchestrator {

namespace {

// Canonical service registry for the factorization workflow. The spellings
// (including "Qunatum...") are the platform's published service identifiers;
// deployment descriptors and classify_step must agree on them byte for byte.
constexpr std::array<std::pair<std::string_view, StepKind>, 6> kServiceTable{{
    {"NumGenerator", StepKind::Classical},
    {"GetGCD", StepKind::Classical},
    {"Controller", StepKind::Classical},
    {"QunatumModularExponentiation", StepKind::Quantum},
    {"QunatumInverseQFT", StepKind::Quantum},
    {"Factorise", StepKind::Quantum},
}};

class StepScope {
 public:
  StepScope(WorkflowObserver* observer, std::string_view service)
      : observer_(observer) {
    if (observer_ != nullptr) {
      observer_->on_step(service, classify_step(service));
    }
  }

 private:
  WorkflowObserver* observer_;
};

void notify_phase(WorkflowObserver* observer, const WorkflowState& state) {
  if (observer != nullptr) {
    observer->on_phase(state);
  }
}

std::uint64_t modal_measurement(const qsim::ShotResult& result) {
  std::uint64_t best_y = 0;
  std::uint64_t best_count = 0;
  for (const auto& [bits, count] : result.counts) {
    const std::uint64_t y = qsim::from_bitstring(bits);
    if (count > best_count || (count == best_count && y < best_y)) {
      best_y = y;
      best_count = count;
    }
  }
  return best_y;
}

}  // namespace

const char* to_string(StepKind kind) {
  return kind == StepKind::Classical ? "classical" : "quantum";
}

const char* to_string(WorkflowPhase phase) {
  switch (phase) {
    case WorkflowPhase::Init:            return "init";
    case WorkflowPhase::ClassicalPre:    return "classical_pre";
    case WorkflowPhase::QuantumSubmitted: return "quantum_submitted";
    case WorkflowPhase::PostProcessing:  return "post_processing";
    case WorkflowPhase::Succeeded:       return "succeeded";
    case WorkflowPhase::Failed:          return "failed";
  }
  return "unknown";
}

const std::vector<std::string>& workflow_services() {
  static const std::vector<std::string> services = [] {
    std::vector<std::string> names;
    for (const auto& [name, kind] : kServiceTable) {
      names.emplace_back(name);
    }
    return names;
  }();
  return services;
}

StepKind classify_step(std::string_view service_name) {
  for (const auto& [name, kind] : kServiceTable) {
    if (name == service_name) {
      return kind;
    }
  }
  throw Error(ErrorCode::UnknownService,
              "unknown workflow service '" + std::string(service_name) + "'");
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> classical_prechecks(std::uint64_t n) {
  if (n < 3) {
    throw Error(ErrorCode::InvalidArgument, "prechecks need n >= 3");
  }
  if (n % 2 == 0) {
    return std::make_pair(std::uint64_t{2}, n / 2);
  }
  if (const auto power = shor::perfect_power(n)) {
    return std::make_pair(power->first, n / power->first);
  }
  return std::nullopt;
}

LocalBackend::LocalBackend(std::uint32_t max_qubits, std::string id)
    : max_qubits_(std::min(max_qubits, qsim::kMaxQubits)), id_(std::move(id)) {}

QuantumBackend::Execution LocalBackend::execute(
    const qsim::Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
    const std::function<void(const std::string&)>& on_submitted) {
  if (circuit.num_qubits > max_qubits_) {
    throw Error(ErrorCode::CapacityExceeded,
                "circuit needs " + std::to_string(circuit.num_qubits) + " qubits, backend offers " +
                    std::to_string(max_qubits_));
  }
  const std::string job_id = "local-" + std::to_string(++next_job_);
  if (on_submitted) {
    on_submitted(job_id);
  }
  return Execution{job_id, qsim::run_circuit(circuit, shots, seed)};
}

shor::FactorizationResult run_factorization(const shor::FactorizationRequest& request,
                                            QuantumBackend& backend,
                                            WorkflowObserver* observer) {
  if (request.n < 3) {
    throw Error(ErrorCode::InvalidN, "factorization needs n >= 3, got " + std::to_string(request.n));
  }
  if (request.max_attempts < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_attempts must be at least 1");
  }
  if (request.shots_per_attempt < 1) {
    throw Error(ErrorCode::InvalidArgument, "shots_per_attempt must be at least 1");
  }

  const std::uint64_t n = request.n;
  WorkflowState state;
  notify_phase(observer, state);

  auto finish = [&](std::uint64_t p, std::uint64_t q,
                    std::uint64_t total_shots) -> shor::FactorizationResult {
    state.phase = WorkflowPhase::Succeeded;
    notify_phase(observer, state);
    shor::FactorizationResult result;
    result.p = std::min(p, q);
    result.q = std::max(p, q);
    result.attempts_used = state.attempt;
    result.total_shots = total_shots;
    result.trace = state.trace;
    return result;
  };

  state.phase = WorkflowPhase::ClassicalPre;
  notify_phase(observer, state);

  {
    StepScope scope(observer, "Controller");
    if (const auto shortcut = classical_prechecks(n)) {
      return finish(shortcut->first, shortcut->second, 0);
    }
    if (shor::is_prime(n)) {
      state.phase = WorkflowPhase::Failed;
      notify_phase(observer, state);
      throw Error(ErrorCode::NoNontrivialFactors,
                  std::to_string(n) + " is prime; no nontrivial factors exist");
    }
  }

  const std::uint32_t n_count = shor::counting_qubits_for(n);
  const std::uint64_t q_dim = std::uint64_t{1} << n_count;
  const Rng seed_root(request.seed);
  Rng base_rng = seed_root.split(0);
  std::uint64_t total_shots = 0;

  for (std::uint32_t attempt = 1; attempt <= request.max_attempts; ++attempt) {
    state.attempt = attempt;
    state.phase = WorkflowPhase::ClassicalPre;
    state.current_base.reset();
    notify_phase(observer, state);

    shor::AttemptRecord record;
    record.attempt = attempt;

    {
      StepScope scope(observer, "NumGenerator");
      record.base = shor::generate_base(n, base_rng);
      state.current_base = record.base;
    }
    {
      StepScope scope(observer, "GetGCD");
      record.gcd = shor::gcd(record.base, n);
    }
    if (record.gcd != 1) {
      record.shots = 0;
      record.disposition = "lucky_gcd";
      state.trace.push_back(record);
      return finish(record.gcd, n / record.gcd, total_shots);
    }

    qsim::Circuit circuit;
    {
      StepScope scope(observer, "QunatumModularExponentiation");
      circuit = shor::build_modular_exponentiation_stage(record.base, n, n_count);
    }
    {
      StepScope scope(observer, "QunatumInverseQFT");
      shor::append_inverse_qft_stage(circuit, n_count);
    }

    qsim::ShotResult shot_result;
    try {
      StepScope scope(observer, "Factorise");
      const std::uint64_t job_seed = seed_root.split(attempt).seed();
      auto execution = backend.execute(circuit, request.shots_per_attempt, job_seed,
                                       [&](const std::string& job_id) {
                                         state.phase = WorkflowPhase::QuantumSubmitted;
                                         state.pending_job = job_id;
                                         notify_phase(observer, state);
                                       });
      record.job_id = execution.job_id;
      shot_result = std::move(execution.result);
    } catch (const Error& e) {
      state.phase = WorkflowPhase::Failed;
      state.pending_job.reset();
      record.disposition = "backend_error";
      state.trace.push_back(record);
      notify_phase(observer, state);
      nlohmann::json details = e.details();
      if (!details.is_object()) {
        details = nlohmann::json::object();
      }
      details["attempt"] = attempt;
      details["trace"] = shor::to_json(state.trace);
      throw Error(e.code(), "attempt " + std::to_string(attempt) + ": " + e.what(), details);
    }

    state.phase = WorkflowPhase::PostProcessing;
    state.pending_job.reset();
    notify_phase(observer, state);

    record.shots = shot_result.shots;
    total_shots += shot_result.shots;

    {
      StepScope scope(observer, "Controller");
      const std::uint64_t y = modal_measurement(shot_result);
      record.modal_y = y;
      record.candidates = shor::continued_fractions(y, q_dim, n);
      if (record.candidates.empty()) {
        record.disposition = "no_candidates";
      } else if (const auto order = shor::find_order(record.base, n, y, q_dim)) {
        record.order = *order;
        if (const auto factors = shor::extract_factors(record.base, *order, n)) {
          record.disposition = "factored";
          state.trace.push_back(record);
          return finish(factors->first, factors->second, total_shots);
        }
        record.disposition = "extraction_failed";
      } else {
        record.disposition = "order_not_found";
      }
    }
    state.trace.push_back(record);
  }

  state.phase = WorkflowPhase::Failed;
  notify_phase(observer, state);
  throw Error(ErrorCode::AttemptsExhausted,
              "no factors of " + std::to_string(n) + " found in " +
                  std::to_string(request.max_attempts) + " attempt(s)",
              nlohmann::json{{"attempts", request.max_attempts}, {"trace", shor::to_json(state.trace)}});
}

}  // namespace qcaas::orchestrator
