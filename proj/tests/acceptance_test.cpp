// Acceptance suite: one line per criterion, [PASS] or [FAIL], nonzero exit
// if anything fails. Expected values are computed by the independent oracle
// implementations in oracles.hpp, never by the code under test.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mutations.hpp"
#include "oracles.hpp"
#include "qcaas/common/error.hpp"
#include "qcaas/lifecycle/artifacts.hpp"
#include "qcaas/orchestrator/workflow.hpp"
#include "qcaas/qsim/qft.hpp"
#include "qcaas/qsim/simulator.hpp"
#include "qcaas/qsim/statevector.hpp"
#include "qcaas/qsim/wire.hpp"
#include "qcaas/service/config.hpp"
#include "qcaas/service/job_service.hpp"
#include "qcaas/shor/arith.hpp"
#include "qcaas/shor/shor.hpp"

using namespace qcaas;
using nlohmann::json;

namespace {

std::atomic<std::uint64_t> temp_counter{0};

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("qcaas_acceptance_" + std::to_string(::getpid()) + "_" +
            std::to_string(temp_counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

service::ServiceConfig service_config(const std::filesystem::path& data_dir,
                                      std::uint32_t workers) {
  service::ServiceConfig config = service::ServiceConfig::defaults();
  config.data_dir = data_dir;
  config.worker_threads = workers;
  return config;
}

// Failure accumulator for one criterion: empty reason means pass.
struct Check {
  std::string reason;

  void require(bool ok, const std::string& what) {
    if (!ok && reason.empty()) {
      reason = what;
    }
  }
};

// ---------------------------------------------------------------------------
// 1. End-to-end factorization sweeps.

std::optional<std::string> criterion_factorization() {
  Check check;
  const auto start = std::chrono::steady_clock::now();

  const std::vector<std::pair<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>> cases = {
      {15, {3, 5}}, {21, {3, 7}}};
  for (const auto& [n, expected] : cases) {
    int successes = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      shor::FactorizationRequest request;
      request.n = n;
      request.seed = seed;
      request.max_attempts = 10;
      orchestrator::LocalBackend backend;
      try {
        const shor::FactorizationResult result = orchestrator::run_factorization(request, backend);
        check.require(result.p * result.q == n,
                      "reported factors of " + std::to_string(n) + " do not multiply back");
        check.require(result.attempts_used <= 10, "more than 10 attempts reported");
        if (result.p == expected.first && result.q == expected.second) {
          ++successes;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AttemptsExhausted) {
          return std::string("unexpected error for n=") + std::to_string(n) + " seed " +
                 std::to_string(seed) + ": " + e.what();
        }
      }
    }
    check.require(successes >= 99, "only " + std::to_string(successes) + "/100 seeds factored " +
                                       std::to_string(n) + " within 10 attempts");
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.require(elapsed < 60.0,
                "both sweeps took " + std::to_string(elapsed) + "s, limit is 60s");
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 2. Exact phase concentration for a=7, n=15.

std::optional<std::string> criterion_phase_concentration() {
  Check check;
  const qsim::Circuit circuit = shor::build_order_finding_circuit(7, 15, 8);
  const qsim::ShotResult result = qsim::run_circuit(circuit, 4096, 20260816);

  // r = 4 divides 2^8, so phase estimation is exact: y in {0, 64, 128, 192},
  // uniformly. 5 sigma for Binomial(4096, 1/4) is 5 * sqrt(4096*3/16) = 138.6.
  const std::set<std::uint64_t> support = {0, 64, 128, 192};
  std::map<std::uint64_t, std::uint64_t> tallies;
  std::uint64_t total = 0;
  for (const auto& [bits, count] : result.counts) {
    const std::uint64_t y = std::stoull(bits, nullptr, 2);
    check.require(support.count(y) == 1, "measured y=" + std::to_string(y) + " outside support");
    tallies[y] += count;
    total += count;
  }
  check.require(total == 4096, "shot count mismatch");
  for (const std::uint64_t y : support) {
    const double deviation = std::abs(static_cast<double>(tallies[y]) - 1024.0);
    check.require(deviation <= 138.6, "count for y=" + std::to_string(y) + " off by " +
                                          std::to_string(deviation) + " > 5 sigma");
  }
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 3. Simulator invariants: norm, QFT round trip, unitarity.

qsim::GateOp random_gate(std::uint32_t num_qubits, std::mt19937_64& gen) {
  std::vector<std::uint32_t> wires(num_qubits);
  std::iota(wires.begin(), wires.end(), 0);
  std::shuffle(wires.begin(), wires.end(), gen);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  switch (gen() % 5) {
    case 0:
      return qsim::HGate{wires[0]};
    case 1:
      return qsim::XGate{wires[0]};
    case 2:
      return qsim::CPhaseGate{wires[0], wires[1], angle(gen)};
    case 3:
      return qsim::SwapGate{wires[0], wires[1]};
    default: {
      qsim::CPermGate g;
      g.controls = {wires[0]};
      const std::size_t targets = 1 + gen() % 2;
      std::vector<std::uint64_t> mapping(1ull << targets);
      std::iota(mapping.begin(), mapping.end(), 0);
      std::shuffle(mapping.begin(), mapping.end(), gen);
      for (std::size_t i = 0; i < targets; ++i) {
        g.targets.push_back(wires[1 + i]);
      }
      g.mapping = std::move(mapping);
      return g;
    }
  }
}

// Dense matrix of the production gate: column j is the gate applied to |j>.
oracles::Matrix production_matrix(const qsim::GateOp& op, std::uint32_t n) {
  const std::size_t dim = 1ull << n;
  oracles::Matrix m(dim, std::vector<oracles::Amp>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    qsim::StateVector state(n);
    state.collapse_to(j);
    state.apply(op);
    for (std::size_t i = 0; i < dim; ++i) {
      m[i][j] = state.amplitudes()[i];
    }
  }
  return m;
}

std::vector<std::pair<qsim::GateOp, std::uint32_t>> unitarity_cases() {
  std::vector<std::pair<qsim::GateOp, std::uint32_t>> cases;
  std::mt19937_64 gen(424242);
  for (std::uint32_t n = 1; n <= 3; ++n) {
    for (std::uint32_t t = 0; t < n; ++t) {
      cases.emplace_back(qsim::HGate{t}, n);
      cases.emplace_back(qsim::XGate{t}, n);
    }
    for (std::uint32_t c = 0; c < n; ++c) {
      for (std::uint32_t t = 0; t < n; ++t) {
        if (c == t) continue;
        for (const double theta : {0.37, 2.0, M_PI}) {
          cases.emplace_back(qsim::CPhaseGate{c, t, theta}, n);
        }
        qsim::CPermGate flip;
        flip.controls = {c};
        flip.targets = {t};
        flip.mapping = {1, 0};
        cases.emplace_back(std::move(flip), n);
      }
    }
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) {
        cases.emplace_back(qsim::SwapGate{a, b}, n);
      }
    }
  }
  // Two-target controlled permutations on three qubits, random bijections.
  for (int i = 0; i < 8; ++i) {
    qsim::CPermGate g;
    g.controls = {static_cast<std::uint32_t>(i % 3)};
    g.targets = {static_cast<std::uint32_t>((i + 1) % 3), static_cast<std::uint32_t>((i + 2) % 3)};
    std::vector<std::uint64_t> mapping = {0, 1, 2, 3};
    std::shuffle(mapping.begin(), mapping.end(), gen);
    g.mapping = std::move(mapping);
    cases.emplace_back(std::move(g), 3);
  }
  return cases;
}

std::optional<std::string> criterion_simulator_invariants() {
  Check check;

  // Norm discipline across 10^4 random gates on five qubits.
  std::mt19937_64 gen(1618);
  qsim::StateVector state(5);
  double worst_norm = 0.0;
  for (int i = 0; i < 10000; ++i) {
    state.apply(random_gate(5, gen));
    worst_norm = std::max(worst_norm, std::abs(state.norm_squared() - 1.0));
  }
  check.require(worst_norm <= 1e-10,
                "norm drifted to " + std::to_string(worst_norm) + " > 1e-10");

  // QFT then inverse QFT restores random 4-qubit states.
  std::mt19937_64 state_gen(271828);
  const std::vector<std::uint32_t> qubits = {0, 1, 2, 3};
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<oracles::Amp> reference = oracles::random_state(4, state_gen);
    qsim::StateVector sv(4);
    sv.set_amplitudes(reference);
    for (const qsim::GateOp& op : qsim::qft_ops(qubits)) {
      sv.apply(op);
    }
    for (const qsim::GateOp& op : qsim::inverse_qft_ops(qubits)) {
      sv.apply(op);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      worst = std::max(worst, std::abs(sv.amplitudes()[i] - reference[i]));
    }
    check.require(worst <= 1e-9,
                  "QFT round trip error " + std::to_string(worst) + " > 1e-9");
  }

  // Dense unitarity of every gate on up to three qubits.
  for (const auto& [op, n] : unitarity_cases()) {
    const oracles::Matrix u = production_matrix(op, n);
    const double err =
        oracles::max_abs_diff(oracles::matmul(oracles::dagger(u), u),
                              oracles::identity(1ull << n));
    check.require(err <= 1e-9, "gate is not unitary within 1e-9 (error " +
                                   std::to_string(err) + ")");
  }
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 4. Sampling soundness on five fixed circuits.

std::optional<std::string> criterion_sampling() {
  Check check;
  const std::vector<const char*> documents = {
      // Entangled triple: only 000 and 111.
      R"({"num_qubits":3,"num_clbits":3,"ops":[
        {"gate":"h","target":0},
        {"gate":"cperm","controls":[0],"targets":[1],"mapping":[1,0]},
        {"gate":"cperm","controls":[1],"targets":[2],"mapping":[1,0]},
        {"gate":"measure","qubit":0,"clbit":0},
        {"gate":"measure","qubit":1,"clbit":1},
        {"gate":"measure","qubit":2,"clbit":2}]})",
      // Uniform superposition over all eight outcomes.
      R"({"num_qubits":3,"num_clbits":3,"ops":[
        {"gate":"h","target":0},{"gate":"h","target":1},{"gate":"h","target":2},
        {"gate":"measure","qubit":0,"clbit":0},
        {"gate":"measure","qubit":1,"clbit":1},
        {"gate":"measure","qubit":2,"clbit":2}]})",
      // Phase interference between two H layers.
      R"({"num_qubits":3,"num_clbits":3,"ops":[
        {"gate":"h","target":0},{"gate":"h","target":1},
        {"gate":"cphase","control":0,"target":1,"theta":1.0471975511965976},
        {"gate":"h","target":1},{"gate":"x","target":2},
        {"gate":"measure","qubit":0,"clbit":0},
        {"gate":"measure","qubit":1,"clbit":1},
        {"gate":"measure","qubit":2,"clbit":2}]})",
      // Bit motion: X then swap across the register.
      R"({"num_qubits":3,"num_clbits":3,"ops":[
        {"gate":"x","target":0},{"gate":"swap","a":0,"b":2},{"gate":"h","target":1},
        {"gate":"measure","qubit":0,"clbit":0},
        {"gate":"measure","qubit":1,"clbit":1},
        {"gate":"measure","qubit":2,"clbit":2}]})",
      // Controlled two-qubit rotation of the register.
      R"({"num_qubits":3,"num_clbits":3,"ops":[
        {"gate":"h","target":2},{"gate":"h","target":0},
        {"gate":"cperm","controls":[2],"targets":[0,1],"mapping":[1,2,3,0]},
        {"gate":"measure","qubit":0,"clbit":0},
        {"gate":"measure","qubit":1,"clbit":1},
        {"gate":"measure","qubit":2,"clbit":2}]})",
  };

  for (std::size_t i = 0; i < documents.size(); ++i) {
    const qsim::Circuit circuit = qsim::circuit_from_wire(json::parse(documents[i]));
    const std::uint64_t seed = 9000 + i;
    const qsim::ShotResult result = qsim::run_circuit(circuit, 8192, seed);
    const std::vector<double> exact = oracles::exact_clbit_distribution(circuit);
    const double tv = oracles::tv_distance(result.counts, exact, 8192);
    check.require(tv < 0.05, "circuit " + std::to_string(i) + " TV distance " +
                                 std::to_string(tv) + " >= 0.05");

    // Determinism: the same seed reproduces the result byte for byte.
    const qsim::ShotResult again = qsim::run_circuit(circuit, 8192, seed);
    check.require(qsim::shot_result_to_wire(result).dump() ==
                      qsim::shot_result_to_wire(again).dump(),
                  "seeded rerun of circuit " + std::to_string(i) + " differs");
  }
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 5. Classical oracles: gcd, convergents, order recovery.

std::optional<std::string> criterion_classical_oracles() {
  Check check;

  // gcd against the brute-force divisor scan on [0, 500]^2.
  for (std::uint64_t a = 0; a <= 500 && check.reason.empty(); ++a) {
    for (std::uint64_t b = 0; b <= 500; ++b) {
      if (a == 0 && b == 0) continue;
      if (shor::gcd(a, b) != oracles::brute_force_gcd(a, b)) {
        check.require(false, "gcd(" + std::to_string(a) + ", " + std::to_string(b) +
                                 ") disagrees with the divisor scan");
        break;
      }
    }
  }

  // Convergent lists match the independent expansion, truncated below n.
  for (std::uint64_t n = 2; n <= 32 && check.reason.empty(); ++n) {
    for (std::uint64_t y = 0; y < 256; ++y) {
      const auto actual = shor::continued_fractions(y, 256, n);
      std::vector<oracles::Fraction> expected;
      if (y > 0) {
        for (const oracles::Fraction& f : oracles::reference_convergents(y, 256)) {
          if (f.den < n) {
            expected.push_back(f);
          }
        }
      }
      bool same = actual.size() == expected.size();
      for (std::size_t i = 0; same && i < actual.size(); ++i) {
        same = actual[i].numerator == expected[i].num && actual[i].denominator == expected[i].den;
      }
      if (!same) {
        check.require(false, "convergents of " + std::to_string(y) + "/256 below " +
                                 std::to_string(n) + " differ from the reference expansion");
        break;
      }
      // Any fraction s/r with |y/256 - s/r| <= 1/(2r^2) must appear reduced.
      for (std::uint64_t r = 1; r < n && y > 0; ++r) {
        for (std::uint64_t s = 0; s < r; ++s) {
          const std::uint64_t delta =
              y * r > s * 256 ? y * r - s * 256 : s * 256 - y * r;
          if (2 * r * delta > 256) continue;
          const shor::PeriodCandidate reduced =
              s == 0 ? shor::PeriodCandidate{0, 1}
                     : shor::PeriodCandidate{s / std::gcd(s, r), r / std::gcd(s, r)};
          if (std::find(actual.begin(), actual.end(), reduced) == actual.end()) {
            check.require(false, "close fraction " + std::to_string(s) + "/" +
                                     std::to_string(r) + " missing from convergents of " +
                                     std::to_string(y) + "/256");
          }
        }
      }
    }
  }

  // Order recovery: for every coprime base and every phase bucket the
  // measurement could concentrate on, the recovered order is the brute truth.
  for (const std::uint64_t n : {15ull, 21ull, 33ull, 35ull}) {
    for (std::uint64_t a = 2; a < n && check.reason.empty(); ++a) {
      if (std::gcd(a, n) != 1) continue;
      const std::uint64_t r0 = oracles::brute_force_order(a, n);
      for (std::uint64_t s = 1; s < r0; ++s) {
        const std::uint64_t y = (2 * 256 * s + r0) / (2 * r0);  // round(256 s / r0)
        const auto recovered = shor::find_order(a, n, y, 256);
        if (!recovered || *recovered != r0) {
          check.require(false, "order of " + std::to_string(a) + " mod " + std::to_string(n) +
                                   " not recovered from y=" + std::to_string(y));
          break;
        }
      }
    }
  }
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 6. Billing exactness under a randomized job load.

std::optional<std::string> criterion_billing() {
  Check check;
  TempDir tmp;
  service::JobService svc(service_config(tmp.path, 4));

  const json circuit = json::parse(R"({
    "num_qubits": 2, "num_clbits": 2,
    "ops": [
      {"gate": "h", "target": 0},
      {"gate": "cperm", "controls": [0], "targets": [1], "mapping": [1, 0]},
      {"gate": "measure", "qubit": 0, "clbit": 0},
      {"gate": "measure", "qubit": 1, "clbit": 1}
    ]
  })");

  std::mt19937_64 gen(31415);
  std::uniform_int_distribution<std::uint64_t> shot_dist(1, 4096);
  const std::vector<std::pair<std::string, std::uint64_t>> backends = {
      {"local-sim-fast", 3}, {"local-sim-small", 1}};
  const std::vector<std::string> tenants = {"atlas", "borealis", "cascade"};

  std::map<std::string, std::uint64_t> expected;
  std::vector<std::string> ids;
  for (int i = 0; i < 200; ++i) {
    const auto& [backend_id, price] = backends[gen() % backends.size()];
    const std::string& tenant = tenants[gen() % tenants.size()];
    const std::uint64_t shots = shot_dist(gen);
    ids.push_back(svc.submit_job(tenant, circuit, shots, backend_id));
    expected[tenant] += shots * price;
  }
  for (const std::string& id : ids) {
    const service::QuantumJob job = svc.await_job(id);
    check.require(job.status == service::JobStatus::Done,
                  "job " + id + " did not complete");
  }
  for (const std::string& tenant : tenants) {
    const service::BillingSummary summary = svc.billing(tenant);
    check.require(summary.total == expected[tenant],
                  "ledger total for " + tenant + " is " + std::to_string(summary.total) +
                      ", expected " + std::to_string(expected[tenant]));
    std::uint64_t sum = 0;
    for (const service::LedgerEntry& entry : summary.entries) {
      check.require(entry.cost == entry.shots * entry.price_per_shot,
                    "entry cost is not shots times price");
      sum += entry.cost;
    }
    check.require(sum == summary.total, "entries do not sum to the total");
  }

  bool duplicate_rejected = false;
  try {
    svc.charge(ids.front());
  } catch (const Error& e) {
    duplicate_rejected = e.code() == ErrorCode::DuplicateCharge;
  }
  check.require(duplicate_rejected, "double charge was not rejected");
  svc.stop(true);
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 7. Split enforcement across instrumented workflows, plus the deployment
//    brute force.

class KindProbe : public orchestrator::WorkflowObserver {
 public:
  orchestrator::StepKind current = orchestrator::StepKind::Classical;
  void on_step(std::string_view, orchestrator::StepKind kind) override { current = kind; }
};

class SplitAuditBackend : public orchestrator::QuantumBackend {
 public:
  SplitAuditBackend(KindProbe& probe) : probe_(probe) {}

  std::string id() const override { return inner_.id(); }
  std::uint32_t max_qubits() const override { return inner_.max_qubits(); }
  Execution execute(const qsim::Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                    const std::function<void(const std::string&)>& on_submitted) override {
    ++executions;
    if (probe_.current != orchestrator::StepKind::Quantum) {
      ++violations;
    }
    return inner_.execute(circuit, shots, seed, on_submitted);
  }

  std::uint64_t executions = 0;
  std::uint64_t violations = 0;

 private:
  KindProbe& probe_;
  orchestrator::LocalBackend inner_;
};

std::optional<std::string> criterion_split_enforcement() {
  Check check;

  std::uint64_t total_executions = 0;
  std::uint64_t total_violations = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    shor::FactorizationRequest request;
    request.n = (seed % 2 == 0) ? 21 : 15;
    request.seed = seed;
    KindProbe probe;
    SplitAuditBackend backend(probe);
    try {
      orchestrator::run_factorization(request, backend, &probe);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AttemptsExhausted) {
        return std::string("workflow error: ") + e.what();
      }
    }
    total_executions += backend.executions;
    total_violations += backend.violations;
  }
  check.require(total_executions > 0, "instrumentation saw no quantum executions at all");
  check.require(total_violations == 0,
                std::to_string(total_violations) + " simulator invocations from classical steps");

  // Exactly one of the 2^6 node assignments validates: the one that puts
  // each service on the node kind matching its classification.
  const auto classifications = lifecycle::workflow_classifications();
  const std::vector<std::string>& services = orchestrator::workflow_services();
  lifecycle::DeploymentDescriptor descriptor;
  descriptor.nodes = {{"classical-node", lifecycle::NodeKind::Classical},
                      {"quantum-node", lifecycle::NodeKind::Quantum}};
  int passing = 0;
  std::map<std::string, std::string> winning;
  for (std::uint32_t mask = 0; mask < (1u << services.size()); ++mask) {
    descriptor.assignments.clear();
    for (std::size_t i = 0; i < services.size(); ++i) {
      descriptor.assignments[services[i]] =
          (mask >> i) & 1u ? "quantum-node" : "classical-node";
    }
    const lifecycle::DeploymentReport report =
        lifecycle::validate_deployment(descriptor, classifications);
    if (report.passed) {
      ++passing;
      winning = descriptor.assignments;
    }
  }
  check.require(passing == 1,
                std::to_string(passing) + " of 64 assignments validated, expected exactly 1");
  for (const auto& [service, kind] : classifications) {
    const std::string expected_node = kind == orchestrator::StepKind::Quantum
                                          ? "quantum-node"
                                          : "classical-node";
    check.require(winning[service] == expected_node,
                  "winning assignment puts " + service + " on the wrong node kind");
  }
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 8. Gateway robustness against mutated circuit documents.

std::optional<std::string> criterion_gateway_robustness() {
  Check check;
  TempDir tmp;
  service::JobService svc(service_config(tmp.path, 2));

  // The unmutated base document is accepted and simulated once.
  const std::string base_id =
      svc.submit_job("probe", mutations::base_circuit(), 32, "local-sim-fast");
  check.require(svc.await_job(base_id).status == service::JobStatus::Done,
                "the valid base document did not run");
  const std::uint64_t invocations_before = svc.simulator_invocations();

  const std::vector<mutations::Mutation> all = mutations::mutated_circuits();
  check.require(all.size() >= 100,
                "only " + std::to_string(all.size()) + " mutations generated, need 100");
  std::size_t rejected = 0;
  for (const mutations::Mutation& mutation : all) {
    try {
      svc.submit_job("probe", mutation.doc, 32, "local-sim-fast");
      check.require(false, "accepted mutated document: " + mutation.description);
    } catch (const Error& e) {
      check.require(std::string(e.what()).size() > 0,
                    "rejection without diagnostics: " + mutation.description);
      ++rejected;
    }
  }
  check.require(rejected == all.size(), "not every mutation was rejected");
  check.require(svc.simulator_invocations() == invocations_before,
                "a mutated document reached the simulator");
  svc.stop(true);
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

// ---------------------------------------------------------------------------
// 9. Durability across kill and restart.

std::optional<std::string> criterion_durability() {
  Check check;
  TempDir tmp;
  const json circuit = json::parse(R"({
    "num_qubits": 2, "num_clbits": 2,
    "ops": [
      {"gate": "h", "target": 0},
      {"gate": "cperm", "controls": [0], "targets": [1], "mapping": [1, 0]},
      {"gate": "measure", "qubit": 0, "clbit": 0},
      {"gate": "measure", "qubit": 1, "clbit": 1}
    ]
  })");

  // Accept five jobs with no workers running, then stop mid-queue.
  std::vector<std::string> ids;
  std::map<std::string, std::uint64_t> shots_by_id;
  {
    service::JobService svc(service_config(tmp.path, 0));
    for (const std::uint64_t shots : {500ull, 123ull, 77ull, 2048ull, 1ull}) {
      const std::string id = svc.submit_job("durable", circuit, shots, "local-sim-fast");
      ids.push_back(id);
      shots_by_id[id] = shots;
    }
    svc.stop(false);
  }

  // A replay-only restart sees every acknowledged job, still queued.
  {
    service::JobService svc(service_config(tmp.path, 0));
    for (const std::string& id : ids) {
      const service::QuantumJob job = svc.job(id);
      check.require(job.status == service::JobStatus::Queued,
                    "job " + id + " replayed with status " + to_string(job.status));
      check.require(job.shots == shots_by_id[id], "job " + id + " replayed with wrong shots");
    }
    check.require(svc.billing("durable").total == 0, "charges appeared before any job ran");
    svc.stop(false);
  }

  // A working restart completes everything and bills exactly once.
  std::uint64_t expected_total = 0;
  for (const auto& [id, shots] : shots_by_id) {
    expected_total += shots * 3;
  }
  {
    service::JobService svc(service_config(tmp.path, 2));
    for (const std::string& id : ids) {
      const service::QuantumJob job = svc.await_job(id);
      check.require(job.status == service::JobStatus::Done, "job " + id + " did not finish");
      check.require(job.cost == shots_by_id[id] * 3, "job " + id + " billed the wrong cost");
    }
    check.require(svc.billing("durable").total == expected_total,
                  "ledger total after restart is wrong");
    svc.stop(true);
  }

  // A final replay reproduces the identical ledger without running anything.
  {
    service::JobService svc(service_config(tmp.path, 0));
    check.require(svc.billing("durable").total == expected_total,
                  "replayed ledger total differs");
    check.require(svc.simulator_invocations() == 0, "replay invoked the simulator");
    for (const std::string& id : ids) {
      check.require(svc.job(id).status == service::JobStatus::Done,
                    "job " + id + " lost its terminal status");
    }
    svc.stop(false);
  }
  return check.reason.empty() ? std::nullopt : std::optional<std::string>(check.reason);
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* description;
    std::function<std::optional<std::string>()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "factor 15 and 21 within 10 attempts for >= 99 of 100 seeds, under 60s",
       criterion_factorization},
      {2, "phase concentration: all 4096 shots on {0, 64, 128, 192}, each within 5 sigma",
       criterion_phase_concentration},
      {3, "simulator invariants: norm 1e-10, QFT round trip 1e-9, unitarity 1e-9",
       criterion_simulator_invariants},
      {4, "sampling soundness: TV < 0.05 on five fixed circuits, seeded reruns identical",
       criterion_sampling},
      {5, "classical oracles: gcd scan, convergent structure, order recovery",
       criterion_classical_oracles},
      {6, "billing exactness across 200 randomized jobs, double charges rejected",
       criterion_billing},
      {7, "split enforcement: no classical-step simulator calls, unique valid deployment",
       criterion_split_enforcement},
      {8, "gateway robustness: every mutated circuit document rejected before the simulator",
       criterion_gateway_robustness},
      {9, "durability: restarted service replays jobs and ledger to identical state",
       criterion_durability},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::optional<std::string> failure;
    try {
      failure = criterion.run();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (failure) {
      ++failures;
      std::printf("[FAIL] %d. %s: %s\n", criterion.number, criterion.description,
                  failure->c_str());
    } else {
      std::printf("[PASS] %d. %s\n", criterion.number, criterion.description);
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
