#include "qcaas/qsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "qcaas/common/error.hpp"
#include "qcaas/common/rng.hpp"

namespace qcaas::qsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string at(std::size_t index) { return "ops[" + std::to_string(index) + "]: "; }

// Classical registers are capped to one machine word; measured keys stay
// renderable and comparable.
constexpr std::uint32_t kMaxClbits = 64;

}  // namespace

void validate_circuit(const Circuit& circuit) {
  std::vector<std::string> problems;

  const bool width_ok = circuit.num_qubits >= 1 && circuit.num_qubits <= kMaxQubits;
  if (!width_ok) {
    problems.push_back("num_qubits " + std::to_string(circuit.num_qubits) + " outside [1, " +
                       std::to_string(kMaxQubits) + "]");
  }
  if (circuit.num_clbits > kMaxClbits) {
    problems.push_back("num_clbits " + std::to_string(circuit.num_clbits) + " exceeds " +
                       std::to_string(kMaxClbits));
  }

  // Per-op qubit checks run only against a valid register width; an invalid
  // width is already a rejection on its own.
  const std::uint32_t nq = width_ok ? circuit.num_qubits : 0;
  const std::uint32_t nc = circuit.num_clbits;
  std::vector<bool> measured(nq, false);
  std::set<std::uint32_t> clbits_written;

  auto check_qubit = [&](std::size_t i, const char* role, std::uint32_t q) -> bool {
    if (nq == 0) {
      return false;
    }
    if (q >= nq) {
      problems.push_back(at(i) + std::string(role) + " qubit " + std::to_string(q) +
                         " out of range for " + std::to_string(nq) + " qubits");
      return false;
    }
    return true;
  };
  auto check_live = [&](std::size_t i, std::uint32_t q) {
    if (measured[q]) {
      problems.push_back(at(i) + "qubit " + std::to_string(q) +
                         " was already measured; unitary ops may not follow");
    }
  };

  for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
    std::visit(
        overloaded{
            [&](const HGate& g) {
              if (check_qubit(i, "target", g.target)) check_live(i, g.target);
            },
            [&](const XGate& g) {
              if (check_qubit(i, "target", g.target)) check_live(i, g.target);
            },
            [&](const CPhaseGate& g) {
              const bool c_ok = check_qubit(i, "control", g.control);
              const bool t_ok = check_qubit(i, "target", g.target);
              if (g.control == g.target) {
                problems.push_back(at(i) + "control and target must differ");
              }
              if (!std::isfinite(g.theta)) {
                problems.push_back(at(i) + "theta must be finite");
              }
              if (c_ok) check_live(i, g.control);
              if (t_ok && g.target != g.control) check_live(i, g.target);
            },
            [&](const SwapGate& g) {
              const bool a_ok = check_qubit(i, "first", g.a);
              const bool b_ok = check_qubit(i, "second", g.b);
              if (g.a == g.b) {
                problems.push_back(at(i) + "swap qubits must differ");
              }
              if (a_ok) check_live(i, g.a);
              if (b_ok && g.b != g.a) check_live(i, g.b);
            },
            [&](const CPermGate& g) {
              std::set<std::uint32_t> listed;
              bool indices_ok = true;
              for (std::uint32_t q : g.controls) {
                indices_ok = check_qubit(i, "control", q) && indices_ok;
                if (!listed.insert(q).second) {
                  problems.push_back(at(i) + "qubit " + std::to_string(q) +
                                     " listed more than once");
                }
              }
              for (std::uint32_t q : g.targets) {
                indices_ok = check_qubit(i, "target", q) && indices_ok;
                if (!listed.insert(q).second) {
                  problems.push_back(at(i) + "qubit " + std::to_string(q) +
                                     " listed more than once");
                }
              }
              if (g.targets.empty()) {
                problems.push_back(at(i) + "permutation needs at least one target qubit");
              } else if (g.targets.size() <= kMaxQubits) {
                const std::uint64_t size = std::uint64_t{1} << g.targets.size();
                if (g.mapping.size() != size) {
                  problems.push_back(at(i) + "mapping has " + std::to_string(g.mapping.size()) +
                                     " entries, expected " + std::to_string(size));
                } else {
                  std::vector<bool> seen(size, false);
                  for (std::uint64_t v : g.mapping) {
                    if (v >= size) {
                      problems.push_back(at(i) + "mapping value " + std::to_string(v) +
                                         " outside [0, " + std::to_string(size) + ")");
                      break;
                    }
                    if (seen[v]) {
                      problems.push_back(at(i) + "mapping value " + std::to_string(v) +
                                         " repeats; not a bijection");
                      break;
                    }
                    seen[v] = true;
                  }
                }
              } else {
                problems.push_back(at(i) + "permutation target register too wide");
              }
              if (indices_ok) {
                for (std::uint32_t q : g.controls) check_live(i, q);
                for (std::uint32_t q : g.targets) check_live(i, q);
              }
            },
            [&](const MeasureOp& m) {
              const bool q_ok = check_qubit(i, "measured", m.qubit);
              if (m.clbit >= nc) {
                problems.push_back(at(i) + "classical bit " + std::to_string(m.clbit) +
                                   " out of range for " + std::to_string(nc) + " classical bits");
              } else if (!clbits_written.insert(m.clbit).second) {
                problems.push_back(at(i) + "classical bit " + std::to_string(m.clbit) +
                                   " written by more than one measure");
              }
              if (q_ok) {
                measured[m.qubit] = true;
              }
            },
        },
        circuit.ops[i]);
  }

  if (!problems.empty()) {
    throw Error(ErrorCode::MalformedCircuit,
                "circuit failed validation with " + std::to_string(problems.size()) + " problem(s)",
                nlohmann::json(problems));
  }
}

StateVector run_unitary_prefix(const Circuit& circuit) {
  validate_circuit(circuit);
  StateVector state(circuit.num_qubits);
  for (const GateOp& op : circuit.ops) {
    if (!is_measure(op)) {
      state.apply(op);
    }
  }
  return state;
}

ShotResult run_circuit(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) {
    throw Error(ErrorCode::InvalidArgument, "shots must be at least 1");
  }
  validate_circuit(circuit);

  std::vector<MeasureOp> measures;
  for (const GateOp& op : circuit.ops) {
    if (const auto* m = std::get_if<MeasureOp>(&op)) {
      measures.push_back(*m);
    }
  }
  if (measures.empty()) {
    throw Error(ErrorCode::NothingToSample, "circuit has no measure ops; nothing to sample");
  }

  StateVector state(circuit.num_qubits);
  for (const GateOp& op : circuit.ops) {
    if (!is_measure(op)) {
      state.apply(op);
    }
  }

  // Cumulative distribution over basis states; the unitary prefix is
  // simulated once and each shot is one draw against it.
  const std::uint64_t dim = state.dimension();
  std::vector<double> cumulative(dim);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < dim; ++i) {
    acc += state.probability(i);
    cumulative[i] = acc;
  }
  cumulative[dim - 1] = 1.0;

  Rng rng(seed);
  ShotResult result;
  result.shots = shots;
  result.seed = seed;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::uint64_t basis = static_cast<std::uint64_t>(it - cumulative.begin());
    std::uint64_t clword = 0;
    for (const MeasureOp& m : measures) {
      const std::uint64_t bit = (basis >> m.qubit) & 1ull;
      clword |= bit << m.clbit;
    }
    result.counts[to_bitstring(clword, circuit.num_clbits)] += 1;
  }
  return result;
}

}  // namespace qcaas::qsim
