#include "qcaas/qsim/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcaas/common/error.hpp"

namespace qcaas::qsim {

namespace {

constexpr double kNormTolerance = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void validate_cperm(const CPermGate& g, std::uint32_t num_qubits) {
  if (g.targets.empty()) {
    throw Error(ErrorCode::InvalidArgument, "permutation gate needs at least one target qubit");
  }
  if (g.targets.size() >= 64) {
    throw Error(ErrorCode::InvalidArgument, "permutation gate target register too wide");
  }
  std::vector<bool> used(num_qubits, false);
  auto claim = [&](std::uint32_t q, const char* role) {
    if (q >= num_qubits) {
      throw Error(ErrorCode::IndexOutOfRange,
                  std::string(role) + " qubit " + std::to_string(q) + " out of range for " +
                      std::to_string(num_qubits) + " qubits");
    }
    if (used[q]) {
      throw Error(ErrorCode::InvalidArgument,
                  "permutation gate lists qubit " + std::to_string(q) + " more than once");
    }
    used[q] = true;
  };
  for (std::uint32_t q : g.controls) claim(q, "control");
  for (std::uint32_t q : g.targets) claim(q, "target");

  const std::uint64_t size = std::uint64_t{1} << g.targets.size();
  if (g.mapping.size() != size) {
    throw Error(ErrorCode::NonBijectiveMapping,
                "mapping has " + std::to_string(g.mapping.size()) + " entries, expected " +
                    std::to_string(size));
  }
  std::vector<bool> seen(size, false);
  for (std::uint64_t v : g.mapping) {
    if (v >= size) {
      throw Error(ErrorCode::NonBijectiveMapping,
                  "mapping value " + std::to_string(v) + " outside [0, " + std::to_string(size) + ")");
    }
    if (seen[v]) {
      throw Error(ErrorCode::NonBijectiveMapping,
                  "mapping value " + std::to_string(v) + " repeats; not a bijection");
    }
    seen[v] = true;
  }
}

}  // namespace

StateVector::StateVector(std::uint32_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw Error(ErrorCode::InvalidArgument,
                "statevector width " + std::to_string(num_qubits) + " outside [1, " +
                    std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(dimension(), Amplitude{0.0, 0.0});
  amps_[0] = Amplitude{1.0, 0.0};
}

Amplitude StateVector::amplitude(std::uint64_t basis) const {
  if (basis >= dimension()) {
    throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
  }
  return amps_[basis];
}

double StateVector::probability(std::uint64_t basis) const {
  const Amplitude a = amplitude(basis);
  return std::norm(a);
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const Amplitude& a : amps_) {
    total += std::norm(a);
  }
  return total;
}

void StateVector::set_amplitudes(std::vector<Amplitude> amps) {
  if (amps.size() != dimension()) {
    throw Error(ErrorCode::InvalidArgument,
                "amplitude vector has wrong length for " + std::to_string(num_qubits_) + " qubits");
  }
  amps_ = std::move(amps);
  check_norm();
}

void StateVector::apply(const GateOp& op) {
  std::visit(
      overloaded{
          [&](const HGate& g) { apply_h(g.target); },
          [&](const XGate& g) { apply_x(g.target); },
          [&](const CPhaseGate& g) { apply_cphase(g.control, g.target, g.theta); },
          [&](const SwapGate& g) { apply_swap(g.a, g.b); },
          [&](const CPermGate& g) { apply_cperm(g); },
          [&](const MeasureOp&) {
            throw Error(ErrorCode::InvalidArgument,
                        "measure is not a unitary gate; use measure_all or run_circuit");
          },
      },
      op);
  check_norm();
}

void StateVector::collapse_to(std::uint64_t basis) {
  if (basis >= dimension()) {
    throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
  }
  std::fill(amps_.begin(), amps_.end(), Amplitude{0.0, 0.0});
  amps_[basis] = Amplitude{1.0, 0.0};
}

void StateVector::apply_h(std::uint32_t target) {
  require_qubit(target);
  const std::uint64_t stride = std::uint64_t{1} << target;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const std::uint64_t dim = dimension();
  for (std::uint64_t base = 0; base < dim; base += stride << 1) {
    for (std::uint64_t low = 0; low < stride; ++low) {
      Amplitude& a0 = amps_[base + low];
      Amplitude& a1 = amps_[base + low + stride];
      const Amplitude s0 = (a0 + a1) * inv_sqrt2;
      const Amplitude s1 = (a0 - a1) * inv_sqrt2;
      a0 = s0;
      a1 = s1;
    }
  }
}

void StateVector::apply_x(std::uint32_t target) {
  require_qubit(target);
  const std::uint64_t stride = std::uint64_t{1} << target;
  const std::uint64_t dim = dimension();
  for (std::uint64_t base = 0; base < dim; base += stride << 1) {
    for (std::uint64_t low = 0; low < stride; ++low) {
      std::swap(amps_[base + low], amps_[base + low + stride]);
    }
  }
}

void StateVector::apply_cphase(std::uint32_t control, std::uint32_t target, double theta) {
  require_qubit(control);
  require_qubit(target);
  if (control == target) {
    throw Error(ErrorCode::InvalidArgument, "controlled phase needs distinct control and target");
  }
  if (!std::isfinite(theta)) {
    throw Error(ErrorCode::InvalidArgument, "controlled phase angle must be finite");
  }
  const Amplitude phase = std::polar(1.0, theta);
  const std::uint64_t mask = (std::uint64_t{1} << control) | (std::uint64_t{1} << target);
  const std::uint64_t dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & mask) == mask) {
      amps_[i] *= phase;
    }
  }
}

void StateVector::apply_swap(std::uint32_t a, std::uint32_t b) {
  require_qubit(a);
  require_qubit(b);
  if (a == b) {
    throw Error(ErrorCode::InvalidArgument, "swap needs two distinct qubits");
  }
  const std::uint64_t ma = std::uint64_t{1} << a;
  const std::uint64_t mb = std::uint64_t{1} << b;
  const std::uint64_t dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    // Visit each pair once, from its bit-a=1, bit-b=0 member.
    if ((i & ma) != 0 && (i & mb) == 0) {
      std::swap(amps_[i], amps_[i ^ ma ^ mb]);
    }
  }
}

void StateVector::apply_cperm(const CPermGate& gate) {
  validate_cperm(gate, num_qubits_);
  std::uint64_t control_mask = 0;
  for (std::uint32_t q : gate.controls) {
    control_mask |= std::uint64_t{1} << q;
  }
  const std::uint64_t dim = dimension();
  std::vector<Amplitude> next(amps_);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & control_mask) != control_mask) {
      continue;
    }
    std::uint64_t value = 0;
    for (std::size_t j = 0; j < gate.targets.size(); ++j) {
      value |= ((i >> gate.targets[j]) & 1ull) << j;
    }
    const std::uint64_t image = gate.mapping[value];
    if (image == value) {
      continue;
    }
    std::uint64_t dest = i;
    for (std::size_t j = 0; j < gate.targets.size(); ++j) {
      const std::uint64_t bit = (image >> j) & 1ull;
      dest = (dest & ~(std::uint64_t{1} << gate.targets[j])) | (bit << gate.targets[j]);
    }
    next[dest] = amps_[i];
  }
  amps_ = std::move(next);
}

void StateVector::require_qubit(std::uint32_t q) const {
  if (q >= num_qubits_) {
    throw Error(ErrorCode::IndexOutOfRange,
                "qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits_) +
                    " qubits");
  }
}

void StateVector::check_norm() const {
  const double n2 = norm_squared();
  // A NaN norm fails this comparison and is reported as drift.
  if (!(std::abs(n2 - 1.0) < kNormTolerance)) {
    throw Error(ErrorCode::NumericalFailure,
                "statevector norm drifted: |amps|^2 = " + std::to_string(n2));
  }
}

StateVector apply_gate(StateVector state, const GateOp& gate) {
  state.apply(gate);
  return state;
}

MeasureAllOutcome measure_all(StateVector& state, Rng& rng) {
  const std::uint64_t dim = state.dimension();
  const double u = rng.uniform();
  double acc = 0.0;
  std::uint64_t chosen = dim - 1;
  for (std::uint64_t i = 0; i < dim; ++i) {
    acc += state.probability(i);
    if (u < acc) {
      chosen = i;
      break;
    }
  }
  state.collapse_to(chosen);
  return MeasureAllOutcome{to_bitstring(chosen, state.num_qubits()), chosen};
}

}  // namespace qcaas::qsim
