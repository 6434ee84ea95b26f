#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcaas/common/rng.hpp"
#include "qcaas/qsim/types.hpp"

namespace qcaas::qsim {

/// Dense statevector over num_qubits qubits, little-endian indexed.
///
/// Invariants: 2^num_qubits amplitudes, squared norm 1 within 1e-10, all
/// values finite. Every mutating operation re-checks the norm and throws
/// NumericalFailure on drift, so a corrupted state never propagates.
class StateVector {
 public:
  /// Initializes |0...0>. num_qubits must be in [1, kMaxQubits].
  explicit StateVector(std::uint32_t num_qubits);

  std::uint32_t num_qubits() const noexcept { return num_qubits_; }
  std::uint64_t dimension() const noexcept { return std::uint64_t{1} << num_qubits_; }

  const std::vector<Amplitude>& amplitudes() const noexcept { return amps_; }
  Amplitude amplitude(std::uint64_t basis) const;
  double probability(std::uint64_t basis) const;
  double norm_squared() const;

  /// Replaces the amplitudes. Must have length 2^num_qubits and be
  /// normalized within 1e-10.
  void set_amplitudes(std::vector<Amplitude> amps);

  /// Applies a unitary gate in place. MeasureOp is rejected here; dedicated
  /// measurement entry points handle collapse.
  void apply(const GateOp& op);

  /// Collapses to the given basis state with amplitude 1.
  void collapse_to(std::uint64_t basis);

 private:
  void apply_h(std::uint32_t target);
  void apply_x(std::uint32_t target);
  void apply_cphase(std::uint32_t control, std::uint32_t target, double theta);
  void apply_swap(std::uint32_t a, std::uint32_t b);
  void apply_cperm(const CPermGate& gate);
  void require_qubit(std::uint32_t q) const;
  void check_norm() const;

  std::uint32_t num_qubits_;
  std::vector<Amplitude> amps_;
};

/// Value-semantics wrapper around StateVector::apply.
StateVector apply_gate(StateVector state, const GateOp& gate);

struct MeasureAllOutcome {
  std::string bits;      // qubit 0 rightmost
  std::uint64_t basis;   // sampled basis-state index
};

/// Samples one full computational-basis measurement (probabilities |amp|^2)
/// and collapses the state to the observed basis state.
MeasureAllOutcome measure_all(StateVector& state, Rng& rng);

}  // namespace qcaas::qsim
