#pragma once

#include <cstdint>
#include <vector>

#include "qcaas/qsim/types.hpp"

namespace qcaas::qsim {

/// Quantum Fourier transform on the given qubits, qubits[0] least
/// significant: |x> -> (1/sqrt(Q)) * sum_y exp(2*pi*i*x*y/Q) |y>, Q = 2^m.
/// Built from H, ControlledPhase and Swap only. Qubits must be distinct.
std::vector<GateOp> qft_ops(const std::vector<std::uint32_t>& qubits);

/// Inverse transform: the reversed qft_ops sequence with negated phase
/// angles. For a single qubit this is exactly [H(q)].
std::vector<GateOp> inverse_qft_ops(const std::vector<std::uint32_t>& qubits);

}  // namespace qcaas::qsim
