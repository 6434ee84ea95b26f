#pragma once

#include <cstdint>

#include "qcaas/qsim/statevector.hpp"
#include "qcaas/qsim/types.hpp"

namespace qcaas::qsim {

/// Structural validation of a circuit. Throws MalformedCircuit with one
/// diagnostic per problem in details (all problems are collected, not just
/// the first). Checks, per op and with op indices in the messages:
///   - register widths: 1 <= num_qubits <= kMaxQubits
///   - qubit and classical bit indices in range
///   - distinct qubits within a gate, bijective permutation mappings,
///     finite phase angles
///   - each classical bit written by at most one Measure
///   - measure-last discipline: no later op may act on a measured qubit
void validate_circuit(const Circuit& circuit);

/// Applies the unitary ops of a validated circuit in order, skipping
/// measures. Useful for inspecting pre-measurement amplitudes.
StateVector run_unitary_prefix(const Circuit& circuit);

/// Executes the circuit: simulates the unitary prefix once, then samples
/// `shots` outcomes of the measured qubits. Requires at least one Measure op
/// (NothingToSample otherwise) and shots >= 1. Sampling is driven by a
/// deterministic PRNG; identical (circuit, shots, seed) triples produce
/// identical counts.
ShotResult run_circuit(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed);

}  // namespace qcaas::qsim
