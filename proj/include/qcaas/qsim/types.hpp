#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qcaas::qsim {

using Amplitude = std::complex<double>;

/// Dense statevector hard cap. Backends may advertise less, never more.
inline constexpr std::uint32_t kMaxQubits = 26;

// Gate set. Qubit indexing is little-endian throughout: qubit k corresponds
// to bit k of the basis-state index.

struct HGate {
  std::uint32_t target;
};

struct XGate {
  std::uint32_t target;
};

struct CPhaseGate {
  std::uint32_t control;
  std::uint32_t target;
  double theta;
};

struct SwapGate {
  std::uint32_t a;
  std::uint32_t b;
};

/// Permutation of the target subregister, applied on basis states where all
/// control qubits are 1. targets[j] carries bit j of the permuted value.
/// mapping must be a bijection on [0, 2^targets.size()).
struct CPermGate {
  std::vector<std::uint32_t> controls;
  std::vector<std::uint32_t> targets;
  std::vector<std::uint64_t> mapping;
};

/// Projective measurement of one qubit into one classical bit.
struct MeasureOp {
  std::uint32_t qubit;
  std::uint32_t clbit;
};

using GateOp = std::variant<HGate, XGate, CPhaseGate, SwapGate, CPermGate, MeasureOp>;

inline bool is_measure(const GateOp& op) {
  return std::holds_alternative<MeasureOp>(op);
}

struct Circuit {
  std::uint32_t num_qubits = 0;
  std::uint32_t num_clbits = 0;
  std::vector<GateOp> ops;
};

/// Aggregated measurement outcomes of one circuit execution.
/// Keys are classical bitstrings of length num_clbits, bit 0 rightmost.
struct ShotResult {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> counts;
};

/// Renders value as a bitstring of the given width, bit 0 rightmost.
std::string to_bitstring(std::uint64_t value, std::uint32_t width);

/// Parses a bitstring rendered by to_bitstring back into an integer.
std::uint64_t from_bitstring(const std::string& bits);

}  // namespace qcaas::qsim
