#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcaas/common/rng.hpp"
#include "qcaas/qsim/types.hpp"

namespace qcaas::shor {

/// One continued-fraction convergent numerator/denominator of y/Q, reduced
/// to lowest terms. The denominator is the candidate multiplicative order.
struct PeriodCandidate {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  friend bool operator==(const PeriodCandidate&, const PeriodCandidate&) = default;
};

/// Uniform random base in [2, n-2]. Requires n >= 5. Deterministic in the
/// RNG state: the same seeded Rng yields the same base.
std::uint64_t generate_base(std::uint64_t n, Rng& rng);

/// Counting-register width used for order finding: 2 * ceil(log2 n).
/// Doubling the work width makes the phase grid fine enough for the
/// continued-fraction step to pin down any order below n.
std::uint32_t counting_qubits_for(std::uint64_t n);

/// Work-register width: ceil(log2 n) qubits hold residues mod n.
std::uint32_t work_qubits_for(std::uint64_t n);

/// Modular-exponentiation stage of the order-finding circuit for base a
/// mod n: counting register (qubits [0, n_count)) put into uniform
/// superposition, work register (qubits [n_count, n_count + m)) initialized
/// to |1> by an X, then one ControlledPermutation per counting qubit k
/// mapping x -> a^(2^k) * x mod n (identity on x >= n).
/// Requires gcd(a, n) == 1 and total width within the simulator cap.
qsim::Circuit build_modular_exponentiation_stage(std::uint64_t a, std::uint64_t n,
                                                 std::uint32_t n_count);

/// Appends the closing stage: inverse Fourier transform on the counting
/// register followed by Measure(k -> classical bit k) for each counting
/// qubit.
void append_inverse_qft_stage(qsim::Circuit& circuit, std::uint32_t n_count);

/// Complete order-finding circuit: both stages composed.
qsim::Circuit build_order_finding_circuit(std::uint64_t a, std::uint64_t n, std::uint32_t n_count);

/// Convergents of y/q with denominator below n, in order of increasing
/// denominator, each in lowest terms. Empty when y == 0. q must be a power
/// of two (the counting-register dimension), y < q.
std::vector<PeriodCandidate> continued_fractions(std::uint64_t y, std::uint64_t q, std::uint64_t n);

/// True iff a^r == 1 (mod n). Requires r >= 1, n >= 2.
bool verify_order(std::uint64_t a, std::uint64_t r, std::uint64_t n);

/// Walks the candidates of a measured phase y/q, repairing each failed
/// denominator r by testing multiples 2r, 3r, ... below n, and returns the
/// first verified order. nullopt when no candidate verifies (in particular
/// when y == 0).
std::optional<std::uint64_t> find_order(std::uint64_t a, std::uint64_t n, std::uint64_t y,
                                        std::uint64_t q);

/// Classical factor extraction from a verified order: nothing if r is odd
/// or a^(r/2) == +-1 (mod n); otherwise (gcd(a^(r/2)-1, n), gcd(a^(r/2)+1, n))
/// normalized so p <= q. A returned pair always satisfies p * q == n with
/// 1 < p <= q < n.
std::optional<std::pair<std::uint64_t, std::uint64_t>> extract_factors(std::uint64_t a,
                                                                       std::uint64_t r,
                                                                       std::uint64_t n);

struct FactorizationRequest {
  std::uint64_t n = 0;
  std::uint32_t max_attempts = 10;
  std::uint64_t shots_per_attempt = 1024;
  std::string backend_id;  // empty: submitter's default backend
  std::uint64_t seed = 0;
};

/// Per-attempt audit record. shots is 0 when no quantum job ran (lucky gcd).
struct AttemptRecord {
  std::uint32_t attempt = 0;
  std::uint64_t base = 0;
  std::uint64_t gcd = 1;
  std::optional<std::string> job_id;
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> modal_y;
  std::vector<PeriodCandidate> candidates;
  std::optional<std::uint64_t> order;
  std::string disposition;
};

struct FactorizationResult {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::uint32_t attempts_used = 0;
  std::uint64_t total_shots = 0;
  std::vector<AttemptRecord> trace;
};

nlohmann::json to_json(const PeriodCandidate& candidate);
nlohmann::json to_json(const AttemptRecord& record);
nlohmann::json to_json(const std::vector<AttemptRecord>& trace);
nlohmann::json to_json(const FactorizationResult& result);

}  // namespace qcaas::shor
