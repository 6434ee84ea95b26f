#include "qcaas/shor/shor.hpp"

#include <algorithm>

#include "qcaas/common/error.hpp"
#include "qcaas/qsim/qft.hpp"
#include "qcaas/shor/arith.hpp"

namespace qcaas::shor {

std::uint64_t generate_base(std::uint64_t n, Rng& rng) {
  if (n < 5) {
    throw Error(ErrorCode::InvalidArgument, "base generation needs n >= 5");
  }
  // Uniform over [2, n-2]; 0, 1 and n-1 never help.
  return 2 + rng.below(n - 3);
}

std::uint32_t counting_qubits_for(std::uint64_t n) {
  if (n < 3) {
    throw Error(ErrorCode::InvalidArgument, "order finding needs n >= 3");
  }
  return 2 * ceil_log2(n);
}

std::uint32_t work_qubits_for(std::uint64_t n) {
  if (n < 3) {
    throw Error(ErrorCode::InvalidArgument, "order finding needs n >= 3");
  }
  return ceil_log2(n);
}

qsim::Circuit build_modular_exponentiation_stage(std::uint64_t a, std::uint64_t n,
                                                 std::uint32_t n_count) {
  if (n < 3) {
    throw Error(ErrorCode::InvalidArgument, "order finding needs n >= 3");
  }
  if (n_count < 1) {
    throw Error(ErrorCode::InvalidArgument, "counting register needs at least one qubit");
  }
  if (gcd(a % n, n) != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "base " + std::to_string(a) + " is not coprime to " + std::to_string(n));
  }
  const std::uint32_t work = work_qubits_for(n);
  const std::uint32_t total = n_count + work;
  if (total > qsim::kMaxQubits) {
    throw Error(ErrorCode::CapacityExceeded,
                "order-finding circuit needs " + std::to_string(total) + " qubits, cap is " +
                    std::to_string(qsim::kMaxQubits));
  }

  qsim::Circuit circuit;
  circuit.num_qubits = total;
  circuit.num_clbits = n_count;

  for (std::uint32_t k = 0; k < n_count; ++k) {
    circuit.ops.emplace_back(qsim::HGate{k});
  }
  // Work register starts in |1>, the identity element for repeated
  // multiplication by a.
  circuit.ops.emplace_back(qsim::XGate{n_count});

  std::vector<std::uint32_t> targets(work);
  for (std::uint32_t j = 0; j < work; ++j) {
    targets[j] = n_count + j;
  }

  const std::uint64_t span = std::uint64_t{1} << work;
  std::uint64_t multiplier = a % n;  // a^(2^k) mod n, squared per step
  for (std::uint32_t k = 0; k < n_count; ++k) {
    qsim::CPermGate gate;
    gate.controls = {k};
    gate.targets = targets;
    gate.mapping.resize(span);
    for (std::uint64_t x = 0; x < span; ++x) {
      gate.mapping[x] = x < n ? mod_mul(multiplier, x, n) : x;
    }
    circuit.ops.emplace_back(std::move(gate));
    multiplier = mod_mul(multiplier, multiplier, n);
  }
  return circuit;
}

void append_inverse_qft_stage(qsim::Circuit& circuit, std::uint32_t n_count) {
  if (circuit.num_qubits < n_count || n_count < 1) {
    throw Error(ErrorCode::InvalidArgument, "counting register wider than the circuit");
  }
  std::vector<std::uint32_t> counting(n_count);
  for (std::uint32_t k = 0; k < n_count; ++k) {
    counting[k] = k;
  }
  for (qsim::GateOp& op : qsim::inverse_qft_ops(counting)) {
    circuit.ops.emplace_back(std::move(op));
  }
  for (std::uint32_t k = 0; k < n_count; ++k) {
    circuit.ops.emplace_back(qsim::MeasureOp{k, k});
  }
}

qsim::Circuit build_order_finding_circuit(std::uint64_t a, std::uint64_t n, std::uint32_t n_count) {
  qsim::Circuit circuit = build_modular_exponentiation_stage(a, n, n_count);
  append_inverse_qft_stage(circuit, n_count);
  return circuit;
}

std::vector<PeriodCandidate> continued_fractions(std::uint64_t y, std::uint64_t q, std::uint64_t n) {
  if (q < 2 || (q & (q - 1)) != 0) {
    throw Error(ErrorCode::InvalidArgument, "phase denominator must be a power of two");
  }
  if (y >= q) {
    throw Error(ErrorCode::InvalidArgument, "measured phase must satisfy y < q");
  }
  std::vector<PeriodCandidate> candidates;
  if (y == 0) {
    return candidates;
  }

  // Convergent recurrence h_i = t_i*h_{i-1} + h_{i-2} (same for k_i) over
  // the Euclidean term expansion of y/q. Convergents arrive with
  // nondecreasing denominators, already in lowest terms.
  std::uint64_t num = y;
  std::uint64_t den = q;
  std::uint64_t h_prev = 1, h_prev2 = 0;
  std::uint64_t k_prev = 0, k_prev2 = 1;
  while (den != 0) {
    const std::uint64_t term = num / den;
    const std::uint64_t rem = num % den;
    const std::uint64_t h = term * h_prev + h_prev2;
    const std::uint64_t k = term * k_prev + k_prev2;
    if (k >= n) {
      break;
    }
    candidates.push_back(PeriodCandidate{h, k});
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    num = den;
    den = rem;
  }
  return candidates;
}

bool verify_order(std::uint64_t a, std::uint64_t r, std::uint64_t n) {
  if (r < 1 || n < 2) {
    throw Error(ErrorCode::InvalidArgument, "verify_order needs r >= 1 and n >= 2");
  }
  return mod_pow(a, r, n) == 1;
}

std::optional<std::uint64_t> find_order(std::uint64_t a, std::uint64_t n, std::uint64_t y,
                                        std::uint64_t q) {
  for (const PeriodCandidate& candidate : continued_fractions(y, q, n)) {
    if (candidate.denominator == 0) {
      continue;
    }
    // Repair: a convergent denominator may be a divisor of the true order;
    // its small multiples below n recover it.
    for (std::uint64_t r = candidate.denominator; r < n; r += candidate.denominator) {
      if (verify_order(a, r, n)) {
        return r;
      }
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> extract_factors(std::uint64_t a,
                                                                       std::uint64_t r,
                                                                       std::uint64_t n) {
  if (n < 3 || r < 1) {
    throw Error(ErrorCode::InvalidArgument, "factor extraction needs n >= 3 and r >= 1");
  }
  if (!verify_order(a, r, n)) {
    throw Error(ErrorCode::InvalidArgument,
                std::to_string(r) + " is not the multiplicative order of " + std::to_string(a) +
                    " mod " + std::to_string(n));
  }
  if (r % 2 != 0) {
    return std::nullopt;
  }
  const std::uint64_t x = mod_pow(a, r / 2, n);
  if (x <= 1 || x == n - 1) {
    // Trivial square root of 1; this base cannot split n.
    return std::nullopt;
  }
  const std::uint64_t p = gcd(x - 1, n);
  const std::uint64_t q = gcd(x + 1, n);
  if (p <= 1 || p >= n || q <= 1 || q >= n || p * q != n) {
    return std::nullopt;
  }
  return std::make_pair(std::min(p, q), std::max(p, q));
}

nlohmann::json to_json(const PeriodCandidate& candidate) {
  return nlohmann::json{{"s", candidate.numerator}, {"r", candidate.denominator}};
}

nlohmann::json to_json(const AttemptRecord& record) {
  nlohmann::json j{
      {"attempt", record.attempt},
      {"base", record.base},
      {"gcd", record.gcd},
      {"shots", record.shots},
      {"disposition", record.disposition},
  };
  if (record.job_id) {
    j["job_id"] = *record.job_id;
  }
  if (record.modal_y) {
    j["modal_y"] = *record.modal_y;
  }
  nlohmann::json candidates = nlohmann::json::array();
  for (const PeriodCandidate& c : record.candidates) {
    candidates.push_back(to_json(c));
  }
  j["candidates"] = std::move(candidates);
  if (record.order) {
    j["order"] = *record.order;
  }
  return j;
}

nlohmann::json to_json(const std::vector<AttemptRecord>& trace) {
  nlohmann::json j = nlohmann::json::array();
  for (const AttemptRecord& record : trace) {
    j.push_back(to_json(record));
  }
  return j;
}

nlohmann::json to_json(const FactorizationResult& result) {
  return nlohmann::json{
      {"p", result.p},
      {"q", result.q},
      {"attempts_used", result.attempts_used},
      {"total_shots", result.total_shots},
      {"trace", to_json(result.trace)},
  };
}

}  // namespace qcaas::shor
