#pragma once

#include <cstdint>
#include <optional>
#include <utility>

namespace qcaas::shor {

/// Greatest common divisor, Euclid via std::gcd. gcd(a, 0) == a;
/// gcd(0, 0) is rejected (InvalidArgument).
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// (a * b) mod m without overflow.
std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m);

/// (base ^ exp) mod m by repeated squaring. m must be nonzero.
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic trial-division primality test. Intended for desk-scale n
/// (the platform caps inputs below 2^20).
bool is_prime(std::uint64_t n);

/// If n == b^e for some b >= 2, e >= 2, returns (b, e) with the smallest b.
std::optional<std::pair<std::uint64_t, std::uint64_t>> perfect_power(std::uint64_t n);

/// Smallest power of two >= n is 2^ceil_log2(n). n must be >= 1.
std::uint32_t ceil_log2(std::uint64_t n);

}  // namespace qcaas::shor
