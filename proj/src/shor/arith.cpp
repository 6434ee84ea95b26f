#include "qcaas/shor/arith.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "qcaas/common/error.hpp"

namespace qcaas::shor {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  if (a == 0 && b == 0) {
    throw Error(ErrorCode::InvalidArgument, "gcd(0, 0) is undefined");
  }
  return std::gcd(a, b);
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  if (m == 0) {
    throw Error(ErrorCode::InvalidArgument, "modulus must be nonzero");
  }
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 0) {
    throw Error(ErrorCode::InvalidArgument, "modulus must be nonzero");
  }
  if (m == 1) {
    return 0;
  }
  std::uint64_t result = 1;
  std::uint64_t acc = base % m;
  while (exp > 0) {
    if (exp & 1ull) {
      result = mod_mul(result, acc, m);
    }
    acc = mod_mul(acc, acc, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) {
    return false;
  }
  if (n % 2 == 0) {
    return n == 2;
  }
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> perfect_power(std::uint64_t n) {
  if (n < 4) {
    return std::nullopt;
  }
  const std::uint32_t max_exp = std::bit_width(n) - 1;  // 2^e <= n
  // Smallest base wins, so scan from the largest exponent down.
  for (std::uint32_t e = max_exp; e >= 2; --e) {
    const double guess = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(e));
    const auto lo = static_cast<std::uint64_t>(guess) - 1;
    for (std::uint64_t b = std::max<std::uint64_t>(2, lo); b <= lo + 3; ++b) {
      std::uint64_t acc = 1;
      bool overflow = false;
      for (std::uint32_t i = 0; i < e; ++i) {
        if (acc > n / b) {
          overflow = true;
          break;
        }
        acc *= b;
      }
      if (!overflow && acc == n) {
        return std::make_pair(b, static_cast<std::uint64_t>(e));
      }
    }
  }
  return std::nullopt;
}

std::uint32_t ceil_log2(std::uint64_t n) {
  if (n < 1) {
    throw Error(ErrorCode::InvalidArgument, "ceil_log2 needs n >= 1");
  }
  if (n == 1) {
    return 0;
  }
  return static_cast<std::uint32_t>(std::bit_width(n - 1));
}

}  // namespace qcaas::shor
