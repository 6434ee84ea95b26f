#include "qcaas/common/rng.hpp"

#include <limits>

#include "qcaas/common/error.hpp"

namespace qcaas {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::InvalidArgument, "Rng::below requires a nonzero bound");
  }
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t rem = (max % bound + 1) % bound;
  const std::uint64_t limit = max - rem;
  std::uint64_t x = next_u64();
  while (x > limit) {
    x = next_u64();
  }
  return x % bound;
}

}  // namespace qcaas
