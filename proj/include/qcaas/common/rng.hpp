#pragma once

#include <cstdint>
#include <random>

namespace qcaas {

/// SplitMix64 mixing step. Used to spread small seeds and to derive
/// independent child stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic seedable PRNG with independent child streams.
///
/// Identical seeds produce identical draw sequences on every platform:
/// doubles are built from the top 53 bits of the engine output and bounded
/// draws use rejection sampling, so no implementation-defined distribution
/// code is involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed)
      : seed_(seed), engine_(splitmix64(seed)) {}

  /// Seed this instance was constructed with.
  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Child stream independent of this instance's draw position.
  /// Deterministic in (seed, stream) only.
  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 1)));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace qcaas
