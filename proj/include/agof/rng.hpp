#ifndef AGOF_RNG_HPP
#define AGOF_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace agof {

std::uint64_t splitmix64(std::uint64_t x);

/// Keyed stream derivation: the returned seed depends only on its arguments,
/// so work item (a, b) draws the same numbers regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic random stream. Variates are produced by explicit transforms
/// of the raw 64-bit output rather than <random> distributions, whose
/// algorithms differ between standard library implementations.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : engine_(splitmix64(key)) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Uniform integer in [0, n), unbiased.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace agof

#endif  // AGOF_RNG_HPP
