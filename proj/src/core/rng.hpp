#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace bkz {

/// Seeded 64-bit generator with splittable streams. Every draw routine is
/// implemented here rather than through <random> distributions so sequences
/// are identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent generator for sub-stream `stream` of this generator's seed.
  Rng split(std::uint64_t stream) const { return Rng(seed_, mix(stream_ + 1) ^ stream); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n), unbiased.
  std::size_t uniform_index(std::size_t n);
  /// Uniform double in [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();
  double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }
  /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t mix(std::uint64_t z);
  /// Fresh seed from the operating system's entropy source.
  static std::uint64_t entropy_seed();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bkz
