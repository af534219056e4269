#pragma once

#include <array>
#include <cstdint>

namespace ghostspec {

/// Seedable random stream with a fixed, platform-independent draw sequence.
///
/// Engine is xoshiro256++ seeded through splitmix64 from (seed, stream).
/// Distinct stream ids on the same seed give statistically independent
/// sequences, which is how the simulator hands disjoint event batches to
/// parallel workers. All distributions are implemented here rather than
/// taken from <random> because libstdc++/libc++ distributions are not
/// specified bit-for-bit.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 random bits.
  double uniform();

  /// Standard normal via the Marsaglia polar method (second deviate cached).
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// Exact Poisson deviate for any mean >= 0. Large means are drawn as a sum
  /// of independent chunks so no approximation enters.
  std::uint64_t poisson(double mean);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t poisson_small(double mean);

  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ghostspec
