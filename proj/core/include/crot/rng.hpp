#pragma once

#include <cstdint>
#include <limits>

namespace crot {

/// Counter-based 64-bit generator. Output k of stream s under seed K is
///
///   mix64(key(K, s) + (k + 1) * 0x9E3779B97F4A7C15)
///
/// where mix64 is the SplitMix64 finalizer and key(K, s) =
/// mix64(mix64(K) ^ mix64(s + 0xD1B54A32D192ED03)). Monte Carlo trial i uses
/// stream i, so trials are reproducible independently of execution order.
///
/// Uniform doubles and normals are derived here (not via <random>
/// distributions) so sampled values are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (one variate per call).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  /// Fresh generator on another stream of the same seed.
  CounterRng substream(std::uint64_t stream) const { return CounterRng(seed_, stream); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace crot
