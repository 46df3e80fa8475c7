#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace netloc {

/// Seedable 64-bit generator with platform-stable output.
///
/// The engine is `std::mt19937_64`, whose sequence is fixed by the standard.
/// Standard distributions are implementation-defined, so every draw goes
/// through the helpers below instead:
///   - uniform01: top 53 bits of one engine output scaled by 2^-53.
///   - uniform_index(bound): rejection sampling on one engine output
///     (threshold = 2^64 mod bound), then `r % bound`.
/// Datasets generated from the same seed are therefore byte-identical on
/// every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer on [0, bound). `bound` must be nonzero.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform integer on [lo, hi] inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_index(hi - lo + 1);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace netloc
