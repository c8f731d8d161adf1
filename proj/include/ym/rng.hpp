#pragma once

#include <cstdint>

namespace ym {

/// Counter-based uniform generator.
///
/// The i-th draw is a pure function of (seed, i): the counter is scrambled by
/// the SplitMix64 finalizer after mixing in a seed-derived key. Any partition
/// of the counter range across workers reproduces the same stream.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(mix(seed ^ kSeedSalt)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * kGamma);
  }

  /// Uniform double in the open interval (0, 1), 53 bits of resolution.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Sub-stream with an independent key, for nested sampling.
  constexpr CounterRng split(std::uint64_t stream) const noexcept {
    return CounterRng(mix(key_ ^ (stream * kGamma + kSeedSalt)), Raw{});
  }

 private:
  struct Raw {};
  constexpr CounterRng(std::uint64_t key, Raw) noexcept : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kSeedSalt = 0xD1B54A32D192ED03ull;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace ym
