#pragma once

#include <cstddef>
#include <cstdint>

namespace lmscreen {

/// Counter-based pseudo-random stream: draw n is SplitMix64's finalizer
/// applied to seed + (n + 1) * 0x9E3779B97F4A7C15. The stream depends only
/// on (seed, n), so it is identical on every platform and compiler.
///
/// Uniform doubles take the top 53 bits. Normal deviates use the cosine
/// branch of Box-Muller on two consecutive uniforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1).
  double uniform() noexcept;
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double normal() noexcept;
  /// Uniform integer in [0, n). Precondition: n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// FNV-1a over bytes; used to derive per-case seeds from ids.
std::uint64_t fnv1a(const void* data, std::size_t size) noexcept;

}  // namespace lmscreen
