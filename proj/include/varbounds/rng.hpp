#pragma once

#include <cstdint>

namespace varbounds {

/// SplitMix64. Every Monte Carlo draw in the library goes through this
/// generator so that results are bit-reproducible from the seed alone.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() noexcept { return 1.0 - uniform(); }

  /// Standard normal by Box-Muller; consumes two uniforms per call and
  /// discards the sine branch.
  double normal() noexcept;

  /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the
  /// Gamma(shape+1) * U^(1/shape) boost.
  double gamma(double shape) noexcept;

private:
  std::uint64_t state_;
};

} // namespace varbounds
