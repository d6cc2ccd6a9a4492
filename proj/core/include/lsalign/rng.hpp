#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lsalign::rng {

/// SplitMix64 mixing step; full-period over 64-bit states.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Small sequential generator for places where a stream is natural
/// (the synthetic-corpus generator). Not for cryptographic use.
struct SplitMix {
  std::uint64_t state = 0;

  explicit SplitMix(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n). Modulo bias is irrelevant at the scales used here.
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Uniform in [0, 1) addressed purely by (seed, counter); identical results
/// regardless of evaluation order or thread count.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Standard normal deviate addressed by (seed, counter), via Box-Muller.
inline double counter_gaussian(std::uint64_t seed, std::uint64_t counter) {
  const double u1 = 1.0 - counter_uniform(seed, 2 * counter);      // (0, 1]
  const double u2 = counter_uniform(seed, 2 * counter + 1);        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lsalign::rng
