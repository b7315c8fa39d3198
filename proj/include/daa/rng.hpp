#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace daa {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic RNG. The mt19937_64 engine is pinned by the standard;
/// distributions are sampled by hand because the std ones are
/// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Box-Muller, one value per call (no cached second value, so the engine
  /// call count is a fixed function of the sample count).
  double gaussian(double mean, double sd) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Rejection-sampled truncation; falls back to clamping after a bounded
  /// number of attempts so the call always terminates.
  double gaussian_truncated(double mean, double sd, double lo, double hi) {
    for (int i = 0; i < 64; ++i) {
      const double x = gaussian(mean, sd);
      if (x >= lo && x <= hi) return x;
    }
    const double x = gaussian(mean, sd);
    return x < lo ? lo : (x > hi ? hi : x);
  }

  /// Single draw clipped to [lo, hi]; mass concentrates at the bounds.
  double gaussian_clipped(double mean, double sd, double lo, double hi) {
    const double x = gaussian(mean, sd);
    return x < lo ? lo : (x > hi ? hi : x);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace daa
