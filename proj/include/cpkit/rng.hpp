#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace cpkit {

// Counter-based generator in the SplitMix64 family: the state is a counter
// advanced by a fixed odd increment and each output is a bijective mix of
// it. Identical (seed, stream) pairs produce identical sequences on every
// platform, and distinct streams are independent for practical purposes,
// so work split across threads by stream cannot change results.
class StreamRng {
 public:
  StreamRng() : StreamRng(0, 0) {}

  StreamRng(std::uint64_t seed, std::uint64_t stream) : counter_(derive_seed(seed, stream)) {}

  /// Stable mixing of (seed, stream) into a starting counter; also used to
  /// derive per-scenario seeds from a base seed.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed + kIncrement) ^ mix(stream * kIncrement + 0x1F83D9ABFB41BD6Bull);
  }

  std::uint64_t next_u64() {
    counter_ += kIncrement;
    return mix(counter_);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi); lo == hi yields lo.
  double uniform(double lo, double hi) {
    if (!(lo <= hi)) {
      throw std::invalid_argument("uniform bounds must satisfy lo <= hi");
    }
    return lo + uniform01() * (hi - lo);
  }

  /// Uniform integer in [0, n).
  std::uint64_t pick_index(std::uint64_t n) {
    if (n == 0) {
      throw std::invalid_argument("pick_index requires n > 0");
    }
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Gaussian via Box-Muller; consumes exactly two uniforms per call.
  double normal(double mean, double stddev) {
    if (!(stddev >= 0.0)) {
      throw std::invalid_argument("normal requires stddev >= 0");
    }
    const double u1 = 1.0 - uniform01();  // in (0, 1], keeps the log finite
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  bool bernoulli(double probability) {
    if (!(probability >= 0.0 && probability <= 1.0)) {
      throw std::invalid_argument("bernoulli probability must be in [0, 1]");
    }
    return uniform01() < probability;
  }

 private:
  static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t counter_;
};

}  // namespace cpkit
