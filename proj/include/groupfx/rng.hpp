#pragma once

#include <cmath>
#include <cstdint>

namespace groupfx {

/// Deterministic 64-bit generator (splitmix64, Steele et al. constants) with
/// Box-Muller Gaussian variates. The whole point of hand-rolling this is
/// reproducibility: the same seed gives the same stream on every platform,
/// so simulation outputs can be pinned in tests.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal; Box-Muller pairs, second variate cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - next_uniform();  // (0, 1], keeps log() finite
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;  // 2*pi
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Stateless scramble of a value (one splitmix64 output step).
  static uint64_t mix(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Independent substream for (seed, stream); stream 0 is reserved for
  /// design generation and streams 1.. for per-replication noise.
  static Rng stream(uint64_t seed, uint64_t stream_index) { return Rng(mix(seed ^ mix(stream_index))); }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace groupfx
