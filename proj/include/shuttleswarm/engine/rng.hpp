#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace shuttleswarm::engine {

// Deterministic random source. mt19937_64's output sequence is pinned by the
// standard; the distribution helpers below are hand-rolled because the
// std::*_distribution classes are implementation-defined and would break
// byte-identical reports across toolchains.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform integer in [0, n), exact (rejection sampling).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + uniform01() * (b - a); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace shuttleswarm::engine
