#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scootsim {

// Seeded random source with pinned distribution algorithms. The std::
// distribution classes are implementation-defined, which would make recorded
// traces depend on the standard library; mapping the raw mt19937_64 stream
// ourselves keeps identical seeds bit-reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller, cosine branch only so every call costs exactly two draws.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    return mean + stddev * (r * std::cos(two_pi * u2));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scootsim
