#pragma once

#include <cstdint>
#include <random>

#include "hmls/vec3.hpp"

namespace hmls {

/// Seeded generator with explicit transforms, so streams are reproducible
/// bit-for-bit across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// uniform in [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// standard normal via Box-Muller
  double normal() {
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// uniform direction: normalized Gaussian triple
  Vec3 unit_vector() {
    while (true) {
      const Vec3 g{normal(), normal(), normal()};
      const double len = norm(g);
      if (len > 1e-12) return g / len;
    }
  }

  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hmls
