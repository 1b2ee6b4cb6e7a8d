#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "hullcache/geometry.hpp"

namespace hullcache {

// Explicit conversions keep sequences identical across standard libraries;
// std::uniform_real_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next() { return engine_(); }

  /// Uniform point on the unit sphere (Archimedes: z uniform, azimuth uniform).
  Vec3 unit_vector() {
    const double z = 2.0 * uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  /// Uniformly random rotation (axis uniform on the sphere, angle uniform).
  Mat3 rotation() {
    const Vec3 axis = unit_vector();
    return Mat3::rotation(axis, uniform(-std::numbers::pi, std::numbers::pi));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hullcache
