#pragma once

#include <cstdint>

#include "hullcache/geometry.hpp"

namespace hullcache {

/// Angle stored as Q1.31 fraction of pi: raw / 2^31 * pi, spanning [-pi, pi).
/// Addition wraps modulo 2^32, which is exactly angular periodicity.
struct Q31Angle {
  std::int32_t raw = 0;

  static constexpr double kScale = 2147483648.0;  // 2^31

  constexpr double fraction() const { return static_cast<double>(raw) / kScale; }
  double radians() const;

  friend constexpr Q31Angle operator+(Q31Angle a, Q31Angle b) {
    return {static_cast<std::int32_t>(static_cast<std::uint32_t>(a.raw) + static_cast<std::uint32_t>(b.raw))};
  }
  friend constexpr Q31Angle operator-(Q31Angle a, Q31Angle b) {
    return {static_cast<std::int32_t>(static_cast<std::uint32_t>(a.raw) - static_cast<std::uint32_t>(b.raw))};
  }
  friend constexpr Q31Angle operator-(Q31Angle a) { return Q31Angle{} - a; }
  friend constexpr bool operator==(Q31Angle, Q31Angle) = default;
};

inline constexpr Q31Angle kQuarterTurn{0x40000000};  // pi/2

/// Wraps theta into [-pi, pi) and rounds to the nearest Q1.31 step.
/// Throws InvalidArgument for non-finite input.
Q31Angle q31_encode_angle(double theta);

/// sin(v*pi) ~= 4 (v - sign(v) v^2), v = raw / 2^31.
constexpr double approx_sin(Q31Angle x) {
  const double v = x.fraction();
  return v >= 0.0 ? 4.0 * (v - v * v) : 4.0 * (v + v * v);
}

constexpr double approx_cos(Q31Angle x) { return approx_sin(x + kQuarterTurn); }

struct SphericalNormal {
  Q31Angle azimuth;    // about +Z from +X
  Q31Angle elevation;  // from the XY plane
};

/// Throws InvalidArgument unless |n| = 1 within 1e-6.
SphericalNormal encode_normal(const Vec3& n);

/// Approximate decode via approx_sin/approx_cos; not exactly unit length.
constexpr Vec3 decode_normal(Q31Angle azimuth, Q31Angle elevation) {
  const double ce = approx_cos(elevation);
  return {ce * approx_cos(azimuth), ce * approx_sin(azimuth), approx_sin(elevation)};
}
constexpr Vec3 decode_normal(SphericalNormal s) { return decode_normal(s.azimuth, s.elevation); }

/// Exact (libm) decode, used as the reference when measuring fidelity.
Vec3 decode_normal_exact(SphericalNormal s);

/// Truncated Maclaurin series of sin with `terms` >= 1 terms.
double taylor_sin(double x, int terms);

}  // namespace hullcache
