#include "hullcache/fxtrig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hullcache/errors.hpp"

namespace hullcache {

double Q31Angle::radians() const { return fraction() * std::numbers::pi; }

Q31Angle q31_encode_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("q31_encode_angle: non-finite angle");
  double v = theta / std::numbers::pi;
  v -= 2.0 * std::floor((v + 1.0) * 0.5);  // [-1, 1)
  const auto steps = static_cast<std::int64_t>(std::llround(v * Q31Angle::kScale));
  // +2^31 (v rounding up to 1) wraps to -2^31, the same angle.
  return {static_cast<std::int32_t>(static_cast<std::uint32_t>(steps))};
}

SphericalNormal encode_normal(const Vec3& n) {
  const double len = norm(n);
  if (!(std::abs(len - 1.0) <= 1e-6)) throw InvalidArgument("encode_normal: input is not a unit vector");
  const double z = std::clamp(n.z, -1.0, 1.0);
  SphericalNormal out;
  out.elevation = q31_encode_angle(std::asin(z));
  out.azimuth = std::abs(n.z) > 1.0 - 1e-12 ? Q31Angle{} : q31_encode_angle(std::atan2(n.y, n.x));
  return out;
}

Vec3 decode_normal_exact(SphericalNormal s) {
  const double az = s.azimuth.radians();
  const double el = s.elevation.radians();
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

double taylor_sin(double x, int terms) {
  if (terms < 1) throw InvalidArgument("taylor_sin: terms must be >= 1");
  double term = x;
  double sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= -x * x / static_cast<double>((2 * k + 2) * (2 * k + 3));
  }
  return sum;
}

}  // namespace hullcache
