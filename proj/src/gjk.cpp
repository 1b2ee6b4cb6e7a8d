#include "hullcache/gjk.hpp"

#include <algorithm>
#include <limits>

namespace hullcache {

bool Pose::is_orthonormal(double tol) const {
  const Mat3 p = rotation.transposed() * rotation;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(p(i, j) - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return true;
}

namespace {

// Sub-simplex of the caller's points: `index` into the input, weights alongside.
struct Sub {
  std::array<int, 4> index{};
  std::array<double, 4> weight{};
  int size = 0;
  Vec3 closest;
};

bool same_sign(double a, double b) { return (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0); }

class SignedVolumes {
 public:
  explicit SignedVolumes(const Simplex& s) {
    double m = 0.0;
    for (int i = 0; i < s.size; ++i) {
      pts_[static_cast<std::size_t>(i)] = s.vertices[static_cast<std::size_t>(i)].point;
      m = std::max(m, norm2(pts_[static_cast<std::size_t>(i)]));
    }
    scale2_ = std::max(m, std::numeric_limits<double>::min());
  }

  Sub point(int i) const {
    Sub r;
    r.index[0] = i;
    r.weight[0] = 1.0;
    r.size = 1;
    r.closest = p(i);
    return r;
  }

  Sub segment(int i0, int i1) const {
    const Vec3 s1 = p(i0), s2 = p(i1);
    const Vec3 t = s2 - s1;
    if (norm2(t) <= 1e-20 * scale2_) return nearer(point(i0), point(i1));
    // Origin projected onto the line, then 1-D signed lengths along the
    // dominant axis of t.
    const Vec3 p0 = s1 + t * (-dot(s1, t) / norm2(t));
    int axis = 0;
    for (int k = 1; k < 3; ++k) {
      if (std::abs(t[k]) > std::abs(t[axis])) axis = k;
    }
    const double mu = s1[axis] - s2[axis];
    const double c1 = p0[axis] - s2[axis];
    const double c2 = s1[axis] - p0[axis];
    if (same_sign(mu, c1) && same_sign(mu, c2)) {
      Sub r;
      r.index = {i0, i1, 0, 0};
      r.weight = {c1 / mu, c2 / mu, 0.0, 0.0};
      r.size = 2;
      r.closest = s1 * r.weight[0] + s2 * r.weight[1];
      return r;
    }
    return same_sign(mu, c1) ? point(i0) : point(i1);
  }

  Sub triangle(int i0, int i1, int i2) const {
    const Vec3 s1 = p(i0), s2 = p(i1), s3 = p(i2);
    const Vec3 n = cross(s2 - s1, s3 - s1);
    const double nn = norm2(n);
    if (nn <= 1e-20 * scale2_ * scale2_) {
      return nearer(nearer(segment(i0, i1), segment(i1, i2)), segment(i0, i2));
    }
    const Vec3 p0 = n * (dot(s1, n) / nn);
    // Signed areas after dropping the axis of largest |n|.
    int drop = 0;
    for (int k = 1; k < 3; ++k) {
      if (std::abs(n[k]) > std::abs(n[drop])) drop = k;
    }
    const int ax = (drop + 1) % 3, ay = (drop + 2) % 3;
    auto area = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
      return (b[ax] - a[ax]) * (c[ay] - a[ay]) - (b[ay] - a[ay]) * (c[ax] - a[ax]);
    };
    const double mu = area(s1, s2, s3);
    const std::array<double, 3> c{area(p0, s2, s3), area(s1, p0, s3), area(s1, s2, p0)};
    if (same_sign(mu, c[0]) && same_sign(mu, c[1]) && same_sign(mu, c[2])) {
      Sub r;
      r.index = {i0, i1, i2, 0};
      r.weight = {c[0] / mu, c[1] / mu, c[2] / mu, 0.0};
      r.size = 3;
      r.closest = s1 * r.weight[0] + s2 * r.weight[1] + s3 * r.weight[2];
      return r;
    }
    const std::array<std::array<int, 2>, 3> opposite{{{i1, i2}, {i0, i2}, {i0, i1}}};
    Sub best;
    bool have = false;
    for (std::size_t j = 0; j < 3; ++j) {
      if (same_sign(mu, c[j])) continue;
      Sub candidate = segment(opposite[j][0], opposite[j][1]);
      best = have ? nearer(best, candidate) : candidate;
      have = true;
    }
    return best;
  }

  Sub tetrahedron() const {
    const Vec3 s1 = p(0), s2 = p(1), s3 = p(2), s4 = p(3);
    const Vec3 o{};
    auto volume = [](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
      return dot(b - a, cross(c - a, d - a));
    };
    const std::array<double, 4> c{volume(o, s2, s3, s4), volume(s1, o, s3, s4), volume(s1, s2, o, s4),
                                  volume(s1, s2, s3, o)};
    const double mu = c[0] + c[1] + c[2] + c[3];
    if (mu * mu <= 1e-20 * scale2_ * scale2_ * scale2_) {
      return nearer(nearer(triangle(0, 1, 2), triangle(0, 1, 3)), nearer(triangle(0, 2, 3), triangle(1, 2, 3)));
    }
    if (same_sign(mu, c[0]) && same_sign(mu, c[1]) && same_sign(mu, c[2]) && same_sign(mu, c[3])) {
      Sub r;
      r.index = {0, 1, 2, 3};
      r.weight = {c[0] / mu, c[1] / mu, c[2] / mu, c[3] / mu};
      r.size = 4;
      r.closest = {};
      return r;
    }
    const std::array<std::array<int, 3>, 4> opposite{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};
    Sub best;
    bool have = false;
    for (std::size_t j = 0; j < 4; ++j) {
      if (same_sign(mu, c[j])) continue;
      Sub candidate = triangle(opposite[j][0], opposite[j][1], opposite[j][2]);
      best = have ? nearer(best, candidate) : candidate;
      have = true;
    }
    return best;
  }

 private:
  Vec3 p(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  static Sub nearer(const Sub& a, const Sub& b) { return norm2(b.closest) < norm2(a.closest) ? b : a; }

  std::array<Vec3, 4> pts_{};
  double scale2_ = 0.0;
};

}  // namespace

ClosestPoint signed_volumes_closest(const Simplex& simplex) {
  if (simplex.size < 1 || simplex.size > 4) throw InvalidArgument("signed_volumes_closest: simplex needs 1-4 points");
  const SignedVolumes sv(simplex);
  Sub sub;
  switch (simplex.size) {
    case 1: sub = sv.point(0); break;
    case 2: sub = sv.segment(0, 1); break;
    case 3: sub = sv.triangle(0, 1, 2); break;
    default: sub = sv.tetrahedron(); break;
  }
  ClosestPoint out;
  out.closest = sub.closest;
  // Keep the caller's point order inside the reduced simplex.
  std::array<int, 4> order = sub.index;
  std::array<double, 4> weights = sub.weight;
  for (int i = 0; i < sub.size; ++i) {
    for (int j = i + 1; j < sub.size; ++j) {
      if (order[static_cast<std::size_t>(j)] < order[static_cast<std::size_t>(i)]) {
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        std::swap(weights[static_cast<std::size_t>(i)], weights[static_cast<std::size_t>(j)]);
      }
    }
  }
  for (int i = 0; i < sub.size; ++i) {
    out.reduced.push(simplex.vertices[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    out.barycentric[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace hullcache
