#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

#include "hullcache/errors.hpp"
#include "hullcache/support.hpp"

namespace hullcache {

/// Rigid placement: world = rotation * local + translation.
struct Pose {
  Mat3 rotation;
  Vec3 translation;

  Vec3 apply(const Vec3& local) const { return rotation * local + translation; }
  /// Expresses a world direction in the local frame.
  Vec3 to_local_direction(const Vec3& world) const { return rotation.transposed() * world; }
  bool is_orthonormal(double tol = 1e-9) const;

  static Pose translated(const Vec3& t) { return {Mat3::identity(), t}; }
};

/// One CSO point with the world-space shape points and vertex ids it came from.
struct SimplexVertex {
  Vec3 point;  // on_a - on_b
  Vec3 on_a;
  Vec3 on_b;
  std::uint32_t index_a = 0;
  std::uint32_t index_b = 0;
};

struct Simplex {
  std::array<SimplexVertex, 4> vertices{};
  int size = 0;

  void push(const SimplexVertex& v) { vertices[static_cast<std::size_t>(size++)] = v; }
};

struct ClosestPoint {
  Vec3 closest;
  std::array<double, 4> barycentric{};  // over `reduced`, in its order
  Simplex reduced;
};

/// Signed-volumes distance sub-algorithm: closest point to the origin on the
/// simplex and the minimal sub-simplex supporting it. Affinely dependent
/// input is reduced, never rejected.
ClosestPoint signed_volumes_closest(const Simplex& simplex);

template <class T>
concept SupportMap = requires(const T& s, const Vec3& d) {
  { s.support(d) } -> std::same_as<SupportQueryResult>;
  { s.centroid() } -> std::convertible_to<Vec3>;
  { s.radius() } -> std::convertible_to<double>;
};

/// SupportBackend plus cached centroid and radius for GJK.
class GjkShape {
 public:
  GjkShape(const PreparedHull& hull, Method method)
      : backend_(hull, method), centroid_(hull.topology.centroid()), radius_(hull.topology.bounding_sphere.radius) {}

  SupportQueryResult support(const Vec3& d) const { return backend_.support(d); }
  Vec3 centroid() const { return centroid_; }
  double radius() const { return radius_; }
  Method method() const { return backend_.method(); }

 private:
  SupportBackend backend_;
  Vec3 centroid_;
  double radius_;
};

/// Support of A - B in world direction d. Throws InvalidArgument for zero d.
template <SupportMap A, SupportMap B>
SimplexVertex minkowski_support(const A& a, const Pose& pose_a, const B& b, const Pose& pose_b, const Vec3& d,
                                SupportStats* stats = nullptr) {
  const SupportQueryResult ra = a.support(pose_a.to_local_direction(d));
  const SupportQueryResult rb = b.support(pose_b.to_local_direction(-d));
  if (stats) {
    stats->vertex_visits += ra.stats.vertex_visits + rb.stats.vertex_visits;
    stats->face_visits += ra.stats.face_visits + rb.stats.face_visits;
    stats->dot_products_evaluated += ra.stats.dot_products_evaluated + rb.stats.dot_products_evaluated;
  }
  SimplexVertex v;
  v.on_a = pose_a.apply(ra.point);
  v.on_b = pose_b.apply(rb.point);
  v.point = v.on_a - v.on_b;
  v.index_a = ra.vertex_index;
  v.index_b = rb.vertex_index;
  return v;
}

enum class GjkStatus { Intersecting, Separated };

struct GjkResult {
  GjkStatus status = GjkStatus::Separated;
  double distance = 0.0;
  Vec3 witness_a;
  Vec3 witness_b;
  std::size_t iterations = 0;
  bool converged = true;
  Simplex simplex;
  SupportStats support_stats;  // summed over both shapes and all iterations
};

struct GjkOptions {
  double rel_tol = 1e-10;
  std::size_t max_iter = 128;
};

/// Per-iteration bounds: lower = v.w/|v| (never above the true distance),
/// upper = |v|.
struct GjkTrace {
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;
};

template <SupportMap A, SupportMap B>
GjkResult gjk_query(const A& a, const Pose& pose_a, const B& b, const Pose& pose_b, const GjkOptions& options = {},
                    GjkTrace* trace = nullptr) {
  if (!(options.rel_tol > 0.0)) throw InvalidArgument("gjk_query: rel_tol must be positive");
  if (options.max_iter == 0) throw InvalidArgument("gjk_query: max_iter must be positive");

  GjkResult result;
  const Vec3 ca = pose_a.apply(a.centroid());
  const Vec3 cb = pose_b.apply(b.centroid());
  const double scale = a.radius() + b.radius() + norm(ca - cb);
  const double touch2 = 1e-24 * scale * scale;

  Vec3 initial = ca - cb;
  if (!(norm2(initial) > touch2)) initial = {1.0, 0.0, 0.0};

  Simplex simplex;
  simplex.push(minkowski_support(a, pose_a, b, pose_b, -initial, &result.support_stats));
  ClosestPoint closest{simplex.vertices[0].point, {1.0, 0.0, 0.0, 0.0}, simplex};
  bool intersecting = false;
  bool converged = false;

  while (result.iterations < options.max_iter) {
    const Vec3 v = closest.closest;
    const double vv = norm2(v);
    if (vv <= touch2) {
      intersecting = true;
      converged = true;
      break;
    }
    ++result.iterations;
    const SimplexVertex w = minkowski_support(a, pose_a, b, pose_b, -v, &result.support_stats);
    const double vw = dot(v, w.point);
    if (trace) {
      trace->lower_bounds.push_back(vw / std::sqrt(vv));
      trace->upper_bounds.push_back(std::sqrt(vv));
    }
    if (vv - vw <= options.rel_tol * vv) {
      converged = true;
      break;
    }
    bool duplicate = false;
    for (int i = 0; i < closest.reduced.size; ++i) {
      duplicate = duplicate || closest.reduced.vertices[static_cast<std::size_t>(i)].point == w.point;
    }
    if (duplicate) {
      converged = true;
      break;
    }
    Simplex next = closest.reduced;
    next.push(w);
    ClosestPoint candidate = signed_volumes_closest(next);
    if (candidate.reduced.size == 4) {
      closest = candidate;
      intersecting = true;
      converged = true;
      break;
    }
    if (!(norm2(candidate.closest) < vv)) {
      // No numerical progress; the current estimate is final.
      converged = true;
      break;
    }
    closest = candidate;
  }

  result.converged = converged;
  result.simplex = closest.reduced;
  Vec3 wa, wb;
  for (int i = 0; i < closest.reduced.size; ++i) {
    const auto k = static_cast<std::size_t>(i);
    wa += closest.reduced.vertices[k].on_a * closest.barycentric[k];
    wb += closest.reduced.vertices[k].on_b * closest.barycentric[k];
  }
  result.witness_a = wa;
  result.witness_b = wb;
  if (intersecting) {
    result.status = GjkStatus::Intersecting;
    result.distance = 0.0;
  } else {
    result.status = GjkStatus::Separated;
    result.distance = norm(wa - wb);
  }
  return result;
}

}  // namespace hullcache
