#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hullcache/hull.hpp"
#include "hullcache/layouts.hpp"

namespace hullcache {

struct SupportStats {
  std::size_t vertex_visits = 0;
  std::size_t face_visits = 0;
  std::size_t dot_products_evaluated = 0;
};

struct SupportQueryResult {
  std::uint32_t vertex_index = 0;
  Vec3 point;
  double support_value = 0.0;  // dot(direction, point)
  SupportStats stats;
};

/// Accepted vertices (and faces, for the face backends) in climb order.
struct ClimbTrace {
  std::vector<std::uint32_t> vertices;
  std::vector<std::uint32_t> faces;
};

// All queries throw InvalidArgument for a zero or non-finite direction.
// Ties never move a climb: only strictly greater dot products are accepted.

/// Exhaustive scan, lowest index on ties. The oracle for every other backend.
SupportQueryResult support_naive(const HullTopology& hull, const Vec3& d);

SupportQueryResult support_hill_climb(const HullTopology& hull, const Vec3& d, std::size_t start,
                                      ClimbTrace* trace = nullptr);

/// Index-list baseline: hill climbing over the plain
/// adjacency lists from the six-entry warm start.
SupportQueryResult support_hill_climb(const HullTopology& hull, const WarmStartTable& warm, const Vec3& d,
                                      ClimbTrace* trace = nullptr);

SupportQueryResult support_internally_connected(const InternallyConnectedHull& ic, const Vec3& d,
                                                ClimbTrace* trace = nullptr);

/// Packed-pool climb from an explicit start vertex (phase 2 of the face backends).
SupportQueryResult climb_vertex_pool(const InternallyConnectedHull& ic, const Vec3& d, std::uint32_t start,
                                     ClimbTrace* trace = nullptr);

SupportQueryResult support_face_traversing(const FaceTraversingHull& ft, const Vec3& d, ClimbTrace* trace = nullptr);

SupportQueryResult support_spherical(const SphericalHull& se, const Vec3& d, ClimbTrace* trace = nullptr);

enum class Method { Naive, HillClimb, InternallyConnected, FaceTraversing, Spherical };

inline constexpr std::array<Method, 5> kAllMethods{Method::Naive, Method::HillClimb, Method::InternallyConnected,
                                                   Method::FaceTraversing, Method::Spherical};

/// CSV key: naive, hill-climb, internally-connected, face-traversing, spherical.
std::string_view method_key(Method m);
/// Throws InvalidArgument for an unknown key.
Method parse_method(std::string_view key);

/// A hull with every layout built, so any backend can be queried.
struct PreparedHull {
  HullTopology topology;
  WarmStartTable warm;
  InternallyConnectedHull ic;
  FaceTraversingHull ft;
  SphericalHull spherical;

  static PreparedHull build(HullTopology hull, double fill_radius_fraction = kDefaultFillRadiusFraction);
};

SupportQueryResult query_support(Method m, const PreparedHull& hull, const Vec3& d, ClimbTrace* trace = nullptr);

/// Runtime-selected support mapping over a PreparedHull; the handle GJK uses.
class SupportBackend {
 public:
  SupportBackend(const PreparedHull& hull, Method method) : hull_(&hull), method_(method) {}

  SupportQueryResult support(const Vec3& d) const { return query_support(method_, *hull_, d); }
  const HullTopology& topology() const { return hull_->topology; }
  Method method() const { return method_; }

 private:
  const PreparedHull* hull_;
  Method method_;
};

}  // namespace hullcache
