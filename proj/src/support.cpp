#include "hullcache/support.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hullcache/errors.hpp"

namespace hullcache {

namespace {

void check_direction(const Vec3& d) {
  const double m = std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
  if (!(m > 1e-300) || !std::isfinite(m)) throw InvalidArgument("support query: direction must be finite and nonzero");
}

SupportQueryResult finish(std::uint32_t v, const Vec3& p, double value, const SupportStats& stats) {
  return {v, p, value, stats};
}

// Scans one packed slot array; stops at the first sentinel.
template <std::size_t N>
inline void scan_slots(const std::array<std::uint16_t, N>& slots, const std::vector<PackedVertexRecord>& pool,
                       const Vec3& d, std::uint16_t& best, double& best_value, std::size_t& dots, bool& tie) {
  for (const std::uint16_t n : slots) {
    if (n == kEmptySlot) break;
    const double value = dot(d, pool[n].position());
    ++dots;
    tie |= value == best_value;
    if (value > best_value) {
      best_value = value;
      best = n;
    }
  }
}

// Climbs stop at the first of several exactly tied maxima. The tied maxima
// span a face of the hull, so walking equal-valued neighbours from there and
// keeping the lowest index reproduces support_naive's choice.
template <class ForEachNeighbor>
std::uint32_t lowest_tied(std::uint32_t start, double value, const Vec3& d, ForEachNeighbor&& for_each_neighbor,
                          std::size_t& dots) {
  std::vector<std::uint32_t> stack{start};
  std::vector<std::uint32_t> seen{start};
  std::uint32_t lowest = start;
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    for_each_neighbor(v, [&](std::uint32_t n, const Vec3& p) {
      ++dots;
      if (dot(d, p) != value || std::find(seen.begin(), seen.end(), n) != seen.end()) return;
      seen.push_back(n);
      stack.push_back(n);
      lowest = std::min(lowest, n);
    });
  }
  return lowest;
}

template <class FacePool>
std::uint32_t climb_faces(const FacePool& faces, std::uint32_t start, const Vec3& d, SupportStats& stats,
                          ClimbTrace* trace) {
  std::uint32_t current = start;
  double current_value = dot(d, faces[current].normal());
  ++stats.dot_products_evaluated;
  for (;;) {
    ++stats.face_visits;
    if (trace) trace->faces.push_back(current);
    std::uint32_t next = current;
    double next_value = current_value;
    for (const std::uint16_t g : faces[current].neighbors) {
      const double value = dot(d, faces[g].normal());
      ++stats.dot_products_evaluated;
      if (value > next_value) {
        next_value = value;
        next = g;
      }
    }
    if (next == current) return current;
    current = next;
    current_value = next_value;
  }
}

}  // namespace

SupportQueryResult support_naive(const HullTopology& hull, const Vec3& d) {
  check_direction(d);
  std::uint32_t best = 0;
  double best_value = dot(d, hull.vertices[0]);
  for (std::size_t i = 1; i < hull.vertices.size(); ++i) {
    const double value = dot(d, hull.vertices[i]);
    if (value > best_value) {
      best_value = value;
      best = static_cast<std::uint32_t>(i);
    }
  }
  SupportStats stats;
  stats.vertex_visits = hull.vertices.size();
  stats.dot_products_evaluated = hull.vertices.size();
  return finish(best, hull.vertices[best], best_value, stats);
}

SupportQueryResult support_hill_climb(const HullTopology& hull, const Vec3& d, std::size_t start, ClimbTrace* trace) {
  check_direction(d);
  if (start >= hull.vertices.size()) throw InvalidArgument("support_hill_climb: start vertex out of range");
  SupportStats stats;
  auto current = static_cast<std::uint32_t>(start);
  double current_value = dot(d, hull.vertices[current]);
  ++stats.dot_products_evaluated;
  bool tie = false;
  for (;;) {
    ++stats.vertex_visits;
    if (trace) trace->vertices.push_back(current);
    std::uint32_t next = current;
    double next_value = current_value;
    tie = false;
    for (const std::uint32_t n : hull.adjacency[current]) {
      const double value = dot(d, hull.vertices[n]);
      ++stats.dot_products_evaluated;
      tie |= value == next_value;
      if (value > next_value) {
        next_value = value;
        next = n;
      }
    }
    if (next == current) break;
    current = next;
    current_value = next_value;
  }
  if (tie) {
    current = lowest_tied(
        current, current_value, d,
        [&](std::uint32_t v, auto&& visit) {
          for (const std::uint32_t n : hull.adjacency[v]) visit(n, hull.vertices[n]);
        },
        stats.dot_products_evaluated);
  }
  return finish(current, hull.vertices[current], current_value, stats);
}

SupportQueryResult support_hill_climb(const HullTopology& hull, const WarmStartTable& warm, const Vec3& d,
                                      ClimbTrace* trace) {
  check_direction(d);
  return support_hill_climb(hull, d, warm.start_vertices[warm_start_slot(d)], trace);
}

SupportQueryResult climb_vertex_pool(const InternallyConnectedHull& ic, const Vec3& d, std::uint32_t start,
                                     ClimbTrace* trace) {
  SupportStats stats;
  const auto& pool = ic.vertices;
  auto current = static_cast<std::uint16_t>(start);
  double current_value = dot(d, pool[current].position());
  ++stats.dot_products_evaluated;
  bool tie = false;
  for (;;) {
    ++stats.vertex_visits;
    if (trace) trace->vertices.push_back(current);
    std::uint16_t next = current;
    double next_value = current_value;
    tie = false;
    const PackedVertexRecord& rec = pool[current];
    scan_slots(rec.neighbors, pool, d, next, next_value, stats.dot_products_evaluated, tie);
    for (std::uint16_t e = rec.extension; e != kEmptySlot; e = ic.extensions[e].next) {
      scan_slots(ic.extensions[e].neighbors, pool, d, next, next_value, stats.dot_products_evaluated, tie);
    }
    if (next == current) break;
    current = next;
    current_value = next_value;
  }
  std::uint32_t result = current;
  if (tie) {
    result = lowest_tied(
        current, current_value, d,
        [&](std::uint32_t v, auto&& visit) {
          for (const std::uint16_t n : ic.neighbor_list(v)) visit(n, pool[n].position());
        },
        stats.dot_products_evaluated);
  }
  return finish(result, pool[result].position(), current_value, stats);
}

SupportQueryResult support_internally_connected(const InternallyConnectedHull& ic, const Vec3& d, ClimbTrace* trace) {
  check_direction(d);
  return climb_vertex_pool(ic, d, ic.warm.start_vertices[warm_start_slot(d)], trace);
}

SupportQueryResult support_face_traversing(const FaceTraversingHull& ft, const Vec3& d, ClimbTrace* trace) {
  check_direction(d);
  SupportStats face_stats;
  const std::uint32_t face = climb_faces(ft.faces, ft.warm.start_faces[warm_start_slot(d)], d, face_stats, trace);
  SupportQueryResult r = climb_vertex_pool(ft.vertex_pool, d, ft.faces[face].anchor, trace);
  r.stats.face_visits = face_stats.face_visits;
  r.stats.dot_products_evaluated += face_stats.dot_products_evaluated;
  return r;
}

SupportQueryResult support_spherical(const SphericalHull& se, const Vec3& d, ClimbTrace* trace) {
  check_direction(d);
  SupportStats face_stats;
  const std::uint32_t face = climb_faces(se.faces, se.warm.start_faces[warm_start_slot(d)], d, face_stats, trace);
  SupportQueryResult r = climb_vertex_pool(se.vertex_pool, d, se.faces[face].anchor, trace);
  r.stats.face_visits = face_stats.face_visits;
  r.stats.dot_products_evaluated += face_stats.dot_products_evaluated;
  return r;
}

std::string_view method_key(Method m) {
  switch (m) {
    case Method::Naive: return "naive";
    case Method::HillClimb: return "hill-climb";
    case Method::InternallyConnected: return "internally-connected";
    case Method::FaceTraversing: return "face-traversing";
    case Method::Spherical: return "spherical";
  }
  return "unknown";
}

Method parse_method(std::string_view key) {
  for (Method m : kAllMethods) {
    if (method_key(m) == key) return m;
  }
  throw InvalidArgument("unknown support method '" + std::string(key) + "'");
}

PreparedHull PreparedHull::build(HullTopology hull, double fill_radius_fraction) {
  PreparedHull p;
  p.topology = std::move(hull);
  p.ic = build_internally_connected(p.topology, fill_radius_fraction);
  p.warm = p.ic.warm;
  p.ft = build_face_traversing(p.topology, p.ic);
  p.spherical = build_spherical(p.topology, p.ic);
  return p;
}

SupportQueryResult query_support(Method m, const PreparedHull& hull, const Vec3& d, ClimbTrace* trace) {
  switch (m) {
    case Method::Naive: return support_naive(hull.topology, d);
    case Method::HillClimb: return support_hill_climb(hull.topology, hull.warm, d, trace);
    case Method::InternallyConnected: return support_internally_connected(hull.ic, d, trace);
    case Method::FaceTraversing: return support_face_traversing(hull.ft, d, trace);
    case Method::Spherical: return support_spherical(hull.spherical, d, trace);
  }
  throw InvalidArgument("query_support: unknown method");
}

}  // namespace hullcache
