#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hullcache/geometry.hpp"

namespace hullcache {

/// Largest vertex or face count addressable with 16-bit indices; 0xFFFF is
/// the empty-slot sentinel.
inline constexpr std::size_t kMaxIndexed = 65535;

struct PointSet {
  std::vector<Vec3> points;
  std::string source_label;
};

struct BoundingSphere {
  Vec3 center;
  double radius = 0.0;
};

using FaceIndices = std::array<std::uint32_t, 3>;

/// Closed, triangulated convex hull. Faces are counter-clockwise seen from
/// outside; face_adjacency[f][i] is the face across edge (v[i], v[i+1]).
struct HullTopology {
  std::vector<Vec3> vertices;
  std::vector<std::vector<std::uint32_t>> adjacency;  // ascending vertex ids
  std::vector<FaceIndices> faces;
  std::vector<Vec3> face_normals;
  std::vector<FaceIndices> face_adjacency;
  BoundingSphere bounding_sphere;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
  std::size_t edge_count() const;
  Vec3 centroid() const;
};

// Point sources.
PointSet sample_sphere(std::size_t n, std::uint64_t seed);
PointSet load_mesh(const std::filesystem::path& path);

/// Quickhull. Throws DegenerateGeometry for flat/collinear/coincident input
/// and CapacityExceeded above kMaxIndexed hull vertices.
HullTopology build_hull(const PointSet& points);

/// Ritter two-pass approximation, radius finally grown to the farthest vertex.
BoundingSphere bounding_sphere(const std::vector<Vec3>& vertices);
inline BoundingSphere bounding_sphere(const HullTopology& hull) { return bounding_sphere(hull.vertices); }

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
};

/// Read-only audit of every HullTopology invariant. Check names:
/// capacity, euler, edge_count, normal_unit, normal_outward,
/// adjacency_symmetric, face_adjacency, inside_bounding_sphere.
ValidationReport validate_topology(const HullTopology& hull);

}  // namespace hullcache
