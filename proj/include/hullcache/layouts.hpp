#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hullcache/fxtrig.hpp"
#include "hullcache/hull.hpp"

namespace hullcache {

inline constexpr std::size_t kCacheLineBytes = 64;
inline constexpr std::uint16_t kEmptySlot = 0xFFFF;
inline constexpr std::size_t kBaseSlots = 19;
inline constexpr std::size_t kExtensionSlots = 15;
inline constexpr double kDefaultFillRadiusFraction = 0.2;

/// One vertex per cache line: position plus the first 19 neighbour ids.
/// Unused slots hold kEmptySlot and only ever trail the used ones.
struct alignas(kCacheLineBytes) PackedVertexRecord {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  std::array<std::uint16_t, kBaseSlots> neighbors;
  std::uint16_t extension = kEmptySlot;

  PackedVertexRecord() { neighbors.fill(kEmptySlot); }
  Vec3 position() const { return {x, y, z}; }
};

/// Overflow neighbours for high-degree vertices, chained through `next`.
struct alignas(32) ExtensionRecord {
  std::array<std::uint16_t, kExtensionSlots> neighbors;
  std::uint16_t next = kEmptySlot;

  ExtensionRecord() { neighbors.fill(kEmptySlot); }
};

struct alignas(32) PackedFaceRecord {
  double nx = 0.0;
  double ny = 0.0;
  double nz = 0.0;
  std::array<std::uint16_t, 3> neighbors{kEmptySlot, kEmptySlot, kEmptySlot};
  std::uint16_t anchor = kEmptySlot;

  Vec3 normal() const { return {nx, ny, nz}; }
};

/// Face record with the normal packed as two Q1.31 angles; four per line.
struct alignas(16) SphericalFaceRecord {
  Q31Angle azimuth;
  Q31Angle elevation;
  std::array<std::uint16_t, 3> neighbors{kEmptySlot, kEmptySlot, kEmptySlot};
  std::uint16_t anchor = kEmptySlot;

  Vec3 normal() const { return decode_normal(azimuth, elevation); }
};

static_assert(sizeof(PackedVertexRecord) == 64);
static_assert(offsetof(PackedVertexRecord, neighbors) == 24);
static_assert(offsetof(PackedVertexRecord, extension) == 62);
static_assert(sizeof(ExtensionRecord) == 32);
static_assert(offsetof(ExtensionRecord, next) == 30);
static_assert(sizeof(PackedFaceRecord) == 32);
static_assert(offsetof(PackedFaceRecord, neighbors) == 24);
static_assert(offsetof(PackedFaceRecord, anchor) == 30);
static_assert(sizeof(SphericalFaceRecord) == 16);
static_assert(offsetof(SphericalFaceRecord, neighbors) == 8);
static_assert(offsetof(SphericalFaceRecord, anchor) == 14);
static_assert(kCacheLineBytes % sizeof(ExtensionRecord) == 0 && kCacheLineBytes % sizeof(SphericalFaceRecord) == 0);

/// Slot order +X, -X, +Y, -Y, +Z, -Z.
struct WarmStartTable {
  std::array<std::uint32_t, 6> start_vertices{};
  std::array<std::uint32_t, 6> start_faces{};
};

/// Table slot for a query direction: dominant axis (lowest axis on ties),
/// positive side when that component is >= 0.
constexpr std::size_t warm_start_slot(const Vec3& d) {
  const double ax = d.x < 0 ? -d.x : d.x;
  const double ay = d.y < 0 ? -d.y : d.y;
  const double az = d.z < 0 ? -d.z : d.z;
  int axis = 0;
  double best = ax;
  if (ay > best) {
    axis = 1;
    best = ay;
  }
  if (az > best) axis = 2;
  return static_cast<std::size_t>(2 * axis + (d[axis] < 0.0 ? 1 : 0));
}

struct InternallyConnectedHull {
  std::vector<PackedVertexRecord> vertices;
  std::vector<ExtensionRecord> extensions;
  WarmStartTable warm;
  double fill_radius = 0.0;

  /// Base slots then extension chain, sentinels skipped.
  std::vector<std::uint16_t> neighbor_list(std::size_t vertex) const;
};

struct FaceTraversingHull {
  std::vector<PackedFaceRecord> faces;
  InternallyConnectedHull vertex_pool;
  WarmStartTable warm;
};

struct SphericalHull {
  std::vector<SphericalFaceRecord> faces;
  InternallyConnectedHull vertex_pool;
  WarmStartTable warm;
};

WarmStartTable compute_warm_starts(const HullTopology& hull);

/// Up to `count` non-neighbour vertices closest to the sphere of `radius`
/// around `vertex`, ranked by | |c - v| - radius |, ties by lower index.
std::vector<std::uint16_t> select_artificial_neighbors(const HullTopology& hull, std::size_t vertex,
                                                       std::size_t count, double radius);

/// Number of artificial slots a vertex of the given true degree receives:
/// the unused tail of its base record, or of its last extension.
constexpr std::size_t artificial_slot_budget(std::size_t true_degree) {
  if (true_degree <= kBaseSlots) return kBaseSlots - true_degree;
  const std::size_t rest = true_degree - kBaseSlots;
  const std::size_t ext = (rest + kExtensionSlots - 1) / kExtensionSlots;
  return ext * kExtensionSlots - rest;
}

InternallyConnectedHull build_internally_connected(const HullTopology& hull,
                                                   double fill_radius_fraction = kDefaultFillRadiusFraction);
FaceTraversingHull build_face_traversing(const HullTopology& hull,
                                         double fill_radius_fraction = kDefaultFillRadiusFraction);
SphericalHull build_spherical(const HullTopology& hull, double fill_radius_fraction = kDefaultFillRadiusFraction);

// Variants reusing an already built vertex pool for the exact final phase.
FaceTraversingHull build_face_traversing(const HullTopology& hull, InternallyConnectedHull vertex_pool);
SphericalHull build_spherical(const HullTopology& hull, InternallyConnectedHull vertex_pool);

/// Packs true neighbours plus an explicit artificial list into the pools.
/// Exposed so the serial and parallel neighbour selections can share it.
InternallyConnectedHull pack_vertices(const HullTopology& hull,
                                      const std::vector<std::vector<std::uint16_t>>& artificial, double fill_radius);

struct LayoutAudit {
  bool ok = true;
  std::string failure;
};

/// Checks the neighbour-superset, no-duplicate, no-self and acyclic-chain
/// invariants of a packed vertex pool against its source hull.
LayoutAudit audit_vertex_pool(const HullTopology& hull, const InternallyConnectedHull& ic);

}  // namespace hullcache
