#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hullcache/hull.hpp"
#include "hullcache/support.hpp"

// Data-parallel kernels. Each has an OpenMP version (top level) and a serial
// reference in `serial::`; the two must agree bit-for-bit.
namespace hullcache::kernels {

/// max over faces f and vertices w of (w - centroid(f)) . normal(f).
double max_plane_excess(const HullTopology& hull);

/// Artificial neighbour list for every vertex, sized by artificial_slot_budget.
std::vector<std::vector<std::uint16_t>> artificial_neighbor_table(const HullTopology& hull, double radius);

/// One support query per direction.
std::vector<SupportQueryResult> support_batch(Method method, const PreparedHull& hull, std::span<const Vec3> directions);

/// Number of OpenMP threads the parallel kernels will use.
int thread_count();

namespace serial {

double max_plane_excess(const HullTopology& hull);
std::vector<std::vector<std::uint16_t>> artificial_neighbor_table(const HullTopology& hull, double radius);
std::vector<SupportQueryResult> support_batch(Method method, const PreparedHull& hull, std::span<const Vec3> directions);

}  // namespace serial

}  // namespace hullcache::kernels
