#include "hullcache/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "hullcache/errors.hpp"

namespace hullcache::kernels {

namespace {

// Exceptions must not escape an OpenMP region, so inputs are checked first.
void check_directions(std::span<const Vec3> directions) {
  for (const Vec3& d : directions) {
    const double m = std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    if (!(m > 1e-300) || !std::isfinite(m)) throw InvalidArgument("support_batch: direction must be finite and nonzero");
  }
}

void check_radius(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("artificial_neighbor_table: radius must be positive");
}

double face_excess(const HullTopology& hull, std::size_t f) {
  const auto& fv = hull.faces[f];
  const Vec3 c = (hull.vertices[fv[0]] + hull.vertices[fv[1]] + hull.vertices[fv[2]]) * (1.0 / 3.0);
  const Vec3& n = hull.face_normals[f];
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec3& w : hull.vertices) worst = std::max(worst, dot(w - c, n));
  return worst;
}

std::vector<std::uint16_t> artificial_for(const HullTopology& hull, std::size_t v, double radius) {
  return select_artificial_neighbors(hull, v, artificial_slot_budget(hull.adjacency[v].size()), radius);
}

}  // namespace

int thread_count() { return omp_get_max_threads(); }

double max_plane_excess(const HullTopology& hull) {
  const auto nf = static_cast<std::int64_t>(hull.faces.size());
  double worst = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t f = 0; f < nf; ++f) worst = std::max(worst, face_excess(hull, static_cast<std::size_t>(f)));
  return worst;
}

std::vector<std::vector<std::uint16_t>> artificial_neighbor_table(const HullTopology& hull, double radius) {
  check_radius(radius);
  const auto nv = static_cast<std::int64_t>(hull.vertices.size());
  std::vector<std::vector<std::uint16_t>> table(hull.vertices.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t v = 0; v < nv; ++v) {
    table[static_cast<std::size_t>(v)] = artificial_for(hull, static_cast<std::size_t>(v), radius);
  }
  return table;
}

std::vector<SupportQueryResult> support_batch(Method method, const PreparedHull& hull, std::span<const Vec3> directions) {
  check_directions(directions);
  const auto n = static_cast<std::int64_t>(directions.size());
  std::vector<SupportQueryResult> out(directions.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = query_support(method, hull, directions[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace serial {

double max_plane_excess(const HullTopology& hull) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < hull.faces.size(); ++f) worst = std::max(worst, face_excess(hull, f));
  return worst;
}

std::vector<std::vector<std::uint16_t>> artificial_neighbor_table(const HullTopology& hull, double radius) {
  std::vector<std::vector<std::uint16_t>> table(hull.vertices.size());
  for (std::size_t v = 0; v < hull.vertices.size(); ++v) table[v] = artificial_for(hull, v, radius);
  return table;
}

std::vector<SupportQueryResult> support_batch(Method method, const PreparedHull& hull, std::span<const Vec3> directions) {
  std::vector<SupportQueryResult> out;
  out.reserve(directions.size());
  for (const Vec3& d : directions) out.push_back(query_support(method, hull, d));
  return out;
}

}  // namespace serial

}  // namespace hullcache::kernels
