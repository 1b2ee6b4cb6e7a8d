#include "hullcache/layouts.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hullcache/errors.hpp"
#include "hullcache/kernels.hpp"

namespace hullcache {

std::vector<std::uint16_t> InternallyConnectedHull::neighbor_list(std::size_t vertex) const {
  std::vector<std::uint16_t> out;
  const PackedVertexRecord& rec = vertices[vertex];
  for (auto n : rec.neighbors) {
    if (n == kEmptySlot) break;
    out.push_back(n);
  }
  std::size_t guard = 0;
  for (auto e = rec.extension; e != kEmptySlot && guard <= extensions.size(); e = extensions[e].next, ++guard) {
    for (auto n : extensions[e].neighbors) {
      if (n == kEmptySlot) break;
      out.push_back(n);
    }
  }
  return out;
}

WarmStartTable compute_warm_starts(const HullTopology& hull) {
  WarmStartTable table;
  for (std::size_t slot = 0; slot < 6; ++slot) {
    const int axis = static_cast<int>(slot / 2);
    const double sign = slot % 2 == 0 ? 1.0 : -1.0;
    std::uint32_t best_v = 0;
    for (std::size_t i = 1; i < hull.vertices.size(); ++i) {
      if (sign * hull.vertices[i][axis] > sign * hull.vertices[best_v][axis]) best_v = static_cast<std::uint32_t>(i);
    }
    std::uint32_t best_f = 0;
    for (std::size_t f = 1; f < hull.face_normals.size(); ++f) {
      if (sign * hull.face_normals[f][axis] > sign * hull.face_normals[best_f][axis]) best_f = static_cast<std::uint32_t>(f);
    }
    table.start_vertices[slot] = best_v;
    table.start_faces[slot] = best_f;
  }
  return table;
}

std::vector<std::uint16_t> select_artificial_neighbors(const HullTopology& hull, std::size_t vertex,
                                                       std::size_t count, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("select_artificial_neighbors: radius must be positive");
  if (vertex >= hull.vertices.size()) throw InvalidArgument("select_artificial_neighbors: vertex out of range");
  if (count == 0) return {};
  const Vec3 origin = hull.vertices[vertex];
  const auto& true_nbrs = hull.adjacency[vertex];  // ascending

  struct Candidate {
    double score;
    std::uint32_t index;
    bool operator<(const Candidate& o) const { return score < o.score || (score == o.score && index < o.index); }
  };
  std::vector<Candidate> candidates;
  candidates.reserve(hull.vertices.size());
  auto next_true = true_nbrs.begin();
  for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
    while (next_true != true_nbrs.end() && *next_true < i) ++next_true;
    if (i == vertex || (next_true != true_nbrs.end() && *next_true == i)) continue;
    candidates.push_back({std::abs(norm(hull.vertices[i] - origin) - radius), static_cast<std::uint32_t>(i)});
  }
  const std::size_t take = std::min(count, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end());
  std::vector<std::uint16_t> out(take);
  for (std::size_t k = 0; k < take; ++k) out[k] = static_cast<std::uint16_t>(candidates[k].index);
  return out;
}

InternallyConnectedHull pack_vertices(const HullTopology& hull,
                                      const std::vector<std::vector<std::uint16_t>>& artificial, double fill_radius) {
  const std::size_t nv = hull.vertices.size();
  if (nv > kMaxIndexed) throw CapacityExceeded("vertex pool: " + std::to_string(nv) + " vertices exceeds 65535");
  InternallyConnectedHull ic;
  ic.fill_radius = fill_radius;
  ic.vertices.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    PackedVertexRecord& rec = ic.vertices[v];
    rec.x = hull.vertices[v].x;
    rec.y = hull.vertices[v].y;
    rec.z = hull.vertices[v].z;

    std::vector<std::uint16_t> all;
    all.reserve(hull.adjacency[v].size() + artificial[v].size());
    for (auto n : hull.adjacency[v]) all.push_back(static_cast<std::uint16_t>(n));
    all.insert(all.end(), artificial[v].begin(), artificial[v].end());

    const std::size_t in_base = std::min(all.size(), kBaseSlots);
    std::copy_n(all.begin(), in_base, rec.neighbors.begin());
    std::size_t previous = kMaxIndexed;  // none yet
    for (std::size_t pos = in_base; pos < all.size(); pos += kExtensionSlots) {
      if (ic.extensions.size() >= kMaxIndexed) throw CapacityExceeded("extension pool exceeds 65535 records");
      const auto id = static_cast<std::uint16_t>(ic.extensions.size());
      ic.extensions.emplace_back();
      if (previous == kMaxIndexed) {
        rec.extension = id;
      } else {
        ic.extensions[previous].next = id;
      }
      const std::size_t n = std::min(kExtensionSlots, all.size() - pos);
      std::copy_n(all.begin() + static_cast<std::ptrdiff_t>(pos), n, ic.extensions.back().neighbors.begin());
      previous = id;
    }
  }
  return ic;
}

InternallyConnectedHull build_internally_connected(const HullTopology& hull, double fill_radius_fraction) {
  if (!(fill_radius_fraction > 0.0 && fill_radius_fraction <= 1.0)) {
    throw InvalidArgument("fill_radius_fraction must be in (0, 1]");
  }
  if (hull.vertices.size() > kMaxIndexed) {
    throw CapacityExceeded("vertex pool: " + std::to_string(hull.vertices.size()) + " vertices exceeds 65535");
  }
  const double radius = fill_radius_fraction * hull.bounding_sphere.radius;
  InternallyConnectedHull ic = pack_vertices(hull, kernels::artificial_neighbor_table(hull, radius), radius);
  ic.warm = compute_warm_starts(hull);
  return ic;
}

namespace {

void check_face_capacity(const HullTopology& hull) {
  if (hull.faces.size() > kMaxIndexed) {
    throw CapacityExceeded("face pool: " + std::to_string(hull.faces.size()) + " faces exceeds 65535");
  }
}

std::uint16_t anchor_vertex(const HullTopology& hull, std::size_t f) {
  const auto& fv = hull.faces[f];
  const Vec3& n = hull.face_normals[f];
  std::uint32_t best = fv[0];
  double best_dot = dot(n, hull.vertices[best]);
  for (std::size_t i = 1; i < 3; ++i) {
    const double d = dot(n, hull.vertices[fv[i]]);
    if (d > best_dot || (d == best_dot && fv[i] < best)) {
      best_dot = d;
      best = fv[i];
    }
  }
  return static_cast<std::uint16_t>(best);
}

}  // namespace

FaceTraversingHull build_face_traversing(const HullTopology& hull, InternallyConnectedHull vertex_pool) {
  check_face_capacity(hull);
  FaceTraversingHull ft;
  ft.vertex_pool = std::move(vertex_pool);
  ft.warm = ft.vertex_pool.warm;
  ft.faces.resize(hull.faces.size());
  for (std::size_t f = 0; f < hull.faces.size(); ++f) {
    PackedFaceRecord& rec = ft.faces[f];
    rec.nx = hull.face_normals[f].x;
    rec.ny = hull.face_normals[f].y;
    rec.nz = hull.face_normals[f].z;
    for (std::size_t i = 0; i < 3; ++i) rec.neighbors[i] = static_cast<std::uint16_t>(hull.face_adjacency[f][i]);
    rec.anchor = anchor_vertex(hull, f);
  }
  return ft;
}

FaceTraversingHull build_face_traversing(const HullTopology& hull, double fill_radius_fraction) {
  check_face_capacity(hull);
  return build_face_traversing(hull, build_internally_connected(hull, fill_radius_fraction));
}

SphericalHull build_spherical(const HullTopology& hull, InternallyConnectedHull vertex_pool) {
  check_face_capacity(hull);
  SphericalHull sh;
  sh.vertex_pool = std::move(vertex_pool);
  sh.warm = sh.vertex_pool.warm;
  sh.faces.resize(hull.faces.size());
  for (std::size_t f = 0; f < hull.faces.size(); ++f) {
    SphericalFaceRecord& rec = sh.faces[f];
    const SphericalNormal s = encode_normal(hull.face_normals[f]);
    rec.azimuth = s.azimuth;
    rec.elevation = s.elevation;
    for (std::size_t i = 0; i < 3; ++i) rec.neighbors[i] = static_cast<std::uint16_t>(hull.face_adjacency[f][i]);
    rec.anchor = anchor_vertex(hull, f);
  }
  return sh;
}

SphericalHull build_spherical(const HullTopology& hull, double fill_radius_fraction) {
  check_face_capacity(hull);
  return build_spherical(hull, build_internally_connected(hull, fill_radius_fraction));
}

LayoutAudit audit_vertex_pool(const HullTopology& hull, const InternallyConnectedHull& ic) {
  auto fail = [](std::string why) { return LayoutAudit{false, std::move(why)}; };
  if (ic.vertices.size() != hull.vertices.size()) return fail("vertex pool length differs from hull");
  for (std::size_t v = 0; v < ic.vertices.size(); ++v) {
    const PackedVertexRecord& rec = ic.vertices[v];
    // Walk the chain with an explicit bound to detect cycles.
    std::size_t hops = 0;
    for (auto e = rec.extension; e != kEmptySlot; e = ic.extensions[e].next) {
      if (e >= ic.extensions.size()) return fail("vertex " + std::to_string(v) + ": extension index out of range");
      if (++hops > ic.extensions.size()) return fail("vertex " + std::to_string(v) + ": extension chain cycles");
    }
    const auto list = ic.neighbor_list(v);
    std::unordered_set<std::uint16_t> seen;
    for (auto n : list) {
      if (n == v) return fail("vertex " + std::to_string(v) + ": self reference");
      if (n >= hull.vertices.size()) return fail("vertex " + std::to_string(v) + ": neighbour out of range");
      if (!seen.insert(n).second) return fail("vertex " + std::to_string(v) + ": duplicate neighbour " + std::to_string(n));
    }
    for (auto n : hull.adjacency[v]) {
      if (!seen.count(static_cast<std::uint16_t>(n))) {
        return fail("vertex " + std::to_string(v) + ": true neighbour " + std::to_string(n) + " missing");
      }
    }
  }
  return {};
}

}  // namespace hullcache
