#include <algorithm>
#include <cmath>
#include <sstream>

#include "hullcache/hull.hpp"
#include "hullcache/kernels.hpp"

namespace hullcache {

std::size_t HullTopology::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adjacency) twice += a.size();
  return twice / 2;
}

Vec3 HullTopology::centroid() const {
  Vec3 c;
  for (const Vec3& v : vertices) c += v;
  return vertices.empty() ? c : c * (1.0 / static_cast<double>(vertices.size()));
}

BoundingSphere bounding_sphere(const std::vector<Vec3>& vertices) {
  if (vertices.empty()) return {};
  auto farthest_from = [&](const Vec3& p) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const double d = norm2(vertices[i] - p);
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };
  const Vec3 y = vertices[farthest_from(vertices[0])];
  const Vec3 z = vertices[farthest_from(y)];
  BoundingSphere s{(y + z) * 0.5, 0.5 * norm(z - y)};

  // Second pass: grow toward any point left outside.
  for (const Vec3& p : vertices) {
    const double d = norm(p - s.center);
    if (d > s.radius) {
      const double grown = 0.5 * (s.radius + d);
      s.center += (p - s.center) * ((grown - s.radius) / d);
      s.radius = grown;
    }
  }
  // Rounding in the growth step can leave a point a few ulps outside.
  double r2 = 0.0;
  for (const Vec3& p : vertices) r2 = std::max(r2, norm2(p - s.center));
  s.radius = std::max(s.radius, std::sqrt(r2));
  return s;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_topology(const HullTopology& hull) {
  ValidationReport report;
  auto add = [&](std::string name, bool passed, std::string detail = {}) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };
  const std::size_t nv = hull.vertices.size();
  const std::size_t nf = hull.faces.size();

  const bool shaped = hull.adjacency.size() == nv && hull.face_normals.size() == nf && hull.face_adjacency.size() == nf;
  add("structure", shaped, shaped ? "" : "per-vertex/per-face arrays have mismatched lengths");
  if (!shaped) return report;

  bool indices_ok = true;
  for (const auto& f : hull.faces) {
    for (auto v : f) indices_ok = indices_ok && v < nv;
  }
  for (const auto& a : hull.adjacency) {
    for (auto v : a) indices_ok = indices_ok && v < nv;
  }
  for (const auto& fa : hull.face_adjacency) {
    for (auto g : fa) indices_ok = indices_ok && g < nf;
  }
  add("indices", indices_ok, indices_ok ? "" : "index out of range");
  if (!indices_ok) return report;

  add("capacity", nv >= 4 && nv <= kMaxIndexed, std::to_string(nv) + " vertices");

  const std::size_t ne = hull.edge_count();
  const long euler = static_cast<long>(nv) - static_cast<long>(ne) + static_cast<long>(nf);
  add("euler", euler == 2, "V-E+F = " + std::to_string(euler));
  add("edge_count", 2 * ne == 3 * nf, "E=" + std::to_string(ne) + " F=" + std::to_string(nf));

  double worst_unit = 0.0;
  for (const Vec3& n : hull.face_normals) worst_unit = std::max(worst_unit, std::abs(norm(n) - 1.0));
  add("normal_unit", worst_unit <= 1e-9, "max | |n|-1 | = " + std::to_string(worst_unit));

  const double radius = hull.bounding_sphere.radius;
  const double excess = kernels::max_plane_excess(hull);
  {
    std::ostringstream d;
    d << "max (w - centroid).n = " << excess << ", tolerance " << 1e-7 * radius;
    add("normal_outward", excess <= 1e-7 * radius, d.str());
  }

  bool symmetric = true;
  std::string sym_detail;
  for (std::size_t i = 0; i < nv && symmetric; ++i) {
    for (auto j : hull.adjacency[i]) {
      const auto& back = hull.adjacency[j];
      if (j == i || std::find(back.begin(), back.end(), static_cast<std::uint32_t>(i)) == back.end()) {
        symmetric = false;
        sym_detail = "edge " + std::to_string(i) + "->" + std::to_string(j) + " has no reverse";
        break;
      }
    }
  }
  add("adjacency_symmetric", symmetric, sym_detail);

  bool faces_ok = true;
  std::string face_detail;
  for (std::size_t f = 0; f < nf && faces_ok; ++f) {
    const auto& fv = hull.faces[f];
    const auto& fa = hull.face_adjacency[f];
    if (fa[0] == fa[1] || fa[1] == fa[2] || fa[0] == fa[2]) {
      faces_ok = false;
      face_detail = "face " + std::to_string(f) + " has repeated neighbours";
      break;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& gv = hull.faces[fa[i]];
      const std::uint32_t a = fv[i], b = fv[(i + 1) % 3];
      const bool shares = std::count(gv.begin(), gv.end(), a) == 1 && std::count(gv.begin(), gv.end(), b) == 1;
      if (fa[i] == f || !shares) {
        faces_ok = false;
        face_detail = "face " + std::to_string(f) + " neighbour " + std::to_string(fa[i]) + " does not share edge";
        break;
      }
    }
  }
  add("face_adjacency", faces_ok, face_detail);

  double worst_out = 0.0;
  for (const Vec3& v : hull.vertices) worst_out = std::max(worst_out, norm(v - hull.bounding_sphere.center) - radius);
  add("inside_bounding_sphere", worst_out <= radius * 1e-9, "max excess " + std::to_string(worst_out));
  return report;
}

}  // namespace hullcache
