#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "hullcache/errors.hpp"
#include "hullcache/hull.hpp"

namespace hullcache {

namespace {

struct Face {
  std::array<int, 3> v{};
  std::array<int, 3> nbr{-1, -1, -1};  // nbr[i] lies across edge (v[i], v[i+1])
  Vec3 normal;
  double offset = 0.0;
  std::vector<int> outside;
  bool alive = true;
  bool visible = false;
};

class Quickhull {
 public:
  explicit Quickhull(const std::vector<Vec3>& pts) : pts_(pts) {}

  HullTopology run();

 private:
  double distance(const Face& f, int p) const { return dot(f.normal, pts_[static_cast<size_t>(p)]) - f.offset; }
  double distance(const Face& f, const Vec3& p) const { return dot(f.normal, p) - f.offset; }

  int add_face(int a, int b, int c);
  void initial_simplex();
  void assign(const std::vector<int>& candidates, const std::vector<int>& targets);
  void add_point(int face_id);
  HullTopology extract() const;

  const std::vector<Vec3>& pts_;
  double eps_ = 0.0;
  std::vector<Face> faces_;
  std::vector<int> pending_;
};

int Quickhull::add_face(int a, int b, int c) {
  Face f;
  f.v = {a, b, c};
  const Vec3& pa = pts_[static_cast<size_t>(a)];
  const Vec3 n = cross(pts_[static_cast<size_t>(b)] - pa, pts_[static_cast<size_t>(c)] - pa);
  const double len = norm(n);
  f.normal = len > 0.0 ? n * (1.0 / len) : Vec3{};
  f.offset = dot(f.normal, pa);
  faces_.push_back(std::move(f));
  return static_cast<int>(faces_.size() - 1);
}

void Quickhull::initial_simplex() {
  const std::size_t n = pts_.size();
  Vec3 lo = pts_[0], hi = pts_[0];
  for (const Vec3& p : pts_) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double diagonal = norm(hi - lo);
  if (!(diagonal > 0.0)) throw DegenerateGeometry("build_hull: all points coincide");
  eps_ = 1e-10 * diagonal;

  // Axis extremes, lowest index on ties.
  std::array<int, 6> extremes{};
  for (int axis = 0; axis < 3; ++axis) {
    int imin = 0, imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (pts_[i][axis] < pts_[static_cast<size_t>(imin)][axis]) imin = static_cast<int>(i);
      if (pts_[i][axis] > pts_[static_cast<size_t>(imax)][axis]) imax = static_cast<int>(i);
    }
    extremes[static_cast<size_t>(2 * axis)] = imin;
    extremes[static_cast<size_t>(2 * axis + 1)] = imax;
  }
  int i0 = extremes[0], i1 = extremes[1];
  double best = -1.0;
  for (int a : extremes) {
    for (int b : extremes) {
      const double d = norm2(pts_[static_cast<size_t>(a)] - pts_[static_cast<size_t>(b)]);
      if (d > best) {
        best = d;
        i0 = a;
        i1 = b;
      }
    }
  }
  if (std::sqrt(best) <= eps_) throw DegenerateGeometry("build_hull: all points coincide");

  const Vec3 p0 = pts_[static_cast<size_t>(i0)];
  const Vec3 axis = normalized(pts_[static_cast<size_t>(i1)] - p0);
  int i2 = -1;
  best = eps_;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 r = pts_[i] - p0;
    const double d = norm(r - axis * dot(r, axis));
    if (d > best) {
      best = d;
      i2 = static_cast<int>(i);
    }
  }
  if (i2 < 0) throw DegenerateGeometry("build_hull: points are collinear");

  const Vec3 plane_n = normalized(cross(pts_[static_cast<size_t>(i1)] - p0, pts_[static_cast<size_t>(i2)] - p0));
  int i3 = -1;
  best = eps_;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(dot(plane_n, pts_[i] - p0));
    if (d > best) {
      best = d;
      i3 = static_cast<int>(i);
    }
  }
  if (i3 < 0) throw DegenerateGeometry("build_hull: points are coplanar");

  if (dot(plane_n, pts_[static_cast<size_t>(i3)] - p0) > 0.0) std::swap(i1, i2);
  // i3 now lies below (i0, i1, i2).
  const int f0 = add_face(i0, i1, i2);
  const int f1 = add_face(i0, i3, i1);
  const int f2 = add_face(i1, i3, i2);
  const int f3 = add_face(i2, i3, i0);
  std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
  auto key = [](int a, int b) { return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b); };
  for (int f : {f0, f1, f2, f3}) {
    for (int i = 0; i < 3; ++i) edges[key(faces_[static_cast<size_t>(f)].v[static_cast<size_t>(i)],
                                          faces_[static_cast<size_t>(f)].v[static_cast<size_t>((i + 1) % 3)])] = {f, i};
  }
  for (int f : {f0, f1, f2, f3}) {
    Face& face = faces_[static_cast<size_t>(f)];
    for (int i = 0; i < 3; ++i) {
      face.nbr[static_cast<size_t>(i)] = edges.at(key(face.v[static_cast<size_t>((i + 1) % 3)], face.v[static_cast<size_t>(i)])).first;
    }
  }

  std::vector<int> candidates;
  candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int ii = static_cast<int>(i);
    if (ii != i0 && ii != i1 && ii != i2 && ii != i3) candidates.push_back(ii);
  }
  assign(candidates, {f0, f1, f2, f3});
}

void Quickhull::assign(const std::vector<int>& candidates, const std::vector<int>& targets) {
  for (int p : candidates) {
    int best_face = -1;
    double best = eps_;
    for (int f : targets) {
      const double d = distance(faces_[static_cast<size_t>(f)], p);
      if (d > best) {
        best = d;
        best_face = f;
      }
    }
    if (best_face >= 0) faces_[static_cast<size_t>(best_face)].outside.push_back(p);
  }
  for (int f : targets) {
    if (!faces_[static_cast<size_t>(f)].outside.empty()) pending_.push_back(f);
  }
}

void Quickhull::add_point(int face_id) {
  const Face& seed = faces_[static_cast<size_t>(face_id)];
  int eye = seed.outside.front();
  double best = distance(seed, eye);
  for (int p : seed.outside) {
    const double d = distance(seed, p);
    if (d > best || (d == best && p < eye)) {
      best = d;
      eye = p;
    }
  }
  const Vec3 eye_pt = pts_[static_cast<size_t>(eye)];

  std::vector<int> visible{face_id};
  faces_[static_cast<size_t>(face_id)].visible = true;
  std::vector<std::pair<int, int>> horizon;  // (visible face, edge slot)
  for (std::size_t k = 0; k < visible.size(); ++k) {
    const int f = visible[k];
    for (int i = 0; i < 3; ++i) {
      const int g = faces_[static_cast<size_t>(f)].nbr[static_cast<size_t>(i)];
      Face& gf = faces_[static_cast<size_t>(g)];
      if (gf.visible) continue;
      if (distance(gf, eye_pt) > eps_) {
        gf.visible = true;
        visible.push_back(g);
      }
    }
  }
  for (int f : visible) {
    for (int i = 0; i < 3; ++i) {
      if (!faces_[static_cast<size_t>(faces_[static_cast<size_t>(f)].nbr[static_cast<size_t>(i)])].visible) horizon.emplace_back(f, i);
    }
  }

  std::unordered_map<int, int> starting_at;
  std::unordered_map<int, int> ending_at;
  std::vector<int> created;
  created.reserve(horizon.size());
  for (auto [f, i] : horizon) {
    const int a = faces_[static_cast<size_t>(f)].v[static_cast<size_t>(i)];
    const int b = faces_[static_cast<size_t>(f)].v[static_cast<size_t>((i + 1) % 3)];
    const int g = faces_[static_cast<size_t>(f)].nbr[static_cast<size_t>(i)];
    const int nf = add_face(a, b, eye);
    created.push_back(nf);
    faces_[static_cast<size_t>(nf)].nbr[0] = g;
    Face& gf = faces_[static_cast<size_t>(g)];
    for (int j = 0; j < 3; ++j) {
      if (gf.v[static_cast<size_t>(j)] == b && gf.v[static_cast<size_t>((j + 1) % 3)] == a) gf.nbr[static_cast<size_t>(j)] = nf;
    }
    if (!starting_at.emplace(a, nf).second || !ending_at.emplace(b, nf).second) {
      throw DegenerateGeometry("build_hull: non-manifold horizon (numerically degenerate input)");
    }
  }
  for (int nf : created) {
    Face& face = faces_[static_cast<size_t>(nf)];
    auto next = starting_at.find(face.v[1]);
    auto prev = ending_at.find(face.v[0]);
    if (next == starting_at.end() || prev == ending_at.end()) {
      throw DegenerateGeometry("build_hull: open horizon (numerically degenerate input)");
    }
    face.nbr[1] = next->second;  // edge (b, eye)
    face.nbr[2] = prev->second;  // edge (eye, a)
  }

  std::vector<int> orphans;
  for (int f : visible) {
    Face& face = faces_[static_cast<size_t>(f)];
    face.alive = false;
    for (int p : face.outside) {
      if (p != eye) orphans.push_back(p);
    }
    face.outside.clear();
    face.outside.shrink_to_fit();
  }
  assign(orphans, created);
}

HullTopology Quickhull::extract() const {
  std::vector<int> live;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (faces_[f].alive) live.push_back(static_cast<int>(f));
  }
  std::vector<int> vertex_map(pts_.size(), -1);
  for (int f : live) {
    for (int v : faces_[static_cast<size_t>(f)].v) vertex_map[static_cast<size_t>(v)] = 0;
  }
  HullTopology hull;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (vertex_map[i] == 0) {
      vertex_map[i] = static_cast<int>(hull.vertices.size());
      hull.vertices.push_back(pts_[i]);
    }
  }
  if (hull.vertices.size() > kMaxIndexed) {
    throw CapacityExceeded("build_hull: hull has " + std::to_string(hull.vertices.size()) +
                           " vertices, limit is " + std::to_string(kMaxIndexed));
  }
  std::vector<int> face_map(faces_.size(), -1);
  for (std::size_t k = 0; k < live.size(); ++k) face_map[static_cast<size_t>(live[k])] = static_cast<int>(k);

  hull.faces.reserve(live.size());
  hull.face_adjacency.reserve(live.size());
  for (int f : live) {
    const Face& face = faces_[static_cast<size_t>(f)];
    FaceIndices verts{}, nbrs{};
    for (std::size_t i = 0; i < 3; ++i) {
      verts[i] = static_cast<std::uint32_t>(vertex_map[static_cast<size_t>(face.v[i])]);
      nbrs[i] = static_cast<std::uint32_t>(face_map[static_cast<size_t>(face.nbr[i])]);
    }
    hull.faces.push_back(verts);
    hull.face_adjacency.push_back(nbrs);
  }

  hull.adjacency.assign(hull.vertices.size(), {});
  for (const auto& f : hull.faces) {
    for (std::size_t i = 0; i < 3; ++i) hull.adjacency[f[i]].push_back(f[(i + 1) % 3]);
  }
  for (auto& a : hull.adjacency) std::sort(a.begin(), a.end());

  // Normals from final coordinates; coplanar fans are merged onto one
  // area-weighted normal.
  const std::size_t nf = hull.faces.size();
  std::vector<Vec3> area_normals(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& v = hull.faces[f];
    area_normals[f] = cross(hull.vertices[v[1]] - hull.vertices[v[0]], hull.vertices[v[2]] - hull.vertices[v[0]]);
  }
  std::vector<std::size_t> group(nf);
  std::iota(group.begin(), group.end(), std::size_t{0});
  auto find = [&](std::size_t f) {
    while (group[f] != f) f = group[f] = group[group[f]];
    return f;
  };
  for (std::size_t f = 0; f < nf; ++f) {
    const Vec3 n = normalized(area_normals[f]);
    const Vec3 p = hull.vertices[hull.faces[f][0]];
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t g = hull.face_adjacency[f][i];
      if (g < f) continue;
      const auto& gv = hull.faces[g];
      bool coplanar = dot(n, normalized(area_normals[g])) > 1.0 - 1e-12;
      for (std::size_t k = 0; coplanar && k < 3; ++k) {
        coplanar = std::abs(dot(n, hull.vertices[gv[k]] - p)) <= eps_;
      }
      if (coplanar) group[find(g)] = find(f);
    }
  }
  std::vector<Vec3> group_sum(nf);
  for (std::size_t f = 0; f < nf; ++f) group_sum[find(f)] += area_normals[f];
  hull.face_normals.resize(nf);
  for (std::size_t f = 0; f < nf; ++f) hull.face_normals[f] = normalized(group_sum[find(f)]);

  hull.bounding_sphere = bounding_sphere(hull.vertices);
  return hull;
}

HullTopology Quickhull::run() {
  initial_simplex();
  while (!pending_.empty()) {
    const int f = pending_.back();
    pending_.pop_back();
    if (faces_[static_cast<size_t>(f)].alive && !faces_[static_cast<size_t>(f)].outside.empty()) add_point(f);
  }
  return extract();
}

}  // namespace

HullTopology build_hull(const PointSet& points) {
  if (points.points.size() < 4) {
    throw DegenerateGeometry("build_hull: need at least 4 points, got " + std::to_string(points.points.size()));
  }
  for (const Vec3& p : points.points) {
    if (!is_finite(p)) throw InvalidArgument("build_hull: non-finite coordinate in " + points.source_label);
  }
  return Quickhull(points.points).run();
}

}  // namespace hullcache
