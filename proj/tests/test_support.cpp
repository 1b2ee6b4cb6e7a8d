#include <doctest.h>

#include <cmath>

#include "hullcache/errors.hpp"
#include "hullcache/random.hpp"
#include "hullcache/support.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace hullcache;

namespace {

bool close_rel(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::vector<Vec3> directions(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec3> out(n);
  for (auto& d : out) d = rng.unit_vector();
  return out;
}

}  // namespace

TEST_CASE("support_naive") {
  const auto cube = build_hull(shapes::cube());
  const auto r = support_naive(cube, {1, 0, 0});
  CHECK(r.support_value == 1.0);
  CHECK(r.point.x == 1.0);
  CHECK(r.vertex_index == 1);  // lowest index among the four x = 1 corners
  CHECK(r.stats.dot_products_evaluated == 8);

  const auto oct = build_hull(shapes::octahedron());
  const auto o = support_naive(oct, {1, 2, 3});
  CHECK(o.point == Vec3{0, 0, 1});
  CHECK(o.support_value == 3.0);

  const auto hull = build_hull(sample_sphere(4096, 9));
  for (const auto& d : directions(1000, 1)) {
    const auto res = support_naive(hull, d);
    REQUIRE(res.support_value == oracle::max_dot(hull.vertices, d));
    REQUIRE(res.support_value == dot(d, res.point));
  }
}

TEST_CASE("direction errors") {
  const auto prepared = PreparedHull::build(build_hull(shapes::cube()));
  for (Method m : kAllMethods) {
    CAPTURE(method_key(m));
    CHECK_THROWS_AS(query_support(m, prepared, {0, 0, 0}), InvalidArgument);
    CHECK_THROWS_AS(query_support(m, prepared, {NAN, 0, 1}), InvalidArgument);
    CHECK_THROWS_AS(query_support(m, prepared, {INFINITY, 0, 1}), InvalidArgument);
    CHECK_NOTHROW(query_support(m, prepared, {1e-200, 0, 0}));
  }
  CHECK_THROWS_AS(support_hill_climb(prepared.topology, {1, 0, 0}, 99), InvalidArgument);
}

TEST_CASE("method keys") {
  for (Method m : kAllMethods) CHECK(parse_method(method_key(m)) == m);
  CHECK(method_key(Method::InternallyConnected) == "internally-connected");
  CHECK(method_key(Method::HillClimb) == "hill-climb");
  CHECK_THROWS_AS(parse_method("bogus"), InvalidArgument);
}

TEST_CASE("support_hill_climb") {
  const auto cube = build_hull(shapes::cube());
  ClimbTrace trace;
  const auto r = support_hill_climb(cube, {1, 1, 1}, 0, &trace);
  CHECK(r.point == Vec3{1, 1, 1});
  CHECK(r.stats.vertex_visits <= 4);
  CHECK(trace.vertices.front() == 0);
  CHECK(trace.vertices.back() == 7);

  const auto hull = build_hull(sample_sphere(8192, 3));
  Rng rng(44);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 d = rng.unit_vector();
    const auto start = static_cast<std::size_t>(rng.next() % hull.vertex_count());
    const auto res = support_hill_climb(hull, d, start);
    REQUIRE(close_rel(res.support_value, oracle::max_dot(hull.vertices, d)));
    REQUIRE(res.stats.vertex_visits <= hull.vertex_count());
    const auto best = support_naive(hull, d).vertex_index;
    REQUIRE(support_hill_climb(hull, d, best).stats.vertex_visits == 1);
  }
}

TEST_CASE("internally connected backend") {
  const auto oct = PreparedHull::build(build_hull(shapes::octahedron()));
  const auto r = support_internally_connected(oct.ic, {0, 0, -1});
  CHECK(r.point == Vec3{0, 0, -1});
  CHECK(r.stats.vertex_visits == 1);

  // Bicone apex: its neighbour list spans two extension records.
  const auto bicone = PreparedHull::build(build_hull(shapes::bicone40()));
  const auto apex = support_internally_connected(bicone.ic, {0.01, 0.02, 1});
  CHECK(apex.point == Vec3{0, 0, 1});
  const auto low = climb_vertex_pool(bicone.ic, {0, 0, -1}, 0);
  CHECK(low.point == Vec3{0, 0, -0.5});
  CHECK(low.stats.vertex_visits == 2);  // jumps straight across via the artificial edge
  for (int k = 0; k < 40; ++k) {
    const double a = 2.0 * std::numbers::pi * (k + 0.5) / 40.0;
    const Vec3 d{std::cos(a), std::sin(a), -0.2};
    CHECK(close_rel(climb_vertex_pool(bicone.ic, d, 0).support_value, oracle::max_dot(bicone.topology.vertices, d)));
  }
}

TEST_CASE("face traversing backend") {
  const auto cube = PreparedHull::build(build_hull(shapes::cube()));
  ClimbTrace trace;
  const auto r = support_face_traversing(cube.ft, {0, 0, 1}, &trace);
  CHECK(r.support_value == 1.0);
  CHECK(cube.topology.face_normals[trace.faces.back()].z == doctest::Approx(1.0));

  const auto tet = PreparedHull::build(build_hull(shapes::tetrahedron()));
  for (std::size_t f = 0; f < tet.topology.face_count(); ++f) {
    ClimbTrace t;
    support_face_traversing(tet.ft, tet.topology.face_normals[f], &t);
    CHECK(t.faces.back() == f);
  }
}

// Unit normals on the face graph are not unimodal in normal.d, so the face
// climb may stop at a local maximum; the vertex phase still has to recover.
TEST_CASE("face climb stops at a local face maximum and the vertex phase recovers") {
  const auto hull = PreparedHull::build(build_hull(sample_sphere(4096, 31)));
  int local_only = 0;
  for (const auto& d : directions(1000, 77)) {
    ClimbTrace t;
    const auto res = support_face_traversing(hull.ft, d, &t);
    REQUIRE(close_rel(res.support_value, oracle::max_dot(hull.topology.vertices, d)));
    const std::uint32_t f = t.faces.back();
    const double reached = dot(d, hull.topology.face_normals[f]);
    for (auto g : hull.topology.face_adjacency[f]) REQUIRE(dot(d, hull.topology.face_normals[g]) <= reached);
    if (reached < oracle::max_dot(hull.topology.face_normals, d)) ++local_only;
  }
  MESSAGE("face climbs stopping at a non-global face: " << local_only << " / 1000");
  CHECK(local_only < 1000);
}

TEST_CASE("spherical backend") {
  const auto cube = PreparedHull::build(build_hull(shapes::cube()));
  CHECK(support_spherical(cube.spherical, {1, 0, 0}).support_value == 1.0);
  for (const auto& pts : {shapes::cube(), shapes::octahedron(), sample_sphere(700, 2)}) {
    const auto h = PreparedHull::build(build_hull(pts));
    CHECK(support_spherical(h.spherical, {0, 0, 1}).support_value ==
          support_internally_connected(h.ic, {0, 0, 1}).support_value);
  }
  const auto hull = PreparedHull::build(build_hull(sample_sphere(8192, 5)));
  for (const auto& d : directions(1000, 8)) {
    REQUIRE(close_rel(support_spherical(hull.spherical, d).support_value, oracle::max_dot(hull.topology.vertices, d)));
  }
}

TEST_CASE("oracle equivalence across backends and sizes") {
  for (std::size_t n : {8, 64, 512, 4096}) {
    const auto hull = PreparedHull::build(build_hull(sample_sphere(n, n)));
    for (const auto& d : directions(1000, 1000 + n)) {
      const double expect = oracle::max_dot(hull.topology.vertices, d);
      for (Method m : kAllMethods) {
        const auto res = query_support(m, hull, d);
        REQUIRE(close_rel(res.support_value, expect));
        REQUIRE(res.support_value == dot(d, res.point));
        REQUIRE(res.point == hull.topology.vertices[res.vertex_index]);
      }
    }
  }
}

TEST_CASE("climb properties") {
  const auto hull = PreparedHull::build(build_hull(sample_sphere(2048, 13)));
  const std::size_t V = hull.topology.vertex_count();
  const std::size_t F = hull.topology.face_count();
  for (const auto& d : directions(500, 3)) {
    for (Method m : kAllMethods) {
      if (m == Method::Naive) continue;
      ClimbTrace t;
      const auto res = query_support(m, hull, d, &t);
      REQUIRE(!t.vertices.empty());
      REQUIRE(t.vertices.size() <= V);
      REQUIRE(t.faces.size() <= F);
      // Equal unless the climb ended on a tie and moved to the lowest tied index.
      REQUIRE(dot(d, hull.topology.vertices[t.vertices.back()]) == res.support_value);
      for (std::size_t k = 1; k < t.vertices.size(); ++k) {
        REQUIRE(dot(d, hull.topology.vertices[t.vertices[k]]) > dot(d, hull.topology.vertices[t.vertices[k - 1]]));
      }
      auto face_normal = [&](std::uint32_t f) {
        return m == Method::Spherical ? hull.spherical.faces[f].normal() : hull.ft.faces[f].normal();
      };
      for (std::size_t k = 1; k < t.faces.size(); ++k) {
        REQUIRE(dot(d, face_normal(t.faces[k])) > dot(d, face_normal(t.faces[k - 1])));
      }
      // Scaling the direction never changes the selected support.
      for (double c : {1e-3, 7.5, 1e6}) {
        const auto scaled = query_support(m, hull, d * c);
        REQUIRE(close_rel(dot(d, scaled.point), res.support_value));
      }
    }
  }
}

TEST_CASE("artificial edges never cost visits") {
  for (std::size_t n : {2048, 8192}) {
    const auto hull = PreparedHull::build(build_hull(sample_sphere(n, 17)));
    double ic = 0, hc = 0;
    for (const auto& d : directions(1000, 99)) {
      ic += static_cast<double>(support_internally_connected(hull.ic, d).stats.vertex_visits);
      hc += static_cast<double>(support_hill_climb(hull.topology, hull.warm, d).stats.vertex_visits);
    }
    MESSAGE("n=" << n << " mean visits internally-connected " << ic / 1000 << " hill-climb " << hc / 1000);
    CHECK(ic <= hc);
  }
}

TEST_CASE("exact ties resolve to the lowest index for every backend") {
  for (const auto& pts : {shapes::cube(), shapes::octahedron(), shapes::lattice(5)}) {
    CAPTURE(pts.source_label);
    const auto hull = PreparedHull::build(build_hull(pts));
    const std::vector<Vec3> dirs{{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0},
                                 {1, 1, 0}, {1, -1, 0}, {0, 1, 1}, {-1, 0, -1}, {1, 1, 1}};
    for (const auto& d : dirs) {
      // Lowest index among vertices attaining the maximum, by a separate scan.
      const double best = oracle::max_dot(hull.topology.vertices, d);
      std::uint32_t lowest = 0;
      while (dot(d, hull.topology.vertices[lowest]) != best) ++lowest;
      for (Method m : kAllMethods) {
        CAPTURE(method_key(m));
        REQUIRE(query_support(m, hull, d).vertex_index == lowest);
      }
    }
    // Every start vertex of a tied top face ends on the same vertex.
    for (std::uint32_t s = 0; s < hull.topology.vertex_count(); ++s) {
      const auto r = support_hill_climb(hull.topology, {0, 0, 1}, s);
      const auto p = climb_vertex_pool(hull.ic, {0, 0, 1}, s);
      REQUIRE(r.vertex_index == support_naive(hull.topology, {0, 0, 1}).vertex_index);
      REQUIRE(p.vertex_index == r.vertex_index);
    }
  }
}
