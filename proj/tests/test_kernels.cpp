#include <doctest.h>

#include <omp.h>

#include <cstring>

#include "hullcache/errors.hpp"
#include "hullcache/kernels.hpp"
#include "hullcache/random.hpp"
#include "shapes.hpp"

using namespace hullcache;

namespace {

bool same_double(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("parallel kernels equal their serial references") {
  for (int threads : {1, 3, 4}) {
    omp_set_num_threads(threads);
    CHECK(kernels::thread_count() == threads);
    for (std::size_t n : {8, 300, 4096}) {
      CAPTURE(threads);
      CAPTURE(n);
      const auto hull = build_hull(sample_sphere(n, n + 1));
      CHECK(same_double(kernels::max_plane_excess(hull), kernels::serial::max_plane_excess(hull)));
      const double r = 0.2 * hull.bounding_sphere.radius;
      CHECK(kernels::artificial_neighbor_table(hull, r) == kernels::serial::artificial_neighbor_table(hull, r));

      const auto prepared = PreparedHull::build(hull);
      Rng rng(n);
      std::vector<Vec3> dirs(777);
      for (auto& d : dirs) d = rng.unit_vector();
      for (Method m : kAllMethods) {
        const auto par = kernels::support_batch(m, prepared, dirs);
        const auto ser = kernels::serial::support_batch(m, prepared, dirs);
        REQUIRE(par.size() == ser.size());
        for (std::size_t i = 0; i < par.size(); ++i) {
          REQUIRE(par[i].vertex_index == ser[i].vertex_index);
          REQUIRE(same_double(par[i].support_value, ser[i].support_value));
          REQUIRE(par[i].stats.vertex_visits == ser[i].stats.vertex_visits);
          REQUIRE(par[i].stats.face_visits == ser[i].stats.face_visits);
        }
      }
    }
  }
  omp_set_num_threads(1);
}

TEST_CASE("kernel table sizes follow the slot budget") {
  const auto hull = build_hull(shapes::bicone40());
  const auto table = kernels::artificial_neighbor_table(hull, 0.2 * hull.bounding_sphere.radius);
  REQUIRE(table.size() == 42);
  CHECK(table[0] == std::vector<std::uint16_t>{41});
  CHECK(table[41] == std::vector<std::uint16_t>{0});
  for (std::size_t v = 1; v <= 40; ++v) CHECK(table[v].size() == 15);
}

TEST_CASE("kernel errors are raised before the parallel region") {
  const auto prepared = PreparedHull::build(build_hull(shapes::cube()));
  const std::vector<Vec3> dirs{{1, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(kernels::support_batch(Method::InternallyConnected, prepared, dirs), InvalidArgument);
  CHECK_THROWS_AS(kernels::serial::support_batch(Method::InternallyConnected, prepared, dirs), InvalidArgument);
  CHECK_THROWS_AS(kernels::artificial_neighbor_table(prepared.topology, 0.0), InvalidArgument);
  CHECK(kernels::support_batch(Method::Naive, prepared, {}).empty());
}

TEST_CASE("max_plane_excess") {
  auto hull = build_hull(shapes::cube());
  CHECK(kernels::max_plane_excess(hull) <= 1e-12);
  CHECK(kernels::max_plane_excess(hull) >= -1e-12);  // every face has its own vertices on the plane
  hull.face_normals[0] = -hull.face_normals[0];
  CHECK(kernels::max_plane_excess(hull) > 0.5);
}
