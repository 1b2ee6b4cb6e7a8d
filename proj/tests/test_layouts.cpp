#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <numbers>
#include <set>
#include <sstream>

#include "hullcache/errors.hpp"
#include "hullcache/layouts.hpp"
#include "hullcache/serialize.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace hullcache;

namespace {

template <class T>
bool same_bytes(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

template <std::size_t N>
bool sentinels_trail(const std::array<std::uint16_t, N>& slots) {
  bool seen_empty = false;
  for (auto s : slots) {
    if (s == kEmptySlot) seen_empty = true;
    else if (seen_empty) return false;
  }
  return true;
}

// Artificial neighbours recomputed by full sort of every non-neighbour.
std::vector<std::uint16_t> brute_artificial(const HullTopology& h, std::size_t v, std::size_t count, double r) {
  std::vector<std::pair<double, std::size_t>> all;
  const std::set<std::uint32_t> nbrs(h.adjacency[v].begin(), h.adjacency[v].end());
  for (std::size_t i = 0; i < h.vertices.size(); ++i) {
    if (i == v || nbrs.count(static_cast<std::uint32_t>(i))) continue;
    const Vec3 d = h.vertices[i] - h.vertices[v];
    all.push_back({std::abs(std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z) - r), i});
  }
  std::sort(all.begin(), all.end());
  std::vector<std::uint16_t> out;
  for (std::size_t k = 0; k < std::min(count, all.size()); ++k) out.push_back(static_cast<std::uint16_t>(all[k].second));
  return out;
}

std::uint16_t brute_anchor(const HullTopology& h, std::size_t f) {
  std::uint32_t best = h.faces[f][0];
  for (auto v : h.faces[f]) {
    const double a = dot(h.vertices[v], h.face_normals[f]);
    const double b = dot(h.vertices[best], h.face_normals[f]);
    if (a > b || (a == b && v < best)) best = v;
  }
  return static_cast<std::uint16_t>(best);
}

}  // namespace

TEST_CASE("record sizes and offsets") {
  CHECK(sizeof(PackedVertexRecord) == 64);
  CHECK(alignof(PackedVertexRecord) == 64);
  CHECK(sizeof(ExtensionRecord) == 32);
  CHECK(sizeof(PackedFaceRecord) == 32);
  CHECK(sizeof(SphericalFaceRecord) == 16);
  CHECK(offsetof(PackedVertexRecord, neighbors) == 24);
  CHECK(offsetof(PackedVertexRecord, extension) == 62);
  CHECK(offsetof(ExtensionRecord, next) == 30);
  CHECK(offsetof(SphericalFaceRecord, neighbors) == 8);
  PackedVertexRecord rec;
  for (auto s : rec.neighbors) CHECK(s == 0xFFFF);
  CHECK(rec.extension == 0xFFFF);
}

TEST_CASE("artificial_slot_budget") {
  CHECK(artificial_slot_budget(3) == 16);
  CHECK(artificial_slot_budget(19) == 0);
  CHECK(artificial_slot_budget(20) == 14);
  CHECK(artificial_slot_budget(34) == 0);
  CHECK(artificial_slot_budget(40) == 9);
}

TEST_CASE("octahedron packs four true and one artificial neighbour") {
  const auto hull = build_hull(shapes::octahedron());
  const auto ic = build_internally_connected(hull);
  REQUIRE(ic.vertices.size() == 6);
  CHECK(ic.extensions.empty());
  const std::array<std::uint16_t, 6> opposite{1, 0, 3, 2, 5, 4};
  for (std::size_t v = 0; v < 6; ++v) {
    const auto list = ic.neighbor_list(v);
    REQUIRE(list.size() == 5);
    CHECK(std::equal(hull.adjacency[v].begin(), hull.adjacency[v].end(), list.begin()));
    CHECK(list[4] == opposite[v]);
    CHECK(ic.vertices[v].neighbors[5] == kEmptySlot);
    CHECK(ic.vertices[v].position() == hull.vertices[v]);
  }
}

TEST_CASE("bicone apex spills into two extension records") {
  const auto hull = build_hull(shapes::bicone40());
  REQUIRE(hull.vertex_count() == 42);
  const auto ic = build_internally_connected(hull);
  for (std::size_t apex : {std::size_t{0}, std::size_t{41}}) {
    CAPTURE(apex);
    REQUIRE(hull.adjacency[apex].size() == 40);
    const auto& rec = ic.vertices[apex];
    for (std::size_t k = 0; k < 19; ++k) CHECK(rec.neighbors[k] == hull.adjacency[apex][k]);
    REQUIRE(rec.extension != kEmptySlot);
    const auto& e1 = ic.extensions[rec.extension];
    for (std::size_t k = 0; k < 15; ++k) CHECK(e1.neighbors[k] == hull.adjacency[apex][19 + k]);
    REQUIRE(e1.next != kEmptySlot);
    const auto& e2 = ic.extensions[e1.next];
    for (std::size_t k = 0; k < 6; ++k) CHECK(e2.neighbors[k] == hull.adjacency[apex][34 + k]);
    CHECK(e2.neighbors[6] == (apex == 0 ? 41 : 0));
    for (std::size_t k = 7; k < 15; ++k) CHECK(e2.neighbors[k] == kEmptySlot);
    CHECK(e2.next == kEmptySlot);
  }
  for (std::size_t v = 1; v <= 40; ++v) {
    CHECK(hull.adjacency[v].size() == 4);
    CHECK(ic.vertices[v].extension == kEmptySlot);
    CHECK(ic.neighbor_list(v).size() == 19);
  }
  CHECK(ic.extensions.size() == 4);
}

TEST_CASE("packed pool is a superset of the hull graph") {
  const auto hull = build_hull(sample_sphere(1024, 5));
  const auto ic = build_internally_connected(hull);
  CHECK(ic.fill_radius == doctest::Approx(0.2 * hull.bounding_sphere.radius));
  for (std::size_t v = 0; v < hull.vertex_count(); ++v) {
    const auto list = ic.neighbor_list(v);
    const std::set<std::uint16_t> unique(list.begin(), list.end());
    REQUIRE(unique.size() == list.size());
    REQUIRE(!unique.count(static_cast<std::uint16_t>(v)));
    for (auto n : hull.adjacency[v]) REQUIRE(unique.count(static_cast<std::uint16_t>(n)));
    const std::size_t deg = hull.adjacency[v].size();
    const std::size_t expected = std::min(artificial_slot_budget(deg), hull.vertex_count() - 1 - deg);
    REQUIRE(list.size() == deg + expected);
  }
  CHECK(audit_vertex_pool(hull, ic).ok);
}

TEST_CASE("select_artificial_neighbors") {
  SUBCASE("tetrahedron has no candidates") {
    const auto hull = build_hull(shapes::tetrahedron());
    for (std::size_t v = 0; v < 4; ++v) CHECK(select_artificial_neighbors(hull, v, 16, 0.3).empty());
  }
  SUBCASE("ranking by distance to the fill sphere") {
    HullTopology h;
    h.vertices = {{0, 0, 0}, {0.5, 0, 0}, {0, 1.0, 0}, {0, 0, 2.0}, {-1.0, 0, 0}};
    h.adjacency = {{4}, {}, {}, {}, {0}};
    const auto r1 = select_artificial_neighbors(h, 0, 2, 1.0);
    CHECK(r1 == std::vector<std::uint16_t>{2, 1});
    const auto r2 = select_artificial_neighbors(h, 0, 8, 0.75);
    CHECK(r2 == std::vector<std::uint16_t>{1, 2, 3});  // 1 and 2 tie, lower index first
    CHECK(select_artificial_neighbors(h, 0, 0, 1.0).empty());
    CHECK_THROWS_AS(select_artificial_neighbors(h, 0, 2, 0.0), InvalidArgument);
    CHECK_THROWS_AS(select_artificial_neighbors(h, 9, 2, 1.0), InvalidArgument);
  }
  SUBCASE("matches exhaustive sort") {
    const auto hull = build_hull(sample_sphere(512, 8));
    const double r = 0.2 * hull.bounding_sphere.radius;
    const auto ic = build_internally_connected(hull);
    for (std::size_t v = 0; v < hull.vertex_count(); ++v) {
      const std::size_t budget = artificial_slot_budget(hull.adjacency[v].size());
      const auto expect = brute_artificial(hull, v, budget, r);
      REQUIRE(select_artificial_neighbors(hull, v, budget, r) == expect);
      const auto list = ic.neighbor_list(v);
      REQUIRE(std::equal(expect.begin(), expect.end(), list.begin() + hull.adjacency[v].size()));
    }
  }
}

TEST_CASE("build_internally_connected argument checks") {
  const auto hull = build_hull(shapes::cube());
  CHECK_THROWS_AS(build_internally_connected(hull, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_internally_connected(hull, 1.5), InvalidArgument);
  CHECK_THROWS_AS(build_internally_connected(hull, NAN), InvalidArgument);
  CHECK_NOTHROW(build_internally_connected(hull, 1.0));
}

TEST_CASE("face traversing layout") {
  for (const auto& pts : {shapes::cube(), shapes::tetrahedron(), sample_sphere(2048, 21)}) {
    CAPTURE(pts.source_label);
    const auto hull = build_hull(pts);
    const auto ft = build_face_traversing(hull);
    REQUIRE(ft.faces.size() == hull.face_count());
    const auto oracle_nbrs = oracle::shared_edge_neighbors(hull);
    for (std::size_t f = 0; f < hull.face_count(); ++f) {
      const auto& rec = ft.faces[f];
      CHECK(rec.normal() == hull.face_normals[f]);
      const std::set<std::uint32_t> got(rec.neighbors.begin(), rec.neighbors.end());
      CHECK(got == oracle_nbrs[f]);
      CHECK(rec.anchor == brute_anchor(hull, f));
    }
    CHECK(same_bytes(ft.vertex_pool.vertices, build_internally_connected(hull).vertices));
  }
  const auto tet = build_face_traversing(build_hull(shapes::tetrahedron()));
  CHECK(tet.faces.size() == 4);
  const auto cube = build_face_traversing(build_hull(shapes::cube()));
  CHECK(cube.faces.size() == 12);
}

TEST_CASE("spherical layout") {
  const auto q_half_pi = q31_encode_angle(std::numbers::pi / 2).raw;
  const auto cube = build_hull(shapes::cube());
  const auto sh = build_spherical(cube);
  REQUIRE(sh.faces.size() == 12);
  bool saw_top = false, saw_bottom = false, saw_px = false;
  for (std::size_t f = 0; f < 12; ++f) {
    const Vec3 n = cube.face_normals[f];
    const auto& rec = sh.faces[f];
    if (n.z > 0.999) {
      saw_top = true;
      CHECK(rec.azimuth.raw == 0);
      CHECK(std::abs(std::int64_t{rec.elevation.raw} - q_half_pi) <= 2);
    }
    if (n.z < -0.999) {
      saw_bottom = true;
      CHECK(rec.azimuth.raw == 0);
      CHECK(std::abs(std::int64_t{rec.elevation.raw} + q_half_pi) <= 2);
    }
    if (n.x > 0.999) {
      saw_px = true;
      CHECK(std::abs(std::int64_t{rec.azimuth.raw}) <= 2);
      CHECK(std::abs(std::int64_t{rec.elevation.raw}) <= 2);
      CHECK(rec.normal().x == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(rec.anchor == brute_anchor(cube, f));
  }
  CHECK((saw_top && saw_bottom && saw_px));

  const auto hull = build_hull(sample_sphere(1024, 4));
  const auto sph = build_spherical(hull);
  const auto oracle_nbrs = oracle::shared_edge_neighbors(hull);
  for (std::size_t f = 0; f < hull.face_count(); ++f) {
    const Vec3 a = sph.faces[f].normal();
    const Vec3 b = hull.face_normals[f];
    const double angle = std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0));
    REQUIRE(angle <= 0.15);
    const std::set<std::uint32_t> got(sph.faces[f].neighbors.begin(), sph.faces[f].neighbors.end());
    REQUIRE(got == oracle_nbrs[f]);
  }
}

TEST_CASE("warm start table") {
  CHECK(warm_start_slot({1, 0, 0}) == 0);
  CHECK(warm_start_slot({-1, 0, 0}) == 1);
  CHECK(warm_start_slot({0, 2, 1}) == 2);
  CHECK(warm_start_slot({0, -2, 1}) == 3);
  CHECK(warm_start_slot({0.1, 0, 3}) == 4);
  CHECK(warm_start_slot({0, 0, -1}) == 5);
  CHECK(warm_start_slot({1, 1, 0}) == 0);
  CHECK(warm_start_slot({-1, 1, 1}) == 1);
  CHECK(warm_start_slot({0, 1, -1}) == 2);

  const auto cube = compute_warm_starts(build_hull(shapes::cube()));
  CHECK(cube.start_vertices == std::array<std::uint32_t, 6>{1, 0, 2, 0, 4, 0});
  const auto oct = compute_warm_starts(build_hull(shapes::octahedron()));
  CHECK(oct.start_vertices == std::array<std::uint32_t, 6>{0, 1, 2, 3, 4, 5});

  const auto hull = build_hull(sample_sphere(512, 12));
  const auto warm = compute_warm_starts(hull);
  const std::array<Vec3, 6> axes{Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0},
                                 Vec3{0, -1, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}};
  for (std::size_t s = 0; s < 6; ++s) {
    CHECK(dot(hull.vertices[warm.start_vertices[s]], axes[s]) == oracle::max_dot(hull.vertices, axes[s]));
    CHECK(dot(hull.face_normals[warm.start_faces[s]], axes[s]) == oracle::max_dot(hull.face_normals, axes[s]));
  }
}

TEST_CASE("layouts rebuild bit-identically and keep sentinels trailing") {
  const auto hull = build_hull(sample_sphere(4096, 2));
  const auto a = build_face_traversing(hull);
  const auto b = build_face_traversing(hull);
  CHECK(same_bytes(a.faces, b.faces));
  CHECK(same_bytes(a.vertex_pool.vertices, b.vertex_pool.vertices));
  CHECK(same_bytes(a.vertex_pool.extensions, b.vertex_pool.extensions));
  CHECK(same_bytes(build_spherical(hull).faces, build_spherical(hull).faces));
  for (const auto& rec : a.vertex_pool.vertices) {
    REQUIRE(sentinels_trail(rec.neighbors));
    if (rec.extension != kEmptySlot) REQUIRE(rec.neighbors.back() != kEmptySlot);
  }
  for (const auto& ext : a.vertex_pool.extensions) {
    REQUIRE(sentinels_trail(ext.neighbors));
    if (ext.next != kEmptySlot) REQUIRE(ext.neighbors.back() != kEmptySlot);
  }
}

TEST_CASE("audit detects a dropped neighbour") {
  const auto hull = build_hull(sample_sphere(64, 1));
  auto ic = build_internally_connected(hull);
  CHECK(audit_vertex_pool(hull, ic).ok);
  ic.vertices[3].neighbors[0] = ic.vertices[3].neighbors[1];
  const auto audit = audit_vertex_pool(hull, ic);
  CHECK_FALSE(audit.ok);
  CHECK_FALSE(audit.failure.empty());
}

TEST_CASE("serialization round trip") {
  const auto hull = build_hull(shapes::bicone40());
  const auto ft = build_face_traversing(hull);
  const auto sh = build_spherical(hull);
  std::stringstream ss;
  write_section(ss, ft.vertex_pool.vertices);
  write_section(ss, ft.vertex_pool.extensions);
  write_section(ss, ft.faces);
  write_section(ss, sh.faces);
  CHECK(ss.str().size() == 4 * 12 + 42 * 64 + 4 * 32 + ft.faces.size() * (32 + 16));
  CHECK(ss.str().substr(0, 4) == "HCL1");
  CHECK(same_bytes(read_vertex_section(ss), ft.vertex_pool.vertices));
  CHECK(same_bytes(read_extension_section(ss), ft.vertex_pool.extensions));
  CHECK(same_bytes(read_face_section(ss), ft.faces));
  CHECK(same_bytes(read_spherical_section(ss), sh.faces));

  const auto path = std::filesystem::temp_directory_path() / "hullcache_layout_roundtrip.bin";
  save_pools(path, collect_pools(ft, sh));
  const auto pools = load_pools(path);
  CHECK(same_bytes(pools.vertices, ft.vertex_pool.vertices));
  CHECK(same_bytes(pools.extensions, ft.vertex_pool.extensions));
  CHECK(same_bytes(pools.faces, ft.faces));
  CHECK(same_bytes(pools.spherical_faces, sh.faces));
  std::filesystem::remove(path);
}

TEST_CASE("serialization errors") {
  const auto ft = build_face_traversing(build_hull(shapes::cube()));
  std::stringstream good;
  write_section(good, ft.faces);
  const std::string bytes = good.str();

  SUBCASE("bad magic") {
    std::string b = bytes;
    b[0] = 'X';
    std::stringstream in(b);
    CHECK_THROWS_AS(read_face_section(in), FormatError);
  }
  SUBCASE("wrong kind") {
    std::stringstream in(bytes);
    CHECK_THROWS_AS(read_vertex_section(in), FormatError);
  }
  SUBCASE("truncated") {
    std::stringstream in(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_face_section(in), FormatError);
    std::stringstream header_only(bytes.substr(0, 6));
    CHECK_THROWS_AS(read_face_section(header_only), FormatError);
  }
  SUBCASE("count above capacity") {
    std::string b = bytes;
    b[8] = b[9] = b[10] = '\xff';
    b[11] = 0;
    std::stringstream in(b);
    CHECK_THROWS_AS(read_face_section(in), FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_pools("/nonexistent/dir/pools.bin"), IoError);
  }
}

TEST_CASE("capacity limits") {
  HullTopology big;
  big.vertices.resize(65536);
  big.adjacency.resize(65536);
  big.bounding_sphere.radius = 1.0;
  CHECK_THROWS_AS(build_internally_connected(big), CapacityExceeded);
  CHECK_THROWS_AS(pack_vertices(big, std::vector<std::vector<std::uint16_t>>(65536), 1.0), CapacityExceeded);

  // 2n - 4 faces: 32770 vertices give 65536 faces, one too many.
  const auto hull = build_hull(sample_sphere(32770, 6));
  REQUIRE(hull.face_count() == 65536);
  const auto ic = build_internally_connected(hull);
  CHECK(ic.vertices.size() == 32770);
  CHECK_THROWS_AS(build_face_traversing(hull, ic), CapacityExceeded);
  CHECK_THROWS_AS(build_spherical(hull, ic), CapacityExceeded);
}
