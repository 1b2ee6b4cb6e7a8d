#include "hullcache/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hullcache/bench.hpp"
#include "hullcache/fxtrig.hpp"
#include "hullcache/gjk.hpp"
#include "hullcache/kernels.hpp"
#include "hullcache/random.hpp"
#include "hullcache/serialize.hpp"

namespace hullcache::verify {

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(std::string why) {
    if (passed) detail = std::move(why);
    passed = false;
  }
};

bool relative_match(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

Outcome layout_sizes(const std::vector<PreparedHull>& hulls) {
  Outcome o;
  if (sizeof(PackedVertexRecord) != 64) o.fail("PackedVertexRecord is not 64 bytes");
  if (sizeof(ExtensionRecord) != 32) o.fail("ExtensionRecord is not 32 bytes");
  if (sizeof(PackedFaceRecord) != 32) o.fail("PackedFaceRecord is not 32 bytes");
  if (sizeof(SphericalFaceRecord) != 16) o.fail("SphericalFaceRecord is not 16 bytes");
  for (const auto& h : hulls) {
    if (reinterpret_cast<std::uintptr_t>(h.ic.vertices.data()) % kCacheLineBytes != 0) o.fail("vertex pool misaligned");
    if (reinterpret_cast<std::uintptr_t>(h.ft.faces.data()) % 32 != 0) o.fail("face pool misaligned");
    if (reinterpret_cast<std::uintptr_t>(h.spherical.faces.data()) % 16 != 0) o.fail("spherical pool misaligned");
  }
  return o;
}

Outcome hull_invariants(const std::vector<PreparedHull>& hulls) {
  Outcome o;
  for (const auto& h : hulls) {
    const ValidationReport report = validate_topology(h.topology);
    for (const auto& c : report.checks) {
      if (!c.passed) o.fail(std::to_string(h.topology.vertex_count()) + "-vertex hull: " + c.name + " " + c.detail);
    }
  }
  return o;
}

Outcome neighbor_superset(const std::vector<PreparedHull>& hulls) {
  Outcome o;
  for (const auto& h : hulls) {
    for (const InternallyConnectedHull* pool : {&h.ic, &h.ft.vertex_pool, &h.spherical.vertex_pool}) {
      const LayoutAudit audit = audit_vertex_pool(h.topology, *pool);
      if (!audit.ok) o.fail(std::to_string(h.topology.vertex_count()) + "-vertex hull: " + audit.failure);
    }
  }
  return o;
}

Outcome oracle_equivalence(const std::vector<PreparedHull>& hulls, const VerifyOptions& options) {
  Outcome o;
  const auto dirs = bench::random_directions(options.directions, options.seed);
  for (const auto& h : hulls) {
    std::vector<double> checksums;
    for (Method m : kAllMethods) {
      const auto results = kernels::support_batch(m, h, dirs);
      double checksum = 0.0;
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        const double oracle = support_naive(h.topology, dirs[i]).support_value;
        if (!relative_match(results[i].support_value, oracle)) {
          o.fail(std::string(method_key(m)) + " mismatch on " + std::to_string(h.topology.vertex_count()) +
                 "-vertex hull, direction " + std::to_string(i));
        }
        const auto v = h.topology.vertex_count();
        if (results[i].stats.vertex_visits > v || results[i].stats.face_visits > h.topology.face_count()) {
          o.fail(std::string(method_key(m)) + " exceeded the visit bound");
        }
        checksum += results[i].support_value;
      }
      checksums.push_back(checksum);
    }
    if (std::adjacent_find(checksums.begin(), checksums.end(), std::not_equal_to<>()) != checksums.end()) {
      o.fail("checksums differ across methods on " + std::to_string(h.topology.vertex_count()) + "-vertex hull");
    }
  }
  return o;
}

Outcome trig_bounds() {
  Outcome o;
  Rng rng(12345);
  double worst = 0.0;
  for (int i = 0; i < 1'000'000; ++i) {
    const Q31Angle x{static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.next()))};
    worst = std::max(worst, std::abs(approx_sin(x) - std::sin(x.radians())));
    if (approx_cos(x) != approx_sin(x + kQuarterTurn)) o.fail("approx_cos is not a shifted approx_sin");
  }
  if (worst > 0.06) o.fail("max sine error " + std::to_string(worst));
  for (std::int64_t raw : {-2147483648LL, -1073741824LL, 0LL, 1073741824LL}) {
    const Q31Angle x{static_cast<std::int32_t>(raw)};
    if (std::abs(approx_sin(x) - std::sin(x.radians())) > 1e-12) o.fail("not exact at raw " + std::to_string(raw));
  }
  if (!(std::abs(taylor_sin(std::numbers::pi, 3)) > 0.07)) o.fail("taylor contrast not reproduced");
  return o;
}

Outcome normal_fidelity() {
  Outcome o;
  Rng rng(777);
  double worst = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    const Vec3 n = rng.unit_vector();
    const Vec3 d = decode_normal(encode_normal(n));
    worst = std::max(worst, std::acos(std::clamp(dot(n, d) / norm(d), -1.0, 1.0)));
  }
  if (worst > 0.15) o.fail("max angular error " + std::to_string(worst));
  return o;
}

Outcome gjk_properties(const VerifyOptions& options) {
  Outcome o;
  const PreparedHull a = PreparedHull::build(build_hull(sample_sphere(512, options.seed)));
  const PreparedHull b = PreparedHull::build(build_hull(sample_sphere(512, options.seed + 1)));
  Rng rng(options.seed * 7 + 3);
  for (int trial = 0; trial < 50; ++trial) {
    const Pose pa{rng.rotation(), rng.unit_vector() * rng.uniform(0.0, 1.0)};
    const Pose pb{rng.rotation(), pa.translation + rng.unit_vector() * rng.uniform(0.5, 5.0)};
    std::vector<double> distances;
    for (Method m : kAllMethods) {
      const GjkShape sa(a, m), sb(b, m);
      GjkTrace trace;
      const GjkResult ab = gjk_query(sa, pa, sb, pb, {}, &trace);
      const GjkResult ba = gjk_query(sb, pb, sa, pa);
      const Vec3 shift = rng.unit_vector() * 10.0;
      const GjkResult moved = gjk_query(sa, Pose{pa.rotation, pa.translation + shift}, sb,
                                        Pose{pb.rotation, pb.translation + shift});
      if (std::abs(ab.distance - ba.distance) > 1e-9) o.fail("distance not symmetric");
      if (std::abs(ab.distance - moved.distance) > 1e-9) o.fail("distance not translation invariant");
      for (double lb : trace.lower_bounds) {
        if (lb > ab.distance + 1e-9) o.fail("lower bound exceeds final distance");
      }
      if (ab.status == GjkStatus::Separated && std::abs(ab.distance - norm(ab.witness_a - ab.witness_b)) > 1e-9) {
        o.fail("witness distance mismatch");
      }
      distances.push_back(ab.distance);
    }
    for (double d : distances) {
      if (std::abs(d - distances.front()) > 1e-9) o.fail("backends disagree on GJK distance");
    }
  }
  return o;
}

Outcome serialization_roundtrip(const std::vector<PreparedHull>& hulls) {
  Outcome o;
  for (const auto& h : hulls) {
    const LayoutPools pools = collect_pools(h.ft, h.spherical);
    std::stringstream buffer;
    write_section(buffer, pools.vertices);
    write_section(buffer, pools.extensions);
    write_section(buffer, pools.faces);
    write_section(buffer, pools.spherical_faces);
    const std::string first = buffer.str();
    const auto v = read_vertex_section(buffer);
    const auto e = read_extension_section(buffer);
    const auto f = read_face_section(buffer);
    const auto s = read_spherical_section(buffer);
    std::stringstream again;
    write_section(again, v);
    write_section(again, e);
    write_section(again, f);
    write_section(again, s);
    if (again.str() != first) o.fail("serialized pools do not round-trip");
  }
  return o;
}

}  // namespace

bool all_passed(const std::vector<SuiteResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed; });
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options, std::ostream* log) {
  std::vector<SuiteResult> results;
  auto run = [&](const std::string& name, const std::function<Outcome()>& suite) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = suite();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back({name, outcome.passed, outcome.detail, secs});
    if (log) {
      *log << (outcome.passed ? "PASS " : "FAIL ") << name << " (" << std::fixed << std::setprecision(3) << secs << " s)";
      if (!outcome.passed) *log << ": " << outcome.detail;
      *log << '\n';
    }
  };

  std::vector<PreparedHull> hulls;
  run("build_hulls", [&] {
    for (std::size_t size : options.hull_sizes) {
      hulls.push_back(PreparedHull::build(build_hull(sample_sphere(size, options.seed))));
    }
    if (options.fault == Fault::DropNeighbor) {
      // Overwrite the first true neighbour of vertex 0 everywhere it is packed.
      for (auto& h : hulls) {
        for (InternallyConnectedHull* pool : {&h.ic, &h.ft.vertex_pool, &h.spherical.vertex_pool}) {
          auto& slots = pool->vertices[0].neighbors;
          std::copy(slots.begin() + 1, slots.end(), slots.begin());
          slots.back() = kEmptySlot;
        }
      }
    }
    return Outcome{};
  });
  run("layout_sizes", [&] { return layout_sizes(hulls); });
  run("hull_invariants", [&] { return hull_invariants(hulls); });
  run("neighbor_superset", [&] { return neighbor_superset(hulls); });
  run("oracle_equivalence", [&] { return oracle_equivalence(hulls, options); });
  run("trig_bounds", [&] { return trig_bounds(); });
  run("normal_fidelity", [&] { return normal_fidelity(); });
  run("gjk_properties", [&] { return gjk_properties(options); });
  run("serialization_roundtrip", [&] { return serialization_roundtrip(hulls); });
  return results;
}

}  // namespace hullcache::verify
