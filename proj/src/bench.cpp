#include "hullcache/bench.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "hullcache/gjk.hpp"
#include "hullcache/random.hpp"

namespace hullcache::bench {

namespace {

using Clock = std::chrono::steady_clock;

// Keeps measured results observable so the optimizer cannot drop queries.
volatile double g_sink = 0.0;

template <class Fn>
std::vector<double> time_batches(Fn&& run_batch, std::size_t per_batch, std::size_t warmup, std::size_t measure) {
  for (std::size_t i = 0; i < warmup; ++i) g_sink = g_sink + run_batch();
  std::vector<double> per_query_ns;
  per_query_ns.reserve(measure);
  for (std::size_t i = 0; i < measure; ++i) {
    const auto t0 = Clock::now();
    const double s = run_batch();
    const auto t1 = Clock::now();
    g_sink = g_sink + s;
    per_query_ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(per_batch));
  }
  return per_query_ns;
}

bool values_match(double value, double oracle) {
  return std::abs(value - oracle) <= 1e-12 * std::max(1.0, std::abs(oracle));
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

template <class Query>
BenchRecord bench_method(Method m, const PreparedHull& hull, const std::vector<Vec3>& dirs,
                         const std::vector<double>& oracle, const std::string& scenario, const BenchConfig& config,
                         Query&& query) {
  BenchRecord row;
  row.method = std::string(method_key(m));
  row.hull_size = hull.topology.vertex_count();
  row.scenario = scenario;

  double visits = 0.0, face_visits = 0.0, checksum = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const SupportQueryResult r = query(dirs[i]);
    if (!values_match(r.support_value, oracle[i])) {
      throw OracleMismatch(row.method + " on " + scenario + " (" + std::to_string(row.hull_size) +
                           " vertices): direction " + std::to_string(i) + " gave " + format_double(r.support_value) +
                           ", oracle " + format_double(oracle[i]));
    }
    visits += static_cast<double>(r.stats.vertex_visits);
    face_visits += static_cast<double>(r.stats.face_visits);
    checksum += r.support_value;
  }
  const auto n = static_cast<double>(dirs.size());
  row.mean_vertex_visits = visits / n;
  row.mean_face_visits = face_visits / n;
  row.checksum = checksum;

  auto batch = [&] {
    double s = 0.0;
    for (const Vec3& d : dirs) s += query(d).support_value;
    return s;
  };
  const TimingStats t = summarize(time_batches(batch, dirs.size(), config.warmup_iters, config.measure_iters));
  row.median_ns = t.median;
  row.mean_ns = t.mean;
  row.p99_ns = t.p99;
  return row;
}

}  // namespace

std::string_view scenario_key(Scenario s) {
  switch (s) {
    case Scenario::Support: return "support";
    case Scenario::GjkColliding: return "gjk-colliding";
    case Scenario::GjkClose: return "gjk-close";
    case Scenario::GjkDistant: return "gjk-distant";
    case Scenario::Verify: return "verify";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view key) {
  for (Scenario s : {Scenario::Support, Scenario::GjkColliding, Scenario::GjkClose, Scenario::GjkDistant,
                     Scenario::Verify}) {
    if (scenario_key(s) == key) return s;
  }
  // Short forms accepted by the CLI.
  if (key == "colliding") return Scenario::GjkColliding;
  if (key == "close") return Scenario::GjkClose;
  if (key == "distant") return Scenario::GjkDistant;
  throw InvalidArgument("unknown scenario '" + std::string(key) + "'");
}

void BenchConfig::validate() const {
  if (directions_per_hull == 0 || measure_iters == 0) {
    throw InvalidArgument("directions and measurement iterations must be positive");
  }
  for (std::size_t s : hull_sizes) {
    if (s < 4 || s > kMaxIndexed) throw InvalidArgument("hull size " + std::to_string(s) + " outside [4, 65535]");
  }
  if (methods.empty()) throw InvalidArgument("no methods selected");
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.hull_size << ',' << r.scenario << ',' << format_double(r.median_ns) << ','
        << format_double(r.mean_ns) << ',' << format_double(r.p99_ns) << ',' << format_double(r.mean_vertex_visits)
        << ',' << format_double(r.mean_face_visits) << ',' << format_double(r.checksum) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, rows);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Vec3> random_directions(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec3> out(n);
  for (auto& d : out) d = rng.unit_vector();
  return out;
}

TimingStats summarize(std::vector<double> samples) {
  TimingStats t;
  if (samples.empty()) return t;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  t.median = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  t.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(n)));
  t.p99 = samples[std::max<std::size_t>(rank, 1) - 1];
  return t;
}

std::vector<BenchRecord> bench_support_on(const PreparedHull& hull, const std::string& scenario,
                                          const BenchConfig& config) {
  const std::vector<Vec3> dirs = random_directions(config.directions_per_hull, config.seed ^ 0xD1B54A32D192ED03ull);
  std::vector<double> oracle(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) oracle[i] = support_naive(hull.topology, dirs[i]).support_value;

  std::vector<BenchRecord> rows;
  for (Method m : config.methods) {
    switch (m) {
      case Method::Naive:
        rows.push_back(bench_method(m, hull, dirs, oracle, scenario, config,
                                    [&](const Vec3& d) { return support_naive(hull.topology, d); }));
        break;
      case Method::HillClimb:
        rows.push_back(bench_method(m, hull, dirs, oracle, scenario, config,
                                    [&](const Vec3& d) { return support_hill_climb(hull.topology, hull.warm, d); }));
        break;
      case Method::InternallyConnected:
        rows.push_back(bench_method(m, hull, dirs, oracle, scenario, config,
                                    [&](const Vec3& d) { return support_internally_connected(hull.ic, d); }));
        break;
      case Method::FaceTraversing:
        rows.push_back(bench_method(m, hull, dirs, oracle, scenario, config,
                                    [&](const Vec3& d) { return support_face_traversing(hull.ft, d); }));
        break;
      case Method::Spherical:
        rows.push_back(bench_method(m, hull, dirs, oracle, scenario, config,
                                    [&](const Vec3& d) { return support_spherical(hull.spherical, d); }));
        break;
    }
  }
  return rows;
}

std::vector<BenchRecord> run_support_bench(const BenchConfig& config) {
  config.validate();
  std::vector<BenchRecord> rows;
  for (std::size_t size : config.hull_sizes) {
    const PreparedHull hull = PreparedHull::build(build_hull(sample_sphere(size, config.seed)));
    auto part = bench_support_on(hull, std::string(scenario_key(Scenario::Support)), config);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

double scenario_center_distance(Scenario s) {
  switch (s) {
    case Scenario::GjkColliding: return 1.0;
    case Scenario::GjkClose: return 2.0 + 0.01;
    case Scenario::GjkDistant: return 6.0;
    default: throw InvalidArgument("not a GJK scenario: " + std::string(scenario_key(s)));
  }
}

std::vector<BenchRecord> run_gjk_bench(const BenchConfig& config) {
  config.validate();
  const double center_distance = scenario_center_distance(config.scenario);
  const std::string scenario(scenario_key(config.scenario));
  std::vector<BenchRecord> rows;
  for (std::size_t size : config.hull_sizes) {
    const PreparedHull hull_a = PreparedHull::build(build_hull(sample_sphere(size, config.seed)));
    const PreparedHull hull_b = PreparedHull::build(build_hull(sample_sphere(size, config.seed + 1)));

    Rng rng(config.seed ^ (0x9E3779B97F4A7C15ull * (size + 1)));
    std::vector<std::pair<Pose, Pose>> poses(config.directions_per_hull);
    for (auto& [pa, pb] : poses) {
      pa = Pose{rng.rotation(), {}};
      pb = Pose{rng.rotation(), rng.unit_vector() * center_distance};
    }

    std::vector<GjkResult> reference;
    {
      const GjkShape a(hull_a, Method::Naive), b(hull_b, Method::Naive);
      for (const auto& [pa, pb] : poses) reference.push_back(gjk_query(a, pa, b, pb));
    }
    const GjkStatus expected =
        config.scenario == Scenario::GjkColliding ? GjkStatus::Intersecting : GjkStatus::Separated;

    for (Method m : config.methods) {
      const GjkShape a(hull_a, m), b(hull_b, m);
      BenchRecord row;
      row.method = std::string(method_key(m));
      row.hull_size = hull_a.topology.vertex_count();
      row.scenario = scenario;
      double visits = 0.0, face_visits = 0.0, checksum = 0.0;
      for (std::size_t i = 0; i < poses.size(); ++i) {
        const GjkResult r = gjk_query(a, poses[i].first, b, poses[i].second);
        if (r.status != expected || r.status != reference[i].status ||
            std::abs(r.distance - reference[i].distance) > 1e-9) {
          throw OracleMismatch(row.method + " on " + scenario + ": instance " + std::to_string(i) + " distance " +
                               format_double(r.distance) + " vs naive " + format_double(reference[i].distance));
        }
        visits += static_cast<double>(r.support_stats.vertex_visits);
        face_visits += static_cast<double>(r.support_stats.face_visits);
        checksum += r.distance;
      }
      const auto n = static_cast<double>(poses.size());
      row.mean_vertex_visits = visits / n;
      row.mean_face_visits = face_visits / n;
      row.checksum = checksum;
      auto batch = [&] {
        double s = 0.0;
        for (const auto& [pa, pb] : poses) s += gjk_query(a, pa, b, pb).distance;
        return s;
      };
      const TimingStats t = summarize(time_batches(batch, poses.size(), config.warmup_iters, config.measure_iters));
      row.median_ns = t.median;
      row.mean_ns = t.mean;
      row.p99_ns = t.p99;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<BenchRecord> run_mesh_bench(const BenchConfig& config) {
  config.validate();
  if (config.mesh_paths.empty()) throw InvalidArgument("mesh-bench needs at least one --mesh path");
  std::vector<PointSet> meshes;
  for (const auto& path : config.mesh_paths) meshes.push_back(load_mesh(path));

  std::vector<BenchRecord> rows;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    const std::string scenario = "mesh:" + config.mesh_paths[k].stem().string();
    try {
      const PreparedHull hull = PreparedHull::build(build_hull(meshes[k]));
      auto part = bench_support_on(hull, scenario, config);
      rows.insert(rows.end(), part.begin(), part.end());
    } catch (const CapacityExceeded&) {
      BenchRecord warning;
      warning.method = "warning:capacity-exceeded";
      warning.scenario = scenario;
      rows.push_back(warning);
    }
  }
  return rows;
}

}  // namespace hullcache::bench
