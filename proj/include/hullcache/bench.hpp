#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hullcache/errors.hpp"
#include "hullcache/support.hpp"

namespace hullcache::bench {

enum class Scenario { Support, GjkColliding, GjkClose, GjkDistant, Verify };

std::string_view scenario_key(Scenario s);
Scenario parse_scenario(std::string_view key);

struct BenchConfig {
  std::vector<std::size_t> hull_sizes{64, 512, 4096};
  std::vector<std::filesystem::path> mesh_paths;
  std::uint64_t seed = 1;
  std::size_t directions_per_hull = 1000;
  std::size_t warmup_iters = 100;
  std::size_t measure_iters = 1000;
  Scenario scenario = Scenario::Support;
  std::filesystem::path output_path;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};

  /// Throws InvalidArgument when a count is zero or a size is outside [4, 65535].
  void validate() const;
};

/// One CSV row.
struct BenchRecord {
  std::string method;
  std::size_t hull_size = 0;
  std::string scenario;
  double median_ns = 0.0;
  double mean_ns = 0.0;
  double p99_ns = 0.0;
  double mean_vertex_visits = 0.0;
  double mean_face_visits = 0.0;
  double checksum = 0.0;
};

/// A method disagreed with the exhaustive oracle before timing.
class OracleMismatch : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kCsvHeader =
    "method,hull_size,scenario,median_ns,mean_ns,p99_ns,mean_vertex_visits,mean_face_visits,checksum";

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows);

/// Seeded unit directions, generated outside any timed region.
std::vector<Vec3> random_directions(std::size_t n, std::uint64_t seed);

/// Support-query timing over sphere-sampled hulls, one row per size x method.
std::vector<BenchRecord> run_support_bench(const BenchConfig& config);

/// GJK timing for the colliding / close / distant sphere-hull scenarios.
std::vector<BenchRecord> run_gjk_bench(const BenchConfig& config);

/// Support-query timing on user meshes; rows keyed "mesh:<stem>". All files
/// are loaded before timing starts, so a missing file fails early.
std::vector<BenchRecord> run_mesh_bench(const BenchConfig& config);

/// Support-query rows for one prepared hull (shared by the sphere and mesh runs).
std::vector<BenchRecord> bench_support_on(const PreparedHull& hull, const std::string& scenario,
                                          const BenchConfig& config);

/// Centre distance for the GJK scenarios with unit-radius hulls.
double scenario_center_distance(Scenario s);

struct TimingStats {
  double median = 0.0;
  double mean = 0.0;
  double p99 = 0.0;
};

/// Median, mean and nearest-rank 99th percentile.
TimingStats summarize(std::vector<double> samples);

}  // namespace hullcache::bench
