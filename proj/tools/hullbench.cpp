// hullbench: support-query and GJK benchmarks, verification and layout export.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "hullcache/bench.hpp"
#include "hullcache/serialize.hpp"
#include "hullcache/verify.hpp"

namespace hb = hullcache::bench;

namespace {

struct Options {
  std::string sizes;
  std::uint64_t seed = 1;
  std::size_t iters = 1000;
  std::size_t warmup = 100;
  std::size_t directions = 1000;
  std::vector<std::string> meshes;
  std::string out;
  std::string scenario;
  std::string methods;
  std::string fault = "none";
  double fill_radius = hullcache::kDefaultFillRadiusFraction;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) throw hullcache::InvalidArgument("bad size '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

hb::BenchConfig make_config(const Options& o, hb::Scenario scenario) {
  hb::BenchConfig c;
  if (!o.sizes.empty()) c.hull_sizes = parse_sizes(o.sizes);
  c.seed = o.seed;
  c.measure_iters = o.iters;
  c.warmup_iters = o.warmup;
  c.directions_per_hull = o.directions;
  for (const auto& m : o.meshes) c.mesh_paths.emplace_back(m);
  c.output_path = o.out;
  c.scenario = scenario;
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto& key : split_list(o.methods)) c.methods.push_back(hullcache::parse_method(key));
  }
  return c;
}

void emit(const hb::BenchConfig& config, const std::vector<hb::BenchRecord>& rows) {
  if (config.output_path.empty()) {
    hb::write_csv(std::cout, rows);
  } else {
    hb::write_csv(config.output_path, rows);
    std::cerr << "wrote " << rows.size() << " rows to " << config.output_path.string() << '\n';
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--sizes", o.sizes, "Comma-separated hull vertex counts");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--iters", o.iters, "Measured batches per method");
  cmd->add_option("--warmup", o.warmup, "Warm-up batches per method");
  cmd->add_option("--directions", o.directions, "Queries (or GJK instances) per batch");
  cmd->add_option("--methods", o.methods, "Comma-separated subset of methods");
  cmd->add_option("--out", o.out, "CSV output path (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-aware convex hull support queries: benchmarks and verification"};
  app.require_subcommand(1);
  Options o;

  auto* support = app.add_subcommand("support-bench", "Time support queries on sphere-sampled hulls");
  add_common(support, o);

  auto* gjk = app.add_subcommand("gjk-bench", "Time GJK queries between sphere-sampled hulls");
  add_common(gjk, o);
  gjk->add_option("--scenario", o.scenario, "colliding | close | distant (or gjk-*)")->required();

  auto* mesh = app.add_subcommand("mesh-bench", "Time support queries on hulls of OBJ/PLY meshes");
  add_common(mesh, o);
  mesh->add_option("--mesh", o.meshes, "Mesh file (repeatable)")->required();

  auto* verify = app.add_subcommand("verify", "Run all invariant suites");
  verify->add_option("--sizes", o.sizes, "Comma-separated hull vertex counts");
  verify->add_option("--seed", o.seed, "RNG seed");
  verify->add_option("--directions", o.directions, "Directions per hull");
  verify->add_option("--inject-fault", o.fault, "Test hook: none | drop-neighbor");

  auto* gen = app.add_subcommand("gen-hull", "Build a hull and write its packed layout pools");
  gen->add_option("--sizes", o.sizes, "Vertex count of the sphere-sampled hull");
  gen->add_option("--seed", o.seed, "RNG seed");
  gen->add_option("--mesh", o.meshes, "Use this mesh instead of a sampled sphere");
  gen->add_option("--fill-radius", o.fill_radius, "Artificial-edge radius as a fraction of the bounding radius");
  gen->add_option("--out", o.out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (support->parsed()) {
      const auto config = make_config(o, hb::Scenario::Support);
      emit(config, hb::run_support_bench(config));
    } else if (gjk->parsed()) {
      const auto config = make_config(o, hb::parse_scenario(o.scenario));
      emit(config, hb::run_gjk_bench(config));
    } else if (mesh->parsed()) {
      const auto config = make_config(o, hb::Scenario::Support);
      emit(config, hb::run_mesh_bench(config));
    } else if (verify->parsed()) {
      hullcache::verify::VerifyOptions vo;
      if (!o.sizes.empty()) vo.hull_sizes = parse_sizes(o.sizes);
      vo.seed = o.seed;
      vo.directions = o.directions;
      if (o.fault == "drop-neighbor") {
        vo.fault = hullcache::verify::Fault::DropNeighbor;
      } else if (o.fault != "none") {
        throw hullcache::InvalidArgument("unknown fault '" + o.fault + "'");
      }
      const auto results = hullcache::verify::run_verification(vo, &std::cout);
      const bool ok = hullcache::verify::all_passed(results);
      std::cout << (ok ? "all suites passed" : "verification FAILED") << '\n';
      return ok ? 0 : 1;
    } else if (gen->parsed()) {
      hullcache::PointSet points;
      if (!o.meshes.empty()) {
        points = hullcache::load_mesh(o.meshes.front());
      } else {
        const auto sizes = parse_sizes(o.sizes.empty() ? "1024" : o.sizes);
        if (sizes.size() != 1) throw hullcache::InvalidArgument("gen-hull takes exactly one size");
        points = hullcache::sample_sphere(sizes.front(), o.seed);
      }
      const auto hull = hullcache::build_hull(points);
      auto ic = hullcache::build_internally_connected(hull, o.fill_radius);
      const auto ft = hullcache::build_face_traversing(hull, ic);
      const auto sh = hullcache::build_spherical(hull, std::move(ic));
      hullcache::save_pools(o.out, hullcache::collect_pools(ft, sh));
      std::cerr << "wrote " << hull.vertex_count() << " vertex, " << ft.vertex_pool.extensions.size()
                << " extension, " << hull.face_count() << " face records to " << o.out << '\n';
    }
  } catch (const hb::OracleMismatch& e) {
    std::cerr << "oracle mismatch: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
