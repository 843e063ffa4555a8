// Copyright 2026 The voxmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: dataset replay with artifact export, synthetic
// dataset generation, map evaluation against analytic scenes, and the
// resolution / query benchmarks.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "voxmap/core/layer_cake.hpp"
#include "voxmap/core/serialization.hpp"
#include "voxmap/esdf/integrator.hpp"
#include "voxmap/eval/error.hpp"
#include "voxmap/io/dataset.hpp"
#include "voxmap/io/pipeline.hpp"
#include "voxmap/io/scene.hpp"
#include "voxmap/io/slice.hpp"
#include "voxmap/mesh/marching_cubes.hpp"
#include "voxmap/mesh/ply.hpp"
#include "voxmap/query/query.hpp"

namespace fs = std::filesystem;

namespace {

using nlohmann::json;

/// Removes the files this command managed to write when a later step
/// throws, so a failed run never leaves a half-populated output behind.
class ArtifactGuard {
 public:
  void wrote(const std::string& path) { written_.push_back(path); }
  void commit() { written_.clear(); }
  ~ArtifactGuard() {
    for (const std::string& path : written_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }

 private:
  std::vector<std::string> written_;
};

/// Height of the middle of the allocated field, used as the default slice.
double mid_height(const voxmap::Layer<voxmap::EsdfVoxel>& esdf) {
  int min_z = std::numeric_limits<int>::max();
  int max_z = std::numeric_limits<int>::min();
  for (const voxmap::GridIndex& g : esdf.sorted_indices()) {
    min_z = std::min(min_z, g.z);
    max_z = std::max(max_z, g.z);
  }
  return (double(min_z) + double(max_z) + 1.0) / 2.0 * esdf.block_size();
}

struct IntegrateArgs {
  std::string dataset;
  std::string out;
  double voxel_size = 0.05;
  std::string layer = "tsdf";
  bool color = false;
  int update_every = 4;
};

int run_integrate(const IntegrateArgs& args) {
  const voxmap::Dataset dataset = voxmap::load_dataset(args.dataset);
  voxmap::ReplayConfig config = voxmap::make_replay_config(args.voxel_size);
  config.use_occupancy = args.layer == "occupancy";
  config.with_color = args.color;
  config.update_every = args.update_every;

  voxmap::ReplayResult result = voxmap::replay(dataset, config);

  fs::create_directories(args.out);
  ArtifactGuard guard;
  const auto artifact = [&](const char* name) {
    const std::string path = (fs::path(args.out) / name).string();
    guard.wrote(path);
    return path;
  };

  std::vector<std::string> emitted;
  voxmap::save_snapshot(result.cake, artifact("map.vxlf"));
  emitted.push_back("map.vxlf");
  if (result.cake.mesh) {
    voxmap::save_mesh_ply(*result.cake.mesh, artifact("mesh.ply"));
    emitted.push_back("mesh.ply");
  }
  if (result.cake.esdf && result.cake.esdf->num_blocks() > 0) {
    voxmap::save_esdf_slice(*result.cake.esdf, mid_height(*result.cake.esdf),
                            artifact("esdf_slice.csv"));
    emitted.push_back("esdf_slice.csv");
  }
  voxmap::write_timing_csv(result.timings, artifact("timing.csv"));
  emitted.push_back("timing.csv");
  guard.commit();

  double total_ms = 0.0;
  for (const voxmap::FrameTiming& t : result.timings) {
    total_ms += t.tsdf_ms + t.color_ms + t.esdf_ms + t.mesh_ms;
  }
  const voxmap::LayerCake& cake = result.cake;
  const size_t map_blocks = config.use_occupancy
                                ? cake.occupancy->num_blocks()
                                : cake.tsdf->num_blocks();
  std::cout << "frames: " << result.timings.size() << "\n"
            << "map blocks: " << map_blocks << "\n"
            << "total time: " << total_ms / 1000.0 << " s\n";
  for (const std::string& name : emitted) {
    std::cout << "wrote " << (fs::path(args.out) / name).string() << "\n";
  }
  return 0;
}

struct SynthArgs {
  std::string scene;
  std::string out;
  int frames = 30;
  std::string sensor = "camera";
};

int run_synth(const SynthArgs& args) {
  const voxmap::SyntheticScene scene = voxmap::make_scene(args.scene);
  const voxmap::SensorKind kind = args.sensor == "lidar"
                                      ? voxmap::SensorKind::kLidar
                                      : voxmap::SensorKind::kCamera;
  const bool fresh_dir = !fs::exists(args.out);
  try {
    const voxmap::Dataset dataset =
        voxmap::make_synthetic_dataset(scene, kind, args.frames);
    voxmap::save_dataset(dataset, args.out);
    voxmap::save_scene(scene, (fs::path(args.out) / "scene.json").string());
  } catch (...) {
    // A synthetic dataset is all-or-nothing: drop the partial directory
    // when this command created it.
    if (fresh_dir) {
      std::error_code ec;
      fs::remove_all(args.out, ec);
    }
    throw;
  }
  std::cout << "wrote " << args.frames << " " << args.sensor << " frames of '"
            << args.scene << "' to " << args.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string snapshot;
  std::string scene;
};

int run_eval(const EvalArgs& args) {
  const voxmap::LayerCake cake = voxmap::load_snapshot(args.snapshot);
  const voxmap::SyntheticScene scene = voxmap::load_scene(args.scene);
  const voxmap::SdfFunction sdf = [&](const Eigen::Vector3d& p) {
    return scene.sdf(p);
  };

  json report;
  report["voxel_size"] = cake.voxel_size;

  voxmap::EsdfConfig esdf_cfg;
  esdf_cfg.site_threshold = cake.voxel_size;
  if (cake.esdf && cake.esdf->num_blocks() > 0) {
    const voxmap::ErrorStats stats =
        voxmap::esdf_error(*cake.esdf, sdf, esdf_cfg);
    report["esdf"] = json::parse(voxmap::error_stats_to_json(stats));
  } else {
    report["esdf"] = nullptr;
  }

  if (cake.tsdf && cake.tsdf->num_blocks() > 0) {
    // Meshes are derived data: rebuild from the snapshot's field so the
    // numbers describe the map, not a possibly stale artifact.
    voxmap::MeshLayer mesh(cake.voxel_size);
    voxmap::update_mesh(mesh, *cake.tsdf, cake.tsdf->sorted_indices(),
                        voxmap::MeshConfig{}, cake.color.get());
    const voxmap::ErrorStats stats = voxmap::surface_error(mesh, sdf);
    report["mesh"] = json::parse(voxmap::error_stats_to_json(stats));
  } else {
    report["mesh"] = nullptr;
  }

  std::cout << report.dump(2) << "\n";
  return 0;
}

struct BenchResolutionArgs {
  std::string dataset;
  std::vector<double> voxel_sizes = {0.01, 0.02, 0.05, 0.10};
};

int run_bench_resolution(const BenchResolutionArgs& args) {
  for (const double vs : args.voxel_sizes) {
    if (!(vs > 0.0)) {
      throw std::invalid_argument("bench resolution: voxel sizes must be positive");
    }
  }
  const voxmap::Dataset dataset = voxmap::load_dataset(args.dataset);

  std::cout << "voxel_size,frames,tsdf_ms_mean,color_ms_mean,esdf_ms_mean,"
               "mesh_ms_mean,total_ms\n";
  for (const double vs : args.voxel_sizes) {
    const voxmap::ReplayConfig config = voxmap::make_replay_config(vs);
    const voxmap::ReplayResult result = voxmap::replay(dataset, config);
    voxmap::FrameTiming sum;
    for (const voxmap::FrameTiming& t : result.timings) {
      sum.tsdf_ms += t.tsdf_ms;
      sum.color_ms += t.color_ms;
      sum.esdf_ms += t.esdf_ms;
      sum.mesh_ms += t.mesh_ms;
    }
    const double n = double(result.timings.size());
    const double total = sum.tsdf_ms + sum.color_ms + sum.esdf_ms + sum.mesh_ms;
    std::printf("%.9g,%zu,%.3f,%.3f,%.3f,%.3f,%.3f\n", vs,
                result.timings.size(), sum.tsdf_ms / n, sum.color_ms / n,
                sum.esdf_ms / n, sum.mesh_ms / n, total);
    std::fflush(stdout);
  }
  return 0;
}

struct BenchQueriesArgs {
  std::string snapshot;
  size_t count = 0;
  std::string mode = "cor";
  uint64_t seed = 42;
};

int run_bench_queries(const BenchQueriesArgs& args) {
  if (args.count == 0) {
    throw std::invalid_argument("bench queries: --count must be positive");
  }
  const voxmap::LayerCake cake = voxmap::load_snapshot(args.snapshot);
  if (!cake.esdf || cake.esdf->num_blocks() == 0) {
    throw std::invalid_argument(
        "bench queries: snapshot contains no distance field");
  }
  const voxmap::SampleMode mode = args.mode == "uncor"
                                      ? voxmap::SampleMode::kUncorrelated
                                      : voxmap::SampleMode::kCorrelated;
  const voxmap::QueryBenchmark bench =
      voxmap::benchmark_queries(*cake.esdf, args.count, mode, args.seed);

  json report;
  report["count"] = bench.count;
  report["mode"] = args.mode == "uncor" ? "uncorrelated" : "correlated";
  report["seed"] = args.seed;
  report["seconds"] = bench.seconds;
  report["queries_per_second"] = bench.queries_per_second;
  report["valid_ratio"] = bench.valid_ratio;
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse voxel mapping: replay, synthesis, evaluation, benchmarks"};
  app.require_subcommand(1);

  IntegrateArgs integrate_args;
  CLI::App* integrate =
      app.add_subcommand("integrate", "Replay a dataset into a map");
  integrate->add_option("dataset", integrate_args.dataset, "Dataset directory")
      ->required();
  integrate
      ->add_option("--voxel-size", integrate_args.voxel_size,
                   "Voxel edge length in meters")
      ->check(CLI::PositiveNumber);
  integrate
      ->add_option("--layer", integrate_args.layer,
                   "Map representation to fuse")
      ->check(CLI::IsMember({"tsdf", "occupancy"}));
  integrate->add_flag("--color", integrate_args.color,
                      "Also fuse color (camera datasets, tsdf layer)");
  integrate
      ->add_option("--update-every", integrate_args.update_every,
                   "Derive ESDF and mesh every N frames")
      ->check(CLI::PositiveNumber);
  integrate->add_option("--out", integrate_args.out, "Output directory")
      ->required();

  SynthArgs synth_args;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic dataset");
  synth
      ->add_option("scene", synth_args.scene,
                   "Scene name: sphere_in_box, room or corridor")
      ->required();
  synth->add_option("--frames", synth_args.frames, "Number of frames")
      ->check(CLI::PositiveNumber);
  synth->add_option("--sensor", synth_args.sensor, "Sensor model")
      ->check(CLI::IsMember({"camera", "lidar"}));
  synth->add_option("--out", synth_args.out, "Output directory")->required();

  EvalArgs eval_args;
  CLI::App* eval =
      app.add_subcommand("eval", "Compare a map snapshot against a scene");
  eval->add_option("snapshot", eval_args.snapshot, "Map snapshot path")
      ->required();
  eval->add_option("scene", eval_args.scene, "Scene description path")
      ->required();

  CLI::App* bench = app.add_subcommand("bench", "Performance benchmarks");
  bench->require_subcommand(1);

  BenchResolutionArgs res_args;
  CLI::App* bench_resolution = bench->add_subcommand(
      "resolution", "Replay a dataset at several voxel sizes");
  bench_resolution->add_option("dataset", res_args.dataset, "Dataset directory")
      ->required();
  bench_resolution
      ->add_option("--voxel-sizes", res_args.voxel_sizes,
                   "Comma-separated voxel sizes in meters")
      ->delimiter(',');

  BenchQueriesArgs query_args;
  CLI::App* bench_queries =
      bench->add_subcommand("queries", "Batch query throughput");
  bench_queries->add_option("snapshot", query_args.snapshot, "Map snapshot")
      ->required();
  bench_queries->add_option("--count", query_args.count, "Number of queries")
      ->required();
  bench_queries->add_option("--mode", query_args.mode, "Sampling pattern")
      ->check(CLI::IsMember({"cor", "uncor"}));
  bench_queries->add_option("--seed", query_args.seed, "Point-set seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (integrate->parsed()) {
      return run_integrate(integrate_args);
    }
    if (synth->parsed()) {
      return run_synth(synth_args);
    }
    if (eval->parsed()) {
      return run_eval(eval_args);
    }
    if (bench->parsed()) {
      if (bench_resolution->parsed()) {
        return run_bench_resolution(res_args);
      }
      if (bench_queries->parsed()) {
        return run_bench_queries(query_args);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
