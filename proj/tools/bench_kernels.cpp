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

// Times the OpenMP production kernels against the serial reference
// restatements on identical inputs, and verifies on the way that the two
// produce bit-identical maps and matching query results.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "voxmap/core/layer.hpp"
#include "voxmap/esdf/integrator.hpp"
#include "voxmap/integrate/integrator.hpp"
#include "voxmap/io/dataset.hpp"
#include "voxmap/io/render.hpp"
#include "voxmap/io/scene.hpp"
#include "voxmap/query/query.hpp"
#include "voxmap/reference/reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

template <typename V>
bool layers_identical(const voxmap::Layer<V>& a, const voxmap::Layer<V>& b) {
  if (a.num_blocks() != b.num_blocks()) {
    return false;
  }
  for (const voxmap::GridIndex& g : a.sorted_indices()) {
    const auto* pa = a.block_ptr(g);
    const auto* pb = b.block_ptr(g);
    if (!pb || std::memcmp(pa->voxels.data(), pb->voxels.data(),
                           sizeof(V) * voxmap::kVoxelsPerBlock) != 0) {
      return false;
    }
  }
  return true;
}

void print_row(const char* kernel, double production_ms, double reference_ms,
               bool identical) {
  std::printf("%-22s %12.2f %12.2f %9.2fx   %s\n", kernel, production_ms,
              reference_ms, reference_ms / production_ms,
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Production (OpenMP) vs serial reference kernel timings"};
  int frames = 6;
  double voxel_size = 0.05;
  size_t query_count = 200000;
  app.add_option("--frames", frames, "Depth frames per kernel")
      ->check(CLI::PositiveNumber);
  app.add_option("--voxel-size", voxel_size, "Voxel edge length in meters")
      ->check(CLI::PositiveNumber);
  app.add_option("--queries", query_count, "Batch query count")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const voxmap::SyntheticScene scene = voxmap::make_scene("sphere_in_box");
  const voxmap::CameraIntrinsics camera =
      voxmap::default_camera_intrinsics(640, 480);
  const voxmap::LidarIntrinsics lidar =
      voxmap::default_lidar_intrinsics(512, 32);

  voxmap::IntegratorConfig cfg;
  cfg.truncation = 4 * voxel_size;

  std::printf("scene sphere_in_box, %d frames, %.3g m voxels\n\n", frames,
              voxel_size);
  std::printf("%-22s %12s %12s %10s   %s\n", "kernel", "openmp ms",
              "serial ms", "speedup", "parity");

  std::vector<voxmap::Pose> cam_poses;
  std::vector<voxmap::DepthImage> cam_frames;
  std::vector<voxmap::Pose> lidar_poses;
  std::vector<voxmap::DepthImage> lidar_frames;
  for (int k = 0; k < frames; ++k) {
    cam_poses.push_back(
        voxmap::orbit_pose(scene, voxmap::SensorKind::kCamera, k, frames));
    cam_frames.push_back(voxmap::render_depth(scene, cam_poses.back(), camera));
    lidar_poses.push_back(
        voxmap::orbit_pose(scene, voxmap::SensorKind::kLidar, k, frames));
    lidar_frames.push_back(
        voxmap::render_depth(scene, lidar_poses.back(), lidar));
  }

  voxmap::Layer<voxmap::TsdfVoxel> tsdf_prod(voxel_size);
  {
    voxmap::Layer<voxmap::TsdfVoxel> tsdf_ref(voxel_size);
    const auto t0 = Clock::now();
    for (int k = 0; k < frames; ++k) {
      voxmap::integrate_depth(tsdf_prod, cam_frames[k], cam_poses[k], camera,
                              cfg);
    }
    const double prod_ms = ms_since(t0);
    const auto t1 = Clock::now();
    for (int k = 0; k < frames; ++k) {
      voxmap::reference_integrate_depth(tsdf_ref, cam_frames[k], cam_poses[k],
                                        camera, cfg);
    }
    const double ref_ms = ms_since(t1);
    print_row("tsdf camera", prod_ms, ref_ms,
              layers_identical(tsdf_prod, tsdf_ref));
  }

  {
    voxmap::Layer<voxmap::OccupancyVoxel> occ_prod(voxel_size);
    voxmap::Layer<voxmap::OccupancyVoxel> occ_ref(voxel_size);
    const auto t0 = Clock::now();
    for (int k = 0; k < frames; ++k) {
      voxmap::integrate_depth(occ_prod, lidar_frames[k], lidar_poses[k], lidar,
                              cfg);
    }
    const double prod_ms = ms_since(t0);
    const auto t1 = Clock::now();
    for (int k = 0; k < frames; ++k) {
      voxmap::reference_integrate_depth(occ_ref, lidar_frames[k],
                                        lidar_poses[k], lidar, cfg);
    }
    const double ref_ms = ms_since(t1);
    print_row("occupancy lidar", prod_ms, ref_ms,
              layers_identical(occ_prod, occ_ref));
  }

  {
    voxmap::EsdfConfig ecfg;
    ecfg.site_threshold = voxel_size;
    voxmap::Layer<voxmap::EsdfVoxel> esdf(voxel_size);
    voxmap::update_esdf(esdf, tsdf_prod, tsdf_prod.sorted_indices(), ecfg);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> x(scene.bbox_min.x(),
                                             scene.bbox_max.x());
    std::uniform_real_distribution<double> y(scene.bbox_min.y(),
                                             scene.bbox_max.y());
    std::uniform_real_distribution<double> z(scene.bbox_min.z(),
                                             scene.bbox_max.z());
    std::vector<Eigen::Vector3d> points(query_count);
    for (auto& p : points) {
      p = {x(rng), y(rng), z(rng)};
    }

    const auto t0 = Clock::now();
    const auto prod = voxmap::query_batch(esdf, points, true);
    const double prod_ms = ms_since(t0);
    const auto t1 = Clock::now();
    const auto ref = voxmap::reference_query_batch(esdf, points, true);
    const double ref_ms = ms_since(t1);

    bool match = prod.size() == ref.size();
    for (size_t i = 0; match && i < prod.size(); ++i) {
      match = prod[i].known == ref[i].known &&
              std::abs(prod[i].distance - ref[i].distance) <= 1e-9 &&
              (prod[i].gradient - ref[i].gradient).norm() <= 1e-8;
    }
    print_row("query batch", prod_ms, ref_ms, match);
  }

  return 0;
}
