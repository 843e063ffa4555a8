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

#include "voxmap/io/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "voxmap/core/serialization.hpp"
#include "voxmap/mesh/marching_cubes.hpp"

namespace voxmap {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void merge_sorted_unique(std::vector<GridIndex>* into,
                         const std::vector<GridIndex>& add) {
  into->insert(into->end(), add.begin(), add.end());
  std::sort(into->begin(), into->end());
  into->erase(std::unique(into->begin(), into->end()), into->end());
}

}  // namespace

ReplayConfig make_replay_config(double voxel_size) {
  ReplayConfig config;
  config.voxel_size = voxel_size;
  config.integrator.truncation = 4.0 * voxel_size;
  config.esdf.site_threshold = voxel_size;
  return config;
}

ReplayResult replay(const Dataset& dataset, const ReplayConfig& config) {
  if (dataset.frames.empty()) {
    throw std::invalid_argument("replay: dataset has no frames");
  }
  if (config.update_every < 1) {
    throw std::invalid_argument("replay: update_every must be >= 1");
  }
  if (config.with_color &&
      (config.use_occupancy || dataset.kind != SensorKind::kCamera)) {
    throw std::invalid_argument(
        "replay: color needs a camera dataset fused into a TSDF map");
  }

  ReplayResult result{LayerCake(config.voxel_size), {}};
  LayerCake& cake = result.cake;
  std::vector<GridIndex> pending;  // blocks changed since the last update

  const auto derive_layers = [&](FrameTiming* timing) {
    const auto esdf_start = Clock::now();
    if (config.use_occupancy) {
      update_esdf(cake.require_esdf(), *cake.occupancy, pending, config.esdf);
    } else {
      update_esdf(cake.require_esdf(), *cake.tsdf, pending, config.esdf);
    }
    timing->esdf_ms = ms_since(esdf_start);
    if (!config.use_occupancy) {
      const auto mesh_start = Clock::now();
      update_mesh(cake.require_mesh(), *cake.tsdf, pending, config.mesh,
                  cake.color.get());
      timing->mesh_ms = ms_since(mesh_start);
    }
    pending.clear();
  };

  for (size_t k = 0; k < dataset.frames.size(); ++k) {
    const DatasetFrame& frame = dataset.frames[k];
    FrameTiming timing;
    timing.frame = static_cast<int>(k);

    const auto depth_start = Clock::now();
    std::vector<GridIndex> changed;
    if (config.use_occupancy) {
      Layer<OccupancyVoxel>& occ = cake.require_occupancy();
      changed = dataset.kind == SensorKind::kCamera
                    ? integrate_depth(occ, frame.depth, frame.T_WS,
                                      dataset.camera, config.integrator)
                    : integrate_depth(occ, frame.depth, frame.T_WS,
                                      dataset.lidar, config.integrator);
    } else {
      Layer<TsdfVoxel>& tsdf = cake.require_tsdf();
      changed = dataset.kind == SensorKind::kCamera
                    ? integrate_depth(tsdf, frame.depth, frame.T_WS,
                                      dataset.camera, config.integrator)
                    : integrate_depth(tsdf, frame.depth, frame.T_WS,
                                      dataset.lidar, config.integrator);
    }
    timing.tsdf_ms = ms_since(depth_start);
    merge_sorted_unique(&pending, changed);

    if (config.with_color && frame.has_color) {
      const auto color_start = Clock::now();
      integrate_color(cake.require_color(), frame.color, frame.depth,
                      frame.T_WS, dataset.camera, *cake.tsdf,
                      config.integrator);
      timing.color_ms = ms_since(color_start);
    }

    const bool last = k + 1 == dataset.frames.size();
    const bool on_cadence =
        (k + 1) % static_cast<size_t>(config.update_every) == 0;
    if ((on_cadence || last) && !pending.empty()) {
      derive_layers(&timing);
    }
    result.timings.push_back(timing);
  }
  return result;
}

void write_timing_csv(const std::vector<FrameTiming>& timings,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << "frame,tsdf_ms,color_ms,esdf_ms,mesh_ms\n";
  char buf[160];
  for (const FrameTiming& t : timings) {
    std::snprintf(buf, sizeof(buf), "%d,%.3f,%.3f,%.3f,%.3f\n", t.frame,
                  t.tsdf_ms, t.color_ms, t.esdf_ms, t.mesh_ms);
    out << buf;
  }
  if (!out) {
    throw IoError("failed writing: " + path);
  }
}

}  // namespace voxmap
