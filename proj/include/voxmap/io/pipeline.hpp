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

#pragma once

#include <string>
#include <vector>

#include "voxmap/core/layer_cake.hpp"
#include "voxmap/esdf/integrator.hpp"
#include "voxmap/integrate/integrator.hpp"
#include "voxmap/io/dataset.hpp"
#include "voxmap/mesh/marching_cubes.hpp"

namespace voxmap {

/// Settings for replaying a dataset into a map.
struct ReplayConfig {
  double voxel_size = 0.05;
  bool use_occupancy = false;  // fuse occupancy instead of the default TSDF
  bool with_color = false;     // fuse color (camera datasets only)
  int update_every = 4;        // derive ESDF + mesh every this many frames
  IntegratorConfig integrator;
  EsdfConfig esdf;
  MeshConfig mesh;
};

/// ReplayConfig with the scale-dependent knobs tied to the voxel size:
/// truncation at four voxels and the site threshold at one voxel.
ReplayConfig make_replay_config(double voxel_size);

/// Wall-clock milliseconds spent on each stage of one frame. Frames that
/// skip the derived-layer update (off cadence) report 0 there; a frame
/// without color reports 0 color time.
struct FrameTiming {
  int frame = 0;
  double tsdf_ms = 0.0;
  double color_ms = 0.0;
  double esdf_ms = 0.0;
  double mesh_ms = 0.0;
};

struct ReplayResult {
  LayerCake cake;
  std::vector<FrameTiming> timings;
};

/// Replays every frame in order: integrates depth (and optionally color)
/// into the configured layer, and every update_every frames -- plus once
/// after the final frame -- folds the accumulated changes into the ESDF
/// and (for TSDF maps) the mesh. Throws std::invalid_argument for an empty
/// dataset, a color request on a lidar dataset, or update_every < 1.
ReplayResult replay(const Dataset& dataset, const ReplayConfig& config);

/// CSV with header frame,tsdf_ms,color_ms,esdf_ms,mesh_ms and fixed
/// 3-decimal milliseconds. Throws IoError on write failure.
void write_timing_csv(const std::vector<FrameTiming>& timings,
                      const std::string& path);

}  // namespace voxmap
