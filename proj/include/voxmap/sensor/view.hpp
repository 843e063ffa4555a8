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

#include <vector>

#include "voxmap/core/indexing.hpp"
#include "voxmap/sensor/camera.hpp"
#include "voxmap/sensor/image.hpp"
#include "voxmap/sensor/lidar.hpp"
#include "voxmap/sensor/pose.hpp"

namespace voxmap {

struct ViewConfig {
  double max_integration_distance = 5.0;  // meters, in sensor depth units
  double truncation = 0.2;                // meters, margin behind the surface
  int pixel_subsample = 8;                // camera tile edge in pixels
};

/// Conservative superset of the blocks whose voxels can project onto valid
/// pixels within the integration range. Rays are subsampled (one per pixel
/// tile for cameras, one per beam for lidars), traversed to the tile's
/// maximum depth plus the truncation margin, and the block set is dilated by
/// one block. Returned sorted and duplicate-free.
std::vector<GridIndex> blocks_in_view(const Pose& T_LS,
                                      const CameraIntrinsics& camera,
                                      const DepthImage& depth,
                                      double block_size,
                                      const ViewConfig& cfg);

std::vector<GridIndex> blocks_in_view(const Pose& T_LS,
                                      const LidarIntrinsics& lidar,
                                      const DepthImage& depth,
                                      double block_size,
                                      const ViewConfig& cfg);

}  // namespace voxmap
