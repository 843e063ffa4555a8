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

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/integrate/config.hpp"
#include "voxmap/sensor/camera.hpp"
#include "voxmap/sensor/image.hpp"
#include "voxmap/sensor/lidar.hpp"
#include "voxmap/sensor/pose.hpp"

namespace voxmap {

// Fuses one depth frame into the layer by projecting every voxel of every
// block in view into the image (voxel-projective integration). T_LS maps
// sensor-frame points into the layer frame. Returns the sorted indices of
// blocks whose stored bytes changed. Throws InvalidPoseError on degenerate
// poses before any mutation; blocks are allocated only for candidates in
// view. The result is independent of block processing order: each voxel
// update depends only on that voxel's prior state and the frame.
std::vector<GridIndex> integrate_depth(Layer<TsdfVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const CameraIntrinsics& camera,
                                       const IntegratorConfig& cfg);
std::vector<GridIndex> integrate_depth(Layer<TsdfVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const LidarIntrinsics& lidar,
                                       const IntegratorConfig& cfg);
std::vector<GridIndex> integrate_depth(Layer<OccupancyVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const CameraIntrinsics& camera,
                                       const IntegratorConfig& cfg);
std::vector<GridIndex> integrate_depth(Layer<OccupancyVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const LidarIntrinsics& lidar,
                                       const IntegratorConfig& cfg);

/// Fuses a color frame into voxels near the TSDF zero crossing (weight > 0
/// and |distance| <= truncation). Color is camera-only.
std::vector<GridIndex> integrate_color(Layer<ColorVoxel>& color_layer,
                                       const ColorImage& color,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const CameraIntrinsics& camera,
                                       const Layer<TsdfVoxel>& tsdf_layer,
                                       const IntegratorConfig& cfg);

}  // namespace voxmap
