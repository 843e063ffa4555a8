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

#include "voxmap/io/scene.hpp"
#include "voxmap/sensor/camera.hpp"
#include "voxmap/sensor/image.hpp"
#include "voxmap/sensor/lidar.hpp"
#include "voxmap/sensor/pose.hpp"

namespace voxmap {

/// Renders a depth image by sphere tracing one ray per pixel center.
/// T_WS places the sensor in the world frame. Because the scene distance
/// field is 1-Lipschitz, stepping by the sampled distance never overshoots;
/// a ray hits once the distance drops below 1e-4 m. Pixels whose ray misses
/// everything within the sensor's range are invalid (0). Camera pixels
/// store perpendicular depth (sensor-frame z); lidar pixels store Euclidean
/// range, with hits closer than min_range also invalid.
DepthImage render_depth(const SyntheticScene& scene, const Pose& T_WS,
                        const CameraIntrinsics& intrinsics);
DepthImage render_depth(const SyntheticScene& scene, const Pose& T_WS,
                        const LidarIntrinsics& intrinsics);

/// Shades the same camera rays by surface normal: a hit with world-frame
/// normal n colors the pixel 255 * (n + 1) / 2 per channel; misses are
/// black. Gives deterministic, geometry-locked colors for testing the color
/// pipeline without textures.
ColorImage render_color(const SyntheticScene& scene, const Pose& T_WS,
                        const CameraIntrinsics& intrinsics);

}  // namespace voxmap
