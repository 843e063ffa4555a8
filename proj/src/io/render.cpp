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

#include "voxmap/io/render.hpp"

#include <algorithm>
#include <cmath>

namespace voxmap {
namespace {

constexpr double kHitEpsilon = 1e-4;  // meters
constexpr int kMaxSteps = 20000;      // grazing rays advance slowly

/// Ray length to the first surface along origin + t * dir (unit dir), or a
/// negative value when nothing is hit within t_max.
double trace(const SyntheticScene& scene, const Eigen::Vector3d& origin,
             const Eigen::Vector3d& dir, double t_max) {
  double t = 0.0;
  for (int step = 0; step < kMaxSteps && t <= t_max; ++step) {
    const double d = scene.sdf(origin + t * dir);
    if (d < kHitEpsilon) {
      return t;
    }
    t += d;
  }
  return -1.0;
}

}  // namespace

DepthImage render_depth(const SyntheticScene& scene, const Pose& T_WS,
                        const CameraIntrinsics& intrinsics) {
  DepthImage depth(intrinsics.width, intrinsics.height);
  const Eigen::Vector3d origin = T_WS.t;
  // A sensor embedded in a solid measures nothing on any ray.
  if (scene.sdf(origin) < kHitEpsilon) {
    return depth;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (int row = 0; row < intrinsics.height; ++row) {
    for (int col = 0; col < intrinsics.width; ++col) {
      const Eigen::Vector3d dir_s =
          intrinsics.ray_direction(col + 0.5, row + 0.5);
      const double t_max = intrinsics.max_depth / dir_s.z();
      const double t = trace(scene, origin, T_WS.R * dir_s, t_max);
      if (t >= 0.0) {
        depth.at(col, row) = static_cast<float>(t * dir_s.z());
      }
    }
  }
  return depth;
}

DepthImage render_depth(const SyntheticScene& scene, const Pose& T_WS,
                        const LidarIntrinsics& intrinsics) {
  DepthImage depth(intrinsics.num_azimuth, intrinsics.num_elevation);
  const Eigen::Vector3d origin = T_WS.t;
  if (scene.sdf(origin) < kHitEpsilon) {
    return depth;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (int row = 0; row < intrinsics.num_elevation; ++row) {
    for (int col = 0; col < intrinsics.num_azimuth; ++col) {
      const Eigen::Vector3d dir_s =
          intrinsics.ray_direction(col + 0.5, row + 0.5);
      const double t =
          trace(scene, origin, T_WS.R * dir_s, intrinsics.max_range);
      if (t >= intrinsics.min_range) {
        depth.at(col, row) = static_cast<float>(t);
      }
    }
  }
  return depth;
}

ColorImage render_color(const SyntheticScene& scene, const Pose& T_WS,
                        const CameraIntrinsics& intrinsics) {
  ColorImage color(intrinsics.width, intrinsics.height);
  const Eigen::Vector3d origin = T_WS.t;
  if (scene.sdf(origin) < kHitEpsilon) {
    return color;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (int row = 0; row < intrinsics.height; ++row) {
    for (int col = 0; col < intrinsics.width; ++col) {
      const Eigen::Vector3d dir_s =
          intrinsics.ray_direction(col + 0.5, row + 0.5);
      const Eigen::Vector3d dir_w = T_WS.R * dir_s;
      const double t_max = intrinsics.max_depth / dir_s.z();
      const double t = trace(scene, origin, dir_w, t_max);
      if (t < 0.0) {
        continue;
      }
      const Eigen::Vector3d n = scene.sdf_gradient(origin + t * dir_w);
      for (int ch = 0; ch < 3; ++ch) {
        const double value = 255.0 * 0.5 * (n[ch] + 1.0);
        color.at(col, row)[ch] =
            static_cast<uint8_t>(std::clamp(value, 0.0, 255.0));
      }
    }
  }
  return color;
}

}  // namespace voxmap
