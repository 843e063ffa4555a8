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

#include "voxmap/sensor/view.hpp"

#include <algorithm>
#include <unordered_set>

#include "voxmap/sensor/traversal.hpp"

namespace voxmap {
namespace {

std::vector<GridIndex> dilate_and_sort(
    const std::unordered_set<GridIndex>& touched) {
  std::unordered_set<GridIndex> out;
  out.reserve(touched.size() * 4);
  for (const GridIndex& g : touched) {
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          out.insert(GridIndex{g.x + dx, g.y + dy, g.z + dz});
        }
      }
    }
  }
  std::vector<GridIndex> result(out.begin(), out.end());
  std::sort(result.begin(), result.end());
  return result;
}

/// Casts one ray from the sensor origin through (u, v) to the given depth
/// plus the truncation margin, collecting traversed blocks in layer frame.
template <typename SensorT>
void cast_ray(const Pose& T_LS, const SensorT& sensor, double u, double v,
              double depth, double block_size, const ViewConfig& cfg,
              std::unordered_set<GridIndex>* touched) {
  const double capped = std::min(depth, cfg.max_integration_distance);
  // Extend past the surface so the occupied band behind it is covered.
  const double reach = capped + cfg.truncation;
  const Eigen::Vector3d end_S = sensor.unproject(u, v, reach);
  const Eigen::Vector3d start_L = T_LS.t;
  const Eigen::Vector3d end_L = T_LS * end_S;
  traverse_grid(start_L, end_L, block_size,
                [&](const GridIndex& g) { touched->insert(g); });
}

}  // namespace

std::vector<GridIndex> blocks_in_view(const Pose& T_LS,
                                      const CameraIntrinsics& camera,
                                      const DepthImage& depth,
                                      double block_size,
                                      const ViewConfig& cfg) {
  std::unordered_set<GridIndex> touched;
  const int tile = std::max(1, cfg.pixel_subsample);
  for (int row0 = 0; row0 < depth.height; row0 += tile) {
    for (int col0 = 0; col0 < depth.width; col0 += tile) {
      // One ray per tile, traced to the farthest valid measurement inside
      // the tile so depth discontinuities cannot hide far blocks.
      float tile_max = 0.0f;
      const int row1 = std::min(row0 + tile, depth.height);
      const int col1 = std::min(col0 + tile, depth.width);
      for (int r = row0; r < row1; ++r) {
        for (int c = col0; c < col1; ++c) {
          const float d = depth.at(c, r);
          if (DepthImage::valid_depth(d)) {
            tile_max = std::max(tile_max, d);
          }
        }
      }
      if (tile_max <= 0.0f) {
        continue;
      }
      const double u = 0.5 * (col0 + col1);
      const double v = 0.5 * (row0 + row1);
      cast_ray(T_LS, camera, u, v, tile_max, block_size, cfg, &touched);
    }
  }
  return dilate_and_sort(touched);
}

std::vector<GridIndex> blocks_in_view(const Pose& T_LS,
                                      const LidarIntrinsics& lidar,
                                      const DepthImage& depth,
                                      double block_size,
                                      const ViewConfig& cfg) {
  std::unordered_set<GridIndex> touched;
  for (int row = 0; row < depth.height; ++row) {
    for (int col = 0; col < depth.width; ++col) {
      const float d = depth.at(col, row);
      if (!DepthImage::valid_depth(d)) {
        continue;
      }
      cast_ray(T_LS, lidar, col + 0.5, row + 0.5, d, block_size, cfg,
               &touched);
    }
  }
  return dilate_and_sort(touched);
}

}  // namespace voxmap
