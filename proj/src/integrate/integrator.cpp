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

#include "voxmap/integrate/integrator.hpp"

#include <cstring>
#include <stdexcept>

#include "voxmap/integrate/updates.hpp"
#include "voxmap/sensor/view.hpp"

namespace voxmap {
namespace {

void check_frame(const Pose& T_LS, int img_w, int img_h, int sensor_w,
                 int sensor_h) {
  if (!T_LS.valid()) {
    throw InvalidPoseError("integrate: degenerate sensor pose");
  }
  if (img_w != sensor_w || img_h != sensor_h) {
    throw std::invalid_argument("integrate: image size does not match intrinsics");
  }
}

DepthSample sample_depth(const DepthImage& depth, double u, double v,
                         DepthSampleMode mode, float max_gap) {
  return mode == DepthSampleMode::kNearest
             ? sample_depth_nearest(depth, u, v)
             : sample_depth_linear(depth, u, v, max_gap);
}

template <typename SensorT>
int sensor_width(const SensorT& s);
template <>
int sensor_width(const CameraIntrinsics& s) { return s.width; }
template <>
int sensor_width(const LidarIntrinsics& s) { return s.num_azimuth; }
template <typename SensorT>
int sensor_height(const SensorT& s);
template <>
int sensor_height(const CameraIntrinsics& s) { return s.height; }
template <>
int sensor_height(const LidarIntrinsics& s) { return s.num_elevation; }

template <typename SensorT>
DepthSampleMode sample_mode(const SensorT&, const IntegratorConfig& cfg);
template <>
DepthSampleMode sample_mode(const CameraIntrinsics&,
                            const IntegratorConfig& cfg) {
  return cfg.camera_sample;
}
template <>
DepthSampleMode sample_mode(const LidarIntrinsics&,
                            const IntegratorConfig& cfg) {
  return cfg.lidar_sample;
}

/// Core voxel-projective loop shared by all layer/sensor combinations.
/// update(voxel, d_p, depth_sample) returns the new voxel value.
template <typename VoxelT, typename SensorT, typename UpdateFn>
std::vector<GridIndex> integrate_impl(Layer<VoxelT>& layer,
                                      const DepthImage& depth,
                                      const Pose& T_LS, const SensorT& sensor,
                                      const IntegratorConfig& cfg,
                                      UpdateFn&& update) {
  check_frame(T_LS, depth.width, depth.height, sensor_width(sensor),
              sensor_height(sensor));
  const ViewConfig view_cfg{cfg.max_integration_distance, cfg.truncation,
                            cfg.view_pixel_subsample};
  const std::vector<GridIndex> candidates =
      blocks_in_view(T_LS, sensor, depth, layer.block_size(), view_cfg);

  std::vector<VoxelBlock<VoxelT>*> blocks(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    blocks[i] = &layer.get_or_allocate(candidates[i]);
  }

  const Pose T_SL = T_LS.inverse();
  const DepthSampleMode mode = sample_mode(sensor, cfg);
  const double voxel_size = layer.voxel_size();
  const double max_voxel_depth =
      cfg.max_integration_distance + cfg.truncation;
  std::vector<uint8_t> changed(candidates.size(), 0);

#pragma omp parallel for schedule(dynamic, 4) if (cfg.parallel)
  for (size_t i = 0; i < candidates.size(); ++i) {
    const GridIndex g = candidates[i];
    VoxelBlock<VoxelT>& block = *blocks[i];
    bool block_changed = false;
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const VoxelIndex v = voxel_index_from_linear(lin);
      const Eigen::Vector3d p_S = T_SL * voxel_center(g, v, voxel_size);
      const double d_v = sensor.depth_of(p_S);
      if (!(d_v > 0.0) || d_v > max_voxel_depth) {
        continue;
      }
      double u = 0.0, w = 0.0;
      if (!sensor.project(p_S, &u, &w) || !sensor.contains(u, w)) {
        continue;
      }
      const DepthSample s = sample_depth(depth, u, w, mode, cfg.max_sample_gap);
      if (!s.valid) {
        continue;
      }
      const float d_p = s.depth - static_cast<float>(d_v);
      VoxelT& voxel = block.voxels[lin];
      const VoxelT updated = update(voxel, d_p, s.depth);
      if (std::memcmp(&updated, &voxel, sizeof(VoxelT)) != 0) {
        voxel = updated;
        block_changed = true;
      }
    }
    changed[i] = block_changed ? 1 : 0;
  }

  std::vector<GridIndex> updated;  // candidates are sorted, so this is too
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (changed[i]) {
      updated.push_back(candidates[i]);
    }
  }
  return updated;
}

template <typename SensorT>
std::vector<GridIndex> integrate_tsdf(Layer<TsdfVoxel>& layer,
                                      const DepthImage& depth,
                                      const Pose& T_LS, const SensorT& sensor,
                                      const IntegratorConfig& cfg) {
  return integrate_impl(
      layer, depth, T_LS, sensor, cfg,
      [&cfg](const TsdfVoxel& voxel, float d_p, float d_measured) {
        return tsdf_update(voxel, d_p, weight_for_depth(d_measured, cfg), cfg);
      });
}

template <typename SensorT>
std::vector<GridIndex> integrate_occupancy(Layer<OccupancyVoxel>& layer,
                                           const DepthImage& depth,
                                           const Pose& T_LS,
                                           const SensorT& sensor,
                                           const IntegratorConfig& cfg) {
  return integrate_impl(layer, depth, T_LS, sensor, cfg,
                        [&cfg](const OccupancyVoxel& voxel, float d_p, float) {
                          return occupancy_update(voxel, d_p, cfg);
                        });
}

}  // namespace

std::vector<GridIndex> integrate_depth(Layer<TsdfVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const CameraIntrinsics& camera,
                                       const IntegratorConfig& cfg) {
  return integrate_tsdf(layer, depth, T_LS, camera, cfg);
}
std::vector<GridIndex> integrate_depth(Layer<TsdfVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const LidarIntrinsics& lidar,
                                       const IntegratorConfig& cfg) {
  return integrate_tsdf(layer, depth, T_LS, lidar, cfg);
}
std::vector<GridIndex> integrate_depth(Layer<OccupancyVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const CameraIntrinsics& camera,
                                       const IntegratorConfig& cfg) {
  return integrate_occupancy(layer, depth, T_LS, camera, cfg);
}
std::vector<GridIndex> integrate_depth(Layer<OccupancyVoxel>& layer,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const LidarIntrinsics& lidar,
                                       const IntegratorConfig& cfg) {
  return integrate_occupancy(layer, depth, T_LS, lidar, cfg);
}

std::vector<GridIndex> integrate_color(Layer<ColorVoxel>& color_layer,
                                       const ColorImage& color,
                                       const DepthImage& depth,
                                       const Pose& T_LS,
                                       const CameraIntrinsics& camera,
                                       const Layer<TsdfVoxel>& tsdf_layer,
                                       const IntegratorConfig& cfg) {
  check_frame(T_LS, color.width, color.height, camera.width, camera.height);
  if (depth.width != camera.width || depth.height != camera.height) {
    throw std::invalid_argument("integrate_color: depth size mismatch");
  }
  const ViewConfig view_cfg{cfg.max_integration_distance, cfg.truncation,
                            cfg.view_pixel_subsample};
  const std::vector<GridIndex> candidates = blocks_in_view(
      T_LS, camera, depth, color_layer.block_size(), view_cfg);

  // Color blocks exist only where the TSDF holds surface-band voxels.
  const float eps = static_cast<float>(cfg.truncation);
  std::vector<GridIndex> work;
  std::vector<const VoxelBlock<TsdfVoxel>*> tsdf_blocks;
  std::vector<VoxelBlock<ColorVoxel>*> color_blocks;
  for (const GridIndex& g : candidates) {
    const VoxelBlock<TsdfVoxel>* tb = tsdf_layer.block_ptr(g);
    if (tb == nullptr) {
      continue;
    }
    bool any_band = false;
    for (const TsdfVoxel& tv : tb->voxels) {
      if (tv.weight > 0.0f && std::abs(tv.distance) <= eps) {
        any_band = true;
        break;
      }
    }
    if (!any_band) {
      continue;
    }
    work.push_back(g);
    tsdf_blocks.push_back(tb);
    color_blocks.push_back(&color_layer.get_or_allocate(g));
  }

  const Pose T_SL = T_LS.inverse();
  const double voxel_size = color_layer.voxel_size();
  std::vector<uint8_t> changed(work.size(), 0);

#pragma omp parallel for schedule(dynamic, 4) if (cfg.parallel)
  for (size_t i = 0; i < work.size(); ++i) {
    const GridIndex g = work[i];
    bool block_changed = false;
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const TsdfVoxel& tv = tsdf_blocks[i]->voxels[lin];
      if (!(tv.weight > 0.0f) || std::abs(tv.distance) > eps) {
        continue;
      }
      const VoxelIndex v = voxel_index_from_linear(lin);
      const Eigen::Vector3d p_S = T_SL * voxel_center(g, v, voxel_size);
      double u = 0.0, w = 0.0;
      if (!camera.project(p_S, &u, &w) || !camera.contains(u, w)) {
        continue;
      }
      bool valid = false;
      const std::array<uint8_t, 3> rgb = sample_color_nearest(color, u, w, &valid);
      if (!valid) {
        continue;
      }
      ColorVoxel& voxel = color_blocks[i]->voxels[lin];
      const ColorVoxel updated = color_update(voxel, rgb, cfg);
      if (std::memcmp(&updated, &voxel, sizeof(ColorVoxel)) != 0) {
        voxel = updated;
        block_changed = true;
      }
    }
    changed[i] = block_changed ? 1 : 0;
  }

  std::vector<GridIndex> updated;
  for (size_t i = 0; i < work.size(); ++i) {
    if (changed[i]) {
      updated.push_back(work[i]);
    }
  }
  return updated;
}

}  // namespace voxmap
