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

#include <memory>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/mesh/mesh_layer.hpp"

namespace voxmap {

/// Co-located named layers sharing one voxel size and origin. Layers are
/// created lazily; absent layers stay null.
struct LayerCake {
  explicit LayerCake(double voxel_size) : voxel_size(voxel_size) {}

  double voxel_size;
  std::unique_ptr<Layer<TsdfVoxel>> tsdf;
  std::unique_ptr<Layer<OccupancyVoxel>> occupancy;
  std::unique_ptr<Layer<ColorVoxel>> color;
  std::unique_ptr<Layer<EsdfVoxel>> esdf;
  std::unique_ptr<MeshLayer> mesh;

  Layer<TsdfVoxel>& require_tsdf() {
    if (!tsdf) tsdf = std::make_unique<Layer<TsdfVoxel>>(voxel_size);
    return *tsdf;
  }
  Layer<OccupancyVoxel>& require_occupancy() {
    if (!occupancy) occupancy = std::make_unique<Layer<OccupancyVoxel>>(voxel_size);
    return *occupancy;
  }
  Layer<ColorVoxel>& require_color() {
    if (!color) color = std::make_unique<Layer<ColorVoxel>>(voxel_size);
    return *color;
  }
  Layer<EsdfVoxel>& require_esdf() {
    if (!esdf) esdf = std::make_unique<Layer<EsdfVoxel>>(voxel_size);
    return *esdf;
  }
  MeshLayer& require_mesh() {
    if (!mesh) mesh = std::make_unique<MeshLayer>(voxel_size);
    return *mesh;
  }
};

}  // namespace voxmap
