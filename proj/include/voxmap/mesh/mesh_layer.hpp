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

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "voxmap/core/indexing.hpp"

namespace voxmap {

/// Triangle soup for one block, with per-block vertex welding.
struct MeshBlock {
  std::vector<Eigen::Vector3f> vertices;  // meters, layer frame
  std::vector<Eigen::Vector3f> normals;   // unit, oriented along +gradient
  std::vector<std::array<uint8_t, 3>> colors;
  std::vector<std::array<uint32_t, 3>> triangles;

  bool empty() const { return triangles.empty(); }
};

/// Sparse per-block meshes co-located with the voxel layers.
class MeshLayer {
 public:
  explicit MeshLayer(double voxel_size) : voxel_size_(voxel_size) {}

  double voxel_size() const { return voxel_size_; }
  size_t num_blocks() const { return blocks_.size(); }

  const MeshBlock* block_ptr(const GridIndex& g) const {
    auto it = blocks_.find(g);
    return it == blocks_.end() ? nullptr : &it->second;
  }
  MeshBlock& get_or_create(const GridIndex& g) { return blocks_[g]; }
  void erase(const GridIndex& g) { blocks_.erase(g); }

  std::vector<GridIndex> sorted_indices() const {
    std::vector<GridIndex> out;
    out.reserve(blocks_.size());
    for (const auto& [g, _] : blocks_) {
      out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  double voxel_size_;
  std::unordered_map<GridIndex, MeshBlock> blocks_;
};

}  // namespace voxmap
