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

#include <algorithm>
#include <array>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "voxmap/core/indexing.hpp"

namespace voxmap {

class MapCapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense 8x8x8 cube of voxels, linearized x-fastest.
template <typename VoxelT>
struct VoxelBlock {
  std::array<VoxelT, kVoxelsPerBlock> voxels{};

  VoxelT& voxel(const VoxelIndex& v) { return voxels[linear_voxel_index(v)]; }
  const VoxelT& voxel(const VoxelIndex& v) const {
    return voxels[linear_voxel_index(v)];
  }
};

/// Sparse two-level grid: a hash map from block index to dense blocks.
/// Blocks are created only through allocate_block/get_or_allocate and are
/// never destroyed; handles stay valid while the layer lives.
template <typename VoxelT>
class Layer {
 public:
  using BlockType = VoxelBlock<VoxelT>;

  explicit Layer(double voxel_size, size_t max_blocks = kDefaultMaxBlocks)
      : voxel_size_(voxel_size), max_blocks_(max_blocks) {
    if (!(voxel_size > 0.0)) {
      throw std::invalid_argument("Layer: voxel_size must be positive");
    }
  }

  double voxel_size() const { return voxel_size_; }
  double block_size() const { return voxel_size_ * kVoxelsPerSide; }
  size_t num_blocks() const { return blocks_.size(); }

  bool has_block(const GridIndex& g) const { return blocks_.count(g) > 0; }

  BlockType* block_ptr(const GridIndex& g) {
    auto it = blocks_.find(g);
    return it == blocks_.end() ? nullptr : it->second.get();
  }
  const BlockType* block_ptr(const GridIndex& g) const {
    auto it = blocks_.find(g);
    return it == blocks_.end() ? nullptr : it->second.get();
  }

  BlockType& get_or_allocate(const GridIndex& g) {
    auto it = blocks_.find(g);
    if (it != blocks_.end()) {
      return *it->second;
    }
    if (blocks_.size() >= max_blocks_) {
      throw MapCapacityError("Layer: block capacity exhausted");
    }
    auto block = std::make_unique<BlockType>();
    BlockType& ref = *block;
    blocks_.emplace(g, std::move(block));
    return ref;
  }

  /// Voxel lookup by global voxel index; nullptr when the block is absent.
  const VoxelT* voxel_ptr(const GlobalVoxelIndex& gv) const {
    const BlockType* b = block_ptr(block_of_global_voxel(gv));
    return b ? &b->voxel(local_voxel_of_global(gv)) : nullptr;
  }
  VoxelT* voxel_ptr(const GlobalVoxelIndex& gv) {
    BlockType* b = block_ptr(block_of_global_voxel(gv));
    return b ? &b->voxel(local_voxel_of_global(gv)) : nullptr;
  }

  /// Deep copy. Copies are explicit because blocks can be large.
  Layer clone() const {
    Layer out(voxel_size_, max_blocks_);
    for (const auto& [g, block] : blocks_) {
      out.blocks_.emplace(g, std::make_unique<BlockType>(*block));
    }
    return out;
  }

  /// Block indices sorted lexicographically: deterministic iteration order
  /// for serialization and parallel dispatch.
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
  static constexpr size_t kDefaultMaxBlocks = size_t{1} << 30;

  double voxel_size_;
  size_t max_blocks_;
  std::unordered_map<GridIndex, std::unique_ptr<BlockType>> blocks_;
};

}  // namespace voxmap
