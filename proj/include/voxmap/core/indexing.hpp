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
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>

namespace voxmap {

// Blocks are dense cubes of kVoxelsPerSide^3 voxels; the map is a sparse hash
// of blocks. All index math lives here so every module agrees on the
// position <-> index conventions.
inline constexpr int kVoxelsPerSide = 8;
inline constexpr int kVoxelsPerBlock =
    kVoxelsPerSide * kVoxelsPerSide * kVoxelsPerSide;

/// Integer coordinates of a block in the layer grid.
struct GridIndex {
  int32_t x = 0;
  int32_t y = 0;
  int32_t z = 0;

  friend auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

/// Coordinates of a voxel inside its block, each in [0, kVoxelsPerSide).
struct VoxelIndex {
  int32_t x = 0;
  int32_t y = 0;
  int32_t z = 0;

  friend auto operator<=>(const VoxelIndex&, const VoxelIndex&) = default;
};

/// Global integer voxel coordinates (block index * 8 + in-block index).
struct GlobalVoxelIndex {
  int64_t x = 0;
  int64_t y = 0;
  int64_t z = 0;

  friend auto operator<=>(const GlobalVoxelIndex&,
                          const GlobalVoxelIndex&) = default;
};

/// x-fastest linear index inside a block.
inline int linear_voxel_index(const VoxelIndex& v) {
  return v.x + kVoxelsPerSide * (v.y + kVoxelsPerSide * v.z);
}

inline VoxelIndex voxel_index_from_linear(int lin) {
  return VoxelIndex{lin % kVoxelsPerSide, (lin / kVoxelsPerSide) % kVoxelsPerSide,
                    lin / (kVoxelsPerSide * kVoxelsPerSide)};
}

// floor division by the block side, correct for negatives.
inline int64_t floor_div_side(int64_t a) {
  return a >= 0 ? a / kVoxelsPerSide : -(( -a + kVoxelsPerSide - 1) / kVoxelsPerSide);
}

inline GlobalVoxelIndex global_voxel_index(const GridIndex& g,
                                           const VoxelIndex& v) {
  return GlobalVoxelIndex{int64_t{g.x} * kVoxelsPerSide + v.x,
                          int64_t{g.y} * kVoxelsPerSide + v.y,
                          int64_t{g.z} * kVoxelsPerSide + v.z};
}

inline GridIndex block_of_global_voxel(const GlobalVoxelIndex& gv) {
  return GridIndex{static_cast<int32_t>(floor_div_side(gv.x)),
                   static_cast<int32_t>(floor_div_side(gv.y)),
                   static_cast<int32_t>(floor_div_side(gv.z))};
}

inline VoxelIndex local_voxel_of_global(const GlobalVoxelIndex& gv) {
  const GridIndex b = block_of_global_voxel(gv);
  return VoxelIndex{static_cast<int32_t>(gv.x - int64_t{b.x} * kVoxelsPerSide),
                    static_cast<int32_t>(gv.y - int64_t{b.y} * kVoxelsPerSide),
                    static_cast<int32_t>(gv.z - int64_t{b.z} * kVoxelsPerSide)};
}

/// Global voxel index containing a metric position (meters, layer frame).
inline GlobalVoxelIndex position_to_global_voxel(const Eigen::Vector3d& p,
                                                 double voxel_size) {
  return GlobalVoxelIndex{
      static_cast<int64_t>(std::floor(p.x() / voxel_size)),
      static_cast<int64_t>(std::floor(p.y() / voxel_size)),
      static_cast<int64_t>(std::floor(p.z() / voxel_size))};
}

/// Splits a metric position into (block index, in-block voxel index).
inline void position_to_indices(const Eigen::Vector3d& p, double voxel_size,
                                GridIndex* block, VoxelIndex* voxel) {
  const GlobalVoxelIndex gv = position_to_global_voxel(p, voxel_size);
  *block = block_of_global_voxel(gv);
  *voxel = local_voxel_of_global(gv);
}

/// Metric center of a voxel: (8 g + v + 0.5) * voxel_size per axis.
inline Eigen::Vector3d voxel_center(const GridIndex& g, const VoxelIndex& v,
                                    double voxel_size) {
  return Eigen::Vector3d(
      (double(g.x) * kVoxelsPerSide + v.x + 0.5) * voxel_size,
      (double(g.y) * kVoxelsPerSide + v.y + 0.5) * voxel_size,
      (double(g.z) * kVoxelsPerSide + v.z + 0.5) * voxel_size);
}

inline Eigen::Vector3d global_voxel_center(const GlobalVoxelIndex& gv,
                                           double voxel_size) {
  return Eigen::Vector3d((double(gv.x) + 0.5) * voxel_size,
                         (double(gv.y) + 0.5) * voxel_size,
                         (double(gv.z) + 0.5) * voxel_size);
}

/// Low corner of a block in meters.
inline Eigen::Vector3d block_origin(const GridIndex& g, double voxel_size) {
  const double edge = kVoxelsPerSide * voxel_size;
  return Eigen::Vector3d(g.x * edge, g.y * edge, g.z * edge);
}

inline GridIndex position_to_block_index(const Eigen::Vector3d& p,
                                         double voxel_size) {
  GridIndex g;
  VoxelIndex v;
  position_to_indices(p, voxel_size, &g, &v);
  return g;
}

}  // namespace voxmap

namespace std {

template <>
struct hash<voxmap::GridIndex> {
  size_t operator()(const voxmap::GridIndex& g) const {
    return static_cast<size_t>(
        (static_cast<uint64_t>(static_cast<uint32_t>(g.x)) * 73856093ull) ^
        (static_cast<uint64_t>(static_cast<uint32_t>(g.y)) * 19349669ull) ^
        (static_cast<uint64_t>(static_cast<uint32_t>(g.z)) * 83492791ull));
  }
};

template <>
struct hash<voxmap::GlobalVoxelIndex> {
  size_t operator()(const voxmap::GlobalVoxelIndex& g) const {
    return static_cast<size_t>(
        (static_cast<uint64_t>(g.x) * 73856093ull) ^
        (static_cast<uint64_t>(g.y) * 19349669ull) ^
        (static_cast<uint64_t>(g.z) * 83492791ull));
  }
};

}  // namespace std
