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

#include <array>
#include <cstdint>
#include <vector>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/mesh/mesh_layer.hpp"

namespace voxmap {

/// Parameters for marching-cubes surface extraction.
struct MeshConfig {
  /// Cube corners whose TSDF weight is below this leave the cube inactive,
  /// which excludes unobserved voxels from meshing.
  float min_weight = 1e-4f;

  /// Extract blocks in parallel inside update_mesh.
  bool parallel = true;
};

namespace mc {

/// Corner numbering of the marching cube: bit i of a configuration is set
/// when corner i lies on the negative (interior) side of the surface.
extern const int kCornerOffsets[8][3];

/// The two corners joined by each of the twelve cube edges.
extern const int kEdgeCorners[12][2];

/// Triangulation of each of the 256 sign configurations as edge-index
/// triples, -1 terminated, at most five triangles per configuration.
extern const int8_t kTriTable[256][16];

/// Bit mask of the edges crossed by the surface for each configuration,
/// derived from the corner signs (bit e set when the corners of edge e lie
/// on opposite sides).
std::array<uint16_t, 256> make_edge_table();

}  // namespace mc

/// Runs marching cubes over the 8x8x8 cube lattice of block g. Cube corners
/// are voxel centers; the +x/+y/+z voxel layers are read from the face
/// neighbors so surfaces crossing block faces are stitched without cracks.
/// Cubes that would need an edge- or corner-neighbor voxel (or a missing
/// face neighbor, or any corner below min_weight) are skipped. Vertices are
/// welded per lattice edge within the block; triangles are wound so face
/// normals point from negative to positive distances. When a color layer is
/// given, each vertex samples the color voxel nearest to its position.
///
/// Throws std::invalid_argument when block g is not allocated.
MeshBlock mesh_block(const Layer<TsdfVoxel>& tsdf, const GridIndex& g,
                     const MeshConfig& cfg = {},
                     const Layer<ColorVoxel>* color = nullptr);

/// Re-meshes every updated block plus the -face neighbors whose boundary
/// cubes read it, replacing their entries in the mesh layer. Blocks outside
/// that set are left untouched. Returns the sorted set of re-meshed indices.
std::vector<GridIndex> update_mesh(MeshLayer& mesh,
                                   const Layer<TsdfVoxel>& tsdf,
                                   const std::vector<GridIndex>& updated_blocks,
                                   const MeshConfig& cfg = {},
                                   const Layer<ColorVoxel>* color = nullptr);

}  // namespace voxmap
