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

#include "voxmap/mesh/marching_cubes.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "voxmap/core/indexing.hpp"

namespace voxmap {
namespace {

constexpr int kGrid = kVoxelsPerSide + 1;  // dilated corner lattice per block

/// TSDF corner samples for one block plus the +face neighbor layers. Corners
/// that would come from edge/corner neighbors stay unknown, so the cubes
/// along the block's +edges are skipped; their surface belongs to the
/// neighbors that own those cubes.
struct CornerGrid {
  float distance[kGrid][kGrid][kGrid];
  bool known[kGrid][kGrid][kGrid] = {};
};

void fill_corners(const Layer<TsdfVoxel>& tsdf, const GridIndex& g,
                  float min_weight, CornerGrid* grid) {
  const auto sample = [&](const VoxelBlock<TsdfVoxel>& block, int bx, int by,
                          int bz, int x, int y, int z) {
    const TsdfVoxel& v = block.voxels[size_t(linear_voxel_index({bx, by, bz}))];
    if (v.weight >= min_weight) {
      grid->distance[x][y][z] = v.distance;
      grid->known[x][y][z] = true;
    }
  };
  const VoxelBlock<TsdfVoxel>* core = tsdf.block_ptr(g);
  for (int z = 0; z < kVoxelsPerSide; ++z) {
    for (int y = 0; y < kVoxelsPerSide; ++y) {
      for (int x = 0; x < kVoxelsPerSide; ++x) {
        sample(*core, x, y, z, x, y, z);
      }
    }
  }
  if (const auto* nx = tsdf.block_ptr({g.x + 1, g.y, g.z})) {
    for (int z = 0; z < kVoxelsPerSide; ++z) {
      for (int y = 0; y < kVoxelsPerSide; ++y) {
        sample(*nx, 0, y, z, kVoxelsPerSide, y, z);
      }
    }
  }
  if (const auto* ny = tsdf.block_ptr({g.x, g.y + 1, g.z})) {
    for (int z = 0; z < kVoxelsPerSide; ++z) {
      for (int x = 0; x < kVoxelsPerSide; ++x) {
        sample(*ny, x, 0, z, x, kVoxelsPerSide, z);
      }
    }
  }
  if (const auto* nz = tsdf.block_ptr({g.x, g.y, g.z + 1})) {
    for (int y = 0; y < kVoxelsPerSide; ++y) {
      for (int x = 0; x < kVoxelsPerSide; ++x) {
        sample(*nz, x, y, 0, x, y, kVoxelsPerSide);
      }
    }
  }
}

/// Canonical lattice key of cube edge e at cube (cx, cy, cz): the lattice
/// coordinates of the edge's lower corner plus the edge axis.
uint32_t edge_lattice_key(int cx, int cy, int cz, int e) {
  const int* a = mc::kCornerOffsets[mc::kEdgeCorners[e][0]];
  const int* b = mc::kCornerOffsets[mc::kEdgeCorners[e][1]];
  const int x = cx + std::min(a[0], b[0]);
  const int y = cy + std::min(a[1], b[1]);
  const int z = cz + std::min(a[2], b[2]);
  const int axis = (a[0] != b[0]) ? 0 : (a[1] != b[1]) ? 1 : 2;
  return uint32_t(x) | (uint32_t(y) << 4) | (uint32_t(z) << 8) |
         (uint32_t(axis) << 12);
}

}  // namespace

MeshBlock mesh_block(const Layer<TsdfVoxel>& tsdf, const GridIndex& g,
                     const MeshConfig& cfg, const Layer<ColorVoxel>* color) {
  if (!tsdf.has_block(g)) {
    throw std::invalid_argument("mesh_block: block is not allocated");
  }
  const double vs = tsdf.voxel_size();
  const Eigen::Vector3d origin = block_origin(g, vs);

  CornerGrid grid;
  fill_corners(tsdf, g, cfg.min_weight, &grid);

  MeshBlock mesh;
  std::unordered_map<uint32_t, uint32_t> welded;
  // Fallback normal per vertex: the edge direction from the negative to the
  // positive corner, used when all incident triangles are degenerate.
  std::vector<Eigen::Vector3f> fallback;
  std::vector<Eigen::Vector3f> accum;

  const auto corner_center = [&](int x, int y, int z) {
    return Eigen::Vector3d(origin.x() + (x + 0.5) * vs,
                           origin.y() + (y + 0.5) * vs,
                           origin.z() + (z + 0.5) * vs);
  };

  for (int cz = 0; cz < kVoxelsPerSide; ++cz) {
    for (int cy = 0; cy < kVoxelsPerSide; ++cy) {
      for (int cx = 0; cx < kVoxelsPerSide; ++cx) {
        float d[8];
        int config = 0;
        bool active = true;
        for (int i = 0; i < 8; ++i) {
          const int x = cx + mc::kCornerOffsets[i][0];
          const int y = cy + mc::kCornerOffsets[i][1];
          const int z = cz + mc::kCornerOffsets[i][2];
          if (!grid.known[x][y][z]) {
            active = false;
            break;
          }
          d[i] = grid.distance[x][y][z];
          if (d[i] < 0.0f) {
            config |= 1 << i;
          }
        }
        if (!active || config == 0 || config == 255) {
          continue;
        }

        const auto vertex_on_edge = [&](int e) -> uint32_t {
          const uint32_t key = edge_lattice_key(cx, cy, cz, e);
          const auto it = welded.find(key);
          if (it != welded.end()) {
            return it->second;
          }
          const int a = mc::kEdgeCorners[e][0];
          const int b = mc::kEdgeCorners[e][1];
          const double da = d[a];
          const double db = d[b];
          const double t = da / (da - db);
          const Eigen::Vector3d pa =
              corner_center(cx + mc::kCornerOffsets[a][0],
                            cy + mc::kCornerOffsets[a][1],
                            cz + mc::kCornerOffsets[a][2]);
          const Eigen::Vector3d pb =
              corner_center(cx + mc::kCornerOffsets[b][0],
                            cy + mc::kCornerOffsets[b][1],
                            cz + mc::kCornerOffsets[b][2]);
          const Eigen::Vector3d p = pa + t * (pb - pa);
          const uint32_t idx = uint32_t(mesh.vertices.size());
          mesh.vertices.push_back(p.cast<float>());
          Eigen::Vector3f dir = (pb - pa).cast<float>().normalized();
          fallback.push_back(da < 0.0 ? dir : Eigen::Vector3f(-dir));
          accum.emplace_back(Eigen::Vector3f::Zero());
          welded.emplace(key, idx);
          return idx;
        };

        const int8_t* row = mc::kTriTable[config];
        for (int t = 0; row[t] != -1; t += 3) {
          const uint32_t i0 = vertex_on_edge(row[t]);
          // The table winds toward the negative side; swap so face normals
          // follow the distance gradient (negative to positive).
          const uint32_t i1 = vertex_on_edge(row[t + 2]);
          const uint32_t i2 = vertex_on_edge(row[t + 1]);
          mesh.triangles.push_back({i0, i1, i2});
          const Eigen::Vector3f n =
              (mesh.vertices[i1] - mesh.vertices[i0])
                  .cross(mesh.vertices[i2] - mesh.vertices[i0]);
          accum[i0] += n;
          accum[i1] += n;
          accum[i2] += n;
        }
      }
    }
  }

  mesh.normals.resize(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const float norm = accum[i].norm();
    mesh.normals[i] = norm > 1e-12f ? Eigen::Vector3f(accum[i] / norm)
                                    : fallback[i];
  }

  if (color != nullptr) {
    mesh.colors.resize(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
      const GlobalVoxelIndex gv = position_to_global_voxel(
          mesh.vertices[i].cast<double>(), color->voxel_size());
      const ColorVoxel* cv = color->voxel_ptr(gv);
      if (cv != nullptr && cv->weight > 0.0f) {
        mesh.colors[i] = {cv->r, cv->g, cv->b};
      } else {
        mesh.colors[i] = {128, 128, 128};
      }
    }
  }
  return mesh;
}

std::vector<GridIndex> update_mesh(MeshLayer& mesh,
                                   const Layer<TsdfVoxel>& tsdf,
                                   const std::vector<GridIndex>& updated_blocks,
                                   const MeshConfig& cfg,
                                   const Layer<ColorVoxel>* color) {
  std::vector<GridIndex> targets;
  for (const GridIndex& g : updated_blocks) {
    const GridIndex candidates[4] = {g,
                                     {g.x - 1, g.y, g.z},
                                     {g.x, g.y - 1, g.z},
                                     {g.x, g.y, g.z - 1}};
    for (const GridIndex& c : candidates) {
      if (tsdf.has_block(c)) {
        targets.push_back(c);
      }
    }
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::vector<MeshBlock> results(targets.size());
#pragma omp parallel for schedule(dynamic, 4) if (cfg.parallel)
  for (size_t i = 0; i < targets.size(); ++i) {
    results[i] = mesh_block(tsdf, targets[i], cfg, color);
  }
  for (size_t i = 0; i < targets.size(); ++i) {
    mesh.get_or_create(targets[i]) = std::move(results[i]);
  }
  return targets;
}

}  // namespace voxmap
