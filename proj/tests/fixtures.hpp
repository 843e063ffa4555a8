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
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/esdf/integrator.hpp"

namespace voxmap::testing {

/// A fully observed cubic world populated by spherical obstacles; edits add
/// and remove spheres. Distances are exact sphere-union SDF values clamped
/// to the truncation band, so every voxel stays observed across edits.
struct SphereWorld {
  struct Sphere {
    Eigen::Vector3d center;
    double radius;
  };

  int side_voxels;      // world is [0, side_voxels)^3
  double voxel_size;
  double truncation;
  std::vector<Sphere> spheres;

  double extent() const { return side_voxels * voxel_size; }

  double sdf(const Eigen::Vector3d& p) const {
    double d = 1e9;
    for (const Sphere& s : spheres) {
      d = std::min(d, (p - s.center).norm() - s.radius);
    }
    return d;
  }

  void random_edit(std::mt19937& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const bool add = spheres.empty() || (spheres.size() < 6 && u01(rng) < 0.6);
    if (add) {
      std::uniform_real_distribution<double> pos(0.15 * extent(),
                                                 0.85 * extent());
      std::uniform_real_distribution<double> rad(0.08 * extent(),
                                                 0.25 * extent());
      spheres.push_back({{pos(rng), pos(rng), pos(rng)}, rad(rng)});
    } else {
      std::uniform_int_distribution<size_t> pick(0, spheres.size() - 1);
      spheres.erase(spheres.begin() + pick(rng));
    }
  }

  /// Rewrites the full TSDF region from the current obstacle set and
  /// returns the blocks whose bytes actually changed.
  std::vector<GridIndex> write_tsdf(Layer<TsdfVoxel>& tsdf) const {
    std::vector<GridIndex> changed;
    const int nb = side_voxels / kVoxelsPerSide;
    for (int bz = 0; bz < nb; ++bz) {
      for (int by = 0; by < nb; ++by) {
        for (int bx = 0; bx < nb; ++bx) {
          const GridIndex g{bx, by, bz};
          VoxelBlock<TsdfVoxel>& blk = tsdf.get_or_allocate(g);
          VoxelBlock<TsdfVoxel> next = blk;
          for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
            const Eigen::Vector3d c = global_voxel_center(
                global_voxel_index(g, voxel_index_from_linear(lin)),
                voxel_size);
            next.voxels[lin].distance = static_cast<float>(
                std::clamp(sdf(c), -truncation, truncation));
            next.voxels[lin].weight = 1.0f;
          }
          if (std::memcmp(&next, &blk, sizeof(next)) != 0) {
            blk = next;
            changed.push_back(g);
          }
        }
      }
    }
    return changed;
  }
};

/// From-scratch ESDF over every allocated source block.
inline Layer<EsdfVoxel> batch_esdf(const Layer<TsdfVoxel>& tsdf,
                                   const EsdfConfig& cfg) {
  Layer<EsdfVoxel> esdf(tsdf.voxel_size());
  update_esdf(esdf, tsdf, tsdf.sorted_indices(), cfg);
  return esdf;
}

/// Structural invariants that must hold after every update:
/// sites are zero; parented voxels satisfy the integer identity, point at a
/// real site and respect their side's bound; parentless voxels sit exactly
/// at their side's saturation value; unobserved voxels are all-zero.
inline bool esdf_invariants_hold(const Layer<EsdfVoxel>& esdf,
                                 const EsdfConfig& cfg) {
  const int32_t max_sq = esdf_max_squared(cfg, esdf.voxel_size());
  const int32_t cap_sq = esdf_interior_cap_squared(cfg, esdf.voxel_size());
  for (const GridIndex& g : esdf.sorted_indices()) {
    const VoxelBlock<EsdfVoxel>& blk = *esdf.block_ptr(g);
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const EsdfVoxel& v = blk.voxels[lin];
      if (!v.observed()) {
        if (v != EsdfVoxel{}) {
          return false;
        }
        continue;
      }
      const int32_t limit = v.inside() ? cap_sq : max_sq;
      if (v.is_site()) {
        if (v.squared_distance != 0 || v.has_parent()) {
          return false;
        }
      } else if (v.has_parent()) {
        const int32_t px = v.parent_x, py = v.parent_y, pz = v.parent_z;
        if (v.squared_distance != px * px + py * py + pz * pz ||
            v.squared_distance > limit || v.squared_distance == 0) {
          return false;
        }
        const GlobalVoxelIndex me =
            global_voxel_index(g, voxel_index_from_linear(lin));
        const EsdfVoxel* parent =
            esdf.voxel_ptr({me.x + px, me.y + py, me.z + pz});
        if (parent == nullptr || !parent->is_site()) {
          return false;
        }
      } else if (v.squared_distance != limit) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace voxmap::testing
