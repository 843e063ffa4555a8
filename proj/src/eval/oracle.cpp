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

#include "voxmap/eval/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace voxmap {

Layer<EsdfVoxel> brute_force_esdf(const Layer<EsdfVoxel>& marked,
                                  const EsdfConfig& cfg) {
  constexpr uint64_t kMaxDomainVoxels = 1000000;
  if (marked.num_blocks() * static_cast<uint64_t>(kVoxelsPerBlock) >
      kMaxDomainVoxels) {
    throw std::invalid_argument(
        "brute_force_esdf: domain exceeds one million voxels");
  }
  const int32_t max_sq = esdf_max_squared(cfg, marked.voxel_size());
  const int32_t cap_sq = esdf_interior_cap_squared(cfg, marked.voxel_size());

  std::vector<GlobalVoxelIndex> sites;
  for (const GridIndex& g : marked.sorted_indices()) {
    const VoxelBlock<EsdfVoxel>& blk = *marked.block_ptr(g);
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      if (blk.voxels[lin].is_site()) {
        sites.push_back(global_voxel_index(g, voxel_index_from_linear(lin)));
      }
    }
  }
  if (sites.empty()) {
    throw std::invalid_argument("brute_force_esdf: layer contains no sites");
  }

  Layer<EsdfVoxel> out(marked.voxel_size());
  for (const GridIndex& g : marked.sorted_indices()) {
    const VoxelBlock<EsdfVoxel>& src = *marked.block_ptr(g);
    VoxelBlock<EsdfVoxel>& dst = out.get_or_allocate(g);
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const EsdfVoxel& sv = src.voxels[lin];
      EsdfVoxel& dv = dst.voxels[lin];
      if (!sv.observed()) {
        dv = EsdfVoxel{};
        continue;
      }
      dv.flags = sv.flags;
      dv.reserved = 0;
      if (sv.is_site()) {
        dv.squared_distance = 0;
        dv.parent_x = dv.parent_y = dv.parent_z = 0;
        continue;
      }
      const GlobalVoxelIndex me =
          global_voxel_index(g, voxel_index_from_linear(lin));
      int64_t best = std::numeric_limits<int64_t>::max();
      GlobalVoxelIndex best_site{0, 0, 0};
      for (const GlobalVoxelIndex& s : sites) {
        const int64_t dx = s.x - me.x;
        const int64_t dy = s.y - me.y;
        const int64_t dz = s.z - me.z;
        const int64_t sq = dx * dx + dy * dy + dz * dz;
        if (sq < best ||
            (sq == best && std::tie(s.x, s.y, s.z) <
                               std::tie(best_site.x, best_site.y,
                                        best_site.z))) {
          best = sq;
          best_site = s;
        }
      }
      const int32_t limit = sv.inside() ? cap_sq : max_sq;
      if (best > limit) {
        dv.squared_distance = limit;
        dv.parent_x = dv.parent_y = dv.parent_z = 0;
      } else {
        dv.squared_distance = static_cast<int32_t>(best);
        dv.parent_x = static_cast<int16_t>(best_site.x - me.x);
        dv.parent_y = static_cast<int16_t>(best_site.y - me.y);
        dv.parent_z = static_cast<int16_t>(best_site.z - me.z);
      }
    }
  }
  return out;
}

EsdfComparison compare_esdf(const Layer<EsdfVoxel>& a,
                            const Layer<EsdfVoxel>& b) {
  EsdfComparison cmp;
  const double vs = a.voxel_size();
  for (const GridIndex& g : a.sorted_indices()) {
    const VoxelBlock<EsdfVoxel>* bb = b.block_ptr(g);
    if (bb == nullptr) {
      continue;
    }
    const VoxelBlock<EsdfVoxel>& ba = *a.block_ptr(g);
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const EsdfVoxel& va = ba.voxels[lin];
      const EsdfVoxel& vb = bb->voxels[lin];
      if (!va.observed() || !vb.observed()) {
        continue;
      }
      ++cmp.compared;
      if (va.flags != vb.flags) {
        ++cmp.flag_mismatches;
      }
      const double da = esdf_distance(va, vs);
      const double db = esdf_distance(vb, vs);
      const double err = std::abs(da - db);
      cmp.max_abs_error = std::max(cmp.max_abs_error, err);
      if (va.squared_distance == vb.squared_distance &&
          va.inside() == vb.inside()) {
        ++cmp.exact;
      }
      if (err <= vs) {
        ++cmp.within_one_voxel;
      }
    }
  }
  return cmp;
}

bool esdf_identical(const Layer<EsdfVoxel>& a, const Layer<EsdfVoxel>& b) {
  const std::vector<GridIndex> ia = a.sorted_indices();
  const std::vector<GridIndex> ib = b.sorted_indices();
  if (ia != ib) {
    return false;
  }
  for (const GridIndex& g : ia) {
    const VoxelBlock<EsdfVoxel>& ba = *a.block_ptr(g);
    const VoxelBlock<EsdfVoxel>& bb = *b.block_ptr(g);
    if (std::memcmp(ba.voxels.data(), bb.voxels.data(),
                    sizeof(EsdfVoxel) * kVoxelsPerBlock) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace voxmap
