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

#include "voxmap/io/slice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "voxmap/core/indexing.hpp"
#include "voxmap/core/serialization.hpp"
#include "voxmap/esdf/integrator.hpp"

namespace voxmap {

void save_esdf_slice(const Layer<EsdfVoxel>& esdf, double z,
                     const std::string& path) {
  const std::vector<GridIndex> indices = esdf.sorted_indices();
  if (indices.empty()) {
    throw std::invalid_argument("save_esdf_slice: layer has no blocks");
  }
  const double vs = esdf.voxel_size();
  const int64_t row =
      static_cast<int64_t>(std::floor(z / vs));  // global voxel z index

  int64_t min_x = std::numeric_limits<int64_t>::max();
  int64_t max_x = std::numeric_limits<int64_t>::min();
  int64_t min_y = min_x;
  int64_t max_y = max_x;
  for (const GridIndex& g : indices) {
    min_x = std::min(min_x, static_cast<int64_t>(g.x) * kVoxelsPerSide);
    max_x = std::max(max_x, static_cast<int64_t>(g.x) * kVoxelsPerSide +
                                kVoxelsPerSide - 1);
    min_y = std::min(min_y, static_cast<int64_t>(g.y) * kVoxelsPerSide);
    max_y = std::max(max_y, static_cast<int64_t>(g.y) * kVoxelsPerSide +
                                kVoxelsPerSide - 1);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# esdf slice, z=%.9g, voxel_size=%.9g\n",
                (static_cast<double>(row) + 0.5) * vs, vs);
  out << buf << "x,y,distance\n";
  for (int64_t y = min_y; y <= max_y; ++y) {
    for (int64_t x = min_x; x <= max_x; ++x) {
      const GlobalVoxelIndex gv{x, y, row};
      const VoxelBlock<EsdfVoxel>* block =
          esdf.block_ptr(block_of_global_voxel(gv));
      double distance = std::numeric_limits<double>::quiet_NaN();
      if (block != nullptr) {
        const EsdfVoxel& v =
            block->voxels[linear_voxel_index(local_voxel_of_global(gv))];
        if (v.observed()) {
          distance = esdf_distance(v, vs);
        }
      }
      const Eigen::Vector3d center = global_voxel_center(gv, vs);
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", center.x(),
                    center.y(), distance);
      out << buf;
    }
  }
  if (!out) {
    throw IoError("failed writing: " + path);
  }
}

}  // namespace voxmap
