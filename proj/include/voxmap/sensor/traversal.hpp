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
#include <cstdint>
#include <limits>

#include "voxmap/core/indexing.hpp"

namespace voxmap {

/// Amanatides-Woo traversal of the uniform grid with the given cell size,
/// visiting every cell the segment [start, end] passes through, in order,
/// start cell included. visit(GridIndex) is called once per cell.
template <typename Visitor>
void traverse_grid(const Eigen::Vector3d& start, const Eigen::Vector3d& end,
                   double cell_size, Visitor&& visit) {
  const Eigen::Vector3d d = end - start;
  Eigen::Vector3i cell(
      static_cast<int>(std::floor(start.x() / cell_size)),
      static_cast<int>(std::floor(start.y() / cell_size)),
      static_cast<int>(std::floor(start.z() / cell_size)));
  const Eigen::Vector3i end_cell(
      static_cast<int>(std::floor(end.x() / cell_size)),
      static_cast<int>(std::floor(end.y() / cell_size)),
      static_cast<int>(std::floor(end.z() / cell_size)));

  Eigen::Vector3i step(0, 0, 0);
  Eigen::Vector3d t_max(std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity());
  Eigen::Vector3d t_delta = t_max;
  for (int i = 0; i < 3; ++i) {
    if (d[i] > 0.0) {
      step[i] = 1;
      t_delta[i] = cell_size / d[i];
      t_max[i] = ((cell[i] + 1) * cell_size - start[i]) / d[i];
    } else if (d[i] < 0.0) {
      step[i] = -1;
      t_delta[i] = -cell_size / d[i];
      t_max[i] = (cell[i] * cell_size - start[i]) / d[i];
    }
  }

  visit(GridIndex{cell.x(), cell.y(), cell.z()});
  // Upper bound on the number of boundary crossings, plus slack for grazing.
  int guard = (end_cell - cell).cwiseAbs().sum() + 3;
  while (guard-- > 0) {
    int axis = 0;
    if (t_max.y() < t_max.x()) axis = 1;
    if (t_max.z() < t_max[axis]) axis = 2;
    if (t_max[axis] > 1.0) {
      break;
    }
    cell[axis] += step[axis];
    t_max[axis] += t_delta[axis];
    visit(GridIndex{cell.x(), cell.y(), cell.z()});
  }
}

}  // namespace voxmap
