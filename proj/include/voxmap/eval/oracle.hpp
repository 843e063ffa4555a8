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

#include <cstdint>
#include <vector>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/esdf/integrator.hpp"

namespace voxmap {

/// Exact nearest-site distance field, O(observed voxels x sites).
///
/// Takes a layer whose flags already hold the ground-truth classification
/// (as produced by mark_sites or update_esdf) and recomputes every distance
/// by exhaustive search over all sites, using the same state encoding:
/// saturation at the configured maximum outside and at the interior band
/// cap inside, and ties broken towards the lexicographically smallest
/// absolute site coordinate. Intended for validation only; it is far too
/// slow for real maps.
///
/// Throws std::invalid_argument when the layer contains no sites or when
/// the allocated domain exceeds one million voxels (the quadratic scan
/// would not terminate in reasonable time beyond that).
Layer<EsdfVoxel> brute_force_esdf(const Layer<EsdfVoxel>& marked,
                                  const EsdfConfig& cfg);

/// Field-level comparison of two distance layers over their common blocks.
struct EsdfComparison {
  uint64_t compared = 0;         ///< voxels observed in both layers
  uint64_t exact = 0;            ///< same squared distance and same side
  uint64_t within_one_voxel = 0; ///< |d_a - d_b| <= voxel size
  uint64_t flag_mismatches = 0;  ///< observed/site/inside flags differ
  double max_abs_error = 0.0;    ///< largest |d_a - d_b| in meters
};

EsdfComparison compare_esdf(const Layer<EsdfVoxel>& a,
                            const Layer<EsdfVoxel>& b);

/// True iff every voxel of every allocated block is bitwise identical and
/// both layers allocate exactly the same blocks.
bool esdf_identical(const Layer<EsdfVoxel>& a, const Layer<EsdfVoxel>& b);

}  // namespace voxmap
