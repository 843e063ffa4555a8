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
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/esdf/integrator.hpp"
#include "voxmap/mesh/mesh_layer.hpp"

namespace voxmap {

/// Summary statistics over absolute errors.
struct ErrorStats {
  uint64_t count = 0;
  double mean_abs = 0.0;
  double median_abs = 0.0;
  double p95_abs = 0.0;
  double max_abs = 0.0;
  double rms = 0.0;

  bool operator==(const ErrorStats&) const = default;
};

/// Computes the statistics of |errors|. Percentiles use the nearest-rank
/// method on the sorted absolute values. Throws std::invalid_argument on an
/// empty sample set: every ErrorStats in the wild has count > 0.
ErrorStats compute_error_stats(std::vector<double> errors);

/// Serializes stats as a JSON object (keys: count, mean_abs, median_abs,
/// p95_abs, max_abs, rms) and parses it back.
std::string error_stats_to_json(const ErrorStats& stats);
ErrorStats error_stats_from_json(const std::string& json_text);

/// Signed distance oracle: maps a point to the true signed distance.
using SdfFunction = std::function<double(const Eigen::Vector3d&)>;

/// Errors of the discrete distance field against an analytic oracle,
/// evaluated at voxel centers. Saturated voxels (at the maximum distance
/// outside or at the interior band cap inside) only bound the true value,
/// so they are skipped; sites and parented voxels are compared directly.
/// Throws std::invalid_argument when no voxel qualifies for comparison.
ErrorStats esdf_error(const Layer<EsdfVoxel>& esdf, const SdfFunction& sdf,
                      const EsdfConfig& cfg);

/// Distance of every mesh vertex from the true surface, |sdf(vertex)|.
/// Throws std::invalid_argument when the mesh has no vertices; a mesh of an
/// unrelated scene still yields stats (they are just large).
ErrorStats surface_error(const MeshLayer& mesh, const SdfFunction& sdf);

}  // namespace voxmap
