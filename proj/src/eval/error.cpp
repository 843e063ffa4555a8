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

#include "voxmap/eval/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace voxmap {

ErrorStats compute_error_stats(std::vector<double> errors) {
  if (errors.empty()) {
    throw std::invalid_argument("compute_error_stats: no samples");
  }
  ErrorStats stats;
  stats.count = errors.size();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double& e : errors) {
    e = std::abs(e);
    sum += e;
    sum_sq += e * e;
  }
  std::sort(errors.begin(), errors.end());
  const auto nearest_rank = [&](double p) {
    const size_t rank = static_cast<size_t>(
        std::ceil(p * static_cast<double>(errors.size())));
    return errors[std::max<size_t>(rank, 1) - 1];
  };
  stats.mean_abs = sum / static_cast<double>(errors.size());
  stats.median_abs = nearest_rank(0.5);
  stats.p95_abs = nearest_rank(0.95);
  stats.max_abs = errors.back();
  stats.rms = std::sqrt(sum_sq / static_cast<double>(errors.size()));
  return stats;
}

std::string error_stats_to_json(const ErrorStats& stats) {
  nlohmann::json j;
  j["count"] = stats.count;
  j["mean_abs"] = stats.mean_abs;
  j["median_abs"] = stats.median_abs;
  j["p95_abs"] = stats.p95_abs;
  j["max_abs"] = stats.max_abs;
  j["rms"] = stats.rms;
  return j.dump(2);
}

ErrorStats error_stats_from_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  ErrorStats stats;
  stats.count = j.at("count").get<uint64_t>();
  stats.mean_abs = j.at("mean_abs").get<double>();
  stats.median_abs = j.at("median_abs").get<double>();
  stats.p95_abs = j.at("p95_abs").get<double>();
  stats.max_abs = j.at("max_abs").get<double>();
  stats.rms = j.at("rms").get<double>();
  return stats;
}

ErrorStats esdf_error(const Layer<EsdfVoxel>& esdf, const SdfFunction& sdf,
                      const EsdfConfig& cfg) {
  (void)cfg;  // The classification flags already encode the band limits.
  std::vector<double> errors;
  for (const GridIndex& g : esdf.sorted_indices()) {
    const VoxelBlock<EsdfVoxel>& blk = *esdf.block_ptr(g);
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const EsdfVoxel& v = blk.voxels[lin];
      if (!v.observed()) {
        continue;
      }
      if (!v.is_site() && !v.has_parent()) {
        continue;  // saturated: only a bound, not an estimate
      }
      const Eigen::Vector3d center = global_voxel_center(
          global_voxel_index(g, voxel_index_from_linear(lin)),
          esdf.voxel_size());
      errors.push_back(esdf_distance(v, esdf.voxel_size()) - sdf(center));
    }
  }
  if (errors.empty()) {
    throw std::invalid_argument(
        "esdf_error: no observed voxel with a definite distance");
  }
  return compute_error_stats(std::move(errors));
}

ErrorStats surface_error(const MeshLayer& mesh, const SdfFunction& sdf) {
  std::vector<double> errors;
  for (const GridIndex& g : mesh.sorted_indices()) {
    const MeshBlock& blk = *mesh.block_ptr(g);
    for (const Eigen::Vector3f& v : blk.vertices) {
      errors.push_back(sdf(v.cast<double>()));
    }
  }
  if (errors.empty()) {
    throw std::invalid_argument("surface_error: mesh has no vertices");
  }
  return compute_error_stats(std::move(errors));
}

}  // namespace voxmap
