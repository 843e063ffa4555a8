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

#include <Eigen/Core>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"

namespace voxmap {

/// Distance/gradient sample for one query point. When known is false the
/// point lies in never-observed or unallocated space and the other fields
/// carry no information (distance 0, gradient zero).
struct QueryResult {
  bool known = false;
  double distance = 0.0;                               // signed meters
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();  // unit when defined

  bool operator==(const QueryResult& o) const {
    return known == o.known && distance == o.distance &&
           gradient == o.gradient;
  }
};

struct QueryConfig {
  /// Trilinear interpolation over the eight surrounding voxel centers;
  /// set false for nearest-voxel lookups (oracle comparisons).
  bool interpolate = true;

  /// Process points in parallel. Results are written by index, so the
  /// output never depends on scheduling.
  bool parallel = true;
};

/// Batch distance (and optionally gradient) lookup. Per point: non-finite
/// coordinates or unobserved space give an unknown result; otherwise the
/// distance is the trilinear interpolation of the signed voxel distances,
/// falling back to the located voxel's stored value when any of the eight
/// corners is unknown. The gradient is the analytic derivative of the
/// trilinear interpolant, normalized; where that degenerates it falls back
/// to the direction away from the voxel's parent site. Output order matches
/// input order and is independent of chunking.
std::vector<QueryResult> query_batch(const Layer<EsdfVoxel>& esdf,
                                     const std::vector<Eigen::Vector3d>& points,
                                     bool want_gradient,
                                     const QueryConfig& cfg = {});

enum class SampleMode {
  kCorrelated,    // Gaussian clusters around random allocated blocks
  kUncorrelated,  // uniform over the allocated bounding box
};

/// Throughput report from benchmark_queries. The per-point results are
/// retained so callers can verify determinism.
struct QueryBenchmark {
  size_t count = 0;
  double seconds = 0.0;
  double queries_per_second = 0.0;
  double valid_ratio = 0.0;
  std::vector<QueryResult> results;
};

/// Generates a deterministic point set (correlated: bursts of 256
/// consecutive points, each burst Gaussian around one random allocated
/// block center with sigma of a quarter block edge; uncorrelated: uniform
/// over the map bounding box), queries it, and reports wall time, queries
/// per second and the fraction of known results.
///
/// Throws std::invalid_argument when the map has no blocks.
QueryBenchmark benchmark_queries(const Layer<EsdfVoxel>& esdf, size_t count,
                                 SampleMode mode, uint64_t seed,
                                 const QueryConfig& cfg = {});

}  // namespace voxmap
