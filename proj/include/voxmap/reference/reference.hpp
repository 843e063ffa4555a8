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

#include <vector>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/integrate/config.hpp"
#include "voxmap/query/query.hpp"
#include "voxmap/sensor/camera.hpp"
#include "voxmap/sensor/image.hpp"
#include "voxmap/sensor/lidar.hpp"
#include "voxmap/sensor/pose.hpp"

namespace voxmap {

/// Plain serial restatements of the hot kernels, kept deliberately free of
/// OpenMP and of the production update helpers: every per-voxel rule is
/// written out inline. Tests assert the production kernels match these
/// (bitwise for integration, to float precision for interpolation), which
/// pins down both the parallel scheduling and the update algebra. The
/// bench_kernels tool times the two sides against each other.
///
/// Candidate blocks come from the same view-volume enumeration as
/// production (the candidate set is part of the integrator contract, not
/// re-derived here), so the allocated block sets match exactly.
std::vector<GridIndex> reference_integrate_depth(
    Layer<TsdfVoxel>& layer, const DepthImage& depth, const Pose& T_LS,
    const CameraIntrinsics& camera, const IntegratorConfig& cfg);
std::vector<GridIndex> reference_integrate_depth(
    Layer<TsdfVoxel>& layer, const DepthImage& depth, const Pose& T_LS,
    const LidarIntrinsics& lidar, const IntegratorConfig& cfg);
std::vector<GridIndex> reference_integrate_depth(
    Layer<OccupancyVoxel>& layer, const DepthImage& depth, const Pose& T_LS,
    const CameraIntrinsics& camera, const IntegratorConfig& cfg);
std::vector<GridIndex> reference_integrate_depth(
    Layer<OccupancyVoxel>& layer, const DepthImage& depth, const Pose& T_LS,
    const LidarIntrinsics& lidar, const IntegratorConfig& cfg);

/// Serial distance/gradient lookup with a straightforward triple-loop
/// trilinear accumulation. Matches query_batch semantics: nearest-voxel
/// results are exact copies of stored values; interpolated results agree
/// with production to floating-point reassociation error.
std::vector<QueryResult> reference_query_batch(
    const Layer<EsdfVoxel>& esdf, const std::vector<Eigen::Vector3d>& points,
    bool want_gradient, const QueryConfig& cfg = {});

}  // namespace voxmap
