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

#include <cmath>
#include <cstdint>
#include <vector>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"

namespace voxmap {

/// Interior (occupied-side) distances are only propagated within a thin
/// band, since planners chiefly consume the exterior field.
inline constexpr int kInteriorBandVoxels = 4;

struct EsdfConfig {
  /// TSDF voxels with weight > 0 and |distance| <= site_threshold become
  /// sites (zero-distance sources of the field), in meters.
  double site_threshold = 0.05;
  /// Occupancy voxels with log_odds above this are treated as occupied.
  float occupied_log_odds_threshold = 0.0f;
  /// Exterior distances saturate here, in meters.
  double max_distance = 2.0;
  /// Use OpenMP over blocks in the sweep / border / clear phases.
  bool parallel = true;
};

/// Largest representable squared distance, in integer voxel^2 units.
inline int32_t esdf_max_squared(const EsdfConfig& cfg, double voxel_size) {
  const double r = cfg.max_distance / voxel_size;
  return static_cast<int32_t>(std::llround(r * r));
}

/// Interior distances saturate at one band (or earlier if max_distance is
/// tighter).
inline int32_t esdf_interior_cap_squared(const EsdfConfig& cfg,
                                         double voxel_size) {
  return std::min<int32_t>(kInteriorBandVoxels * kInteriorBandVoxels,
                           esdf_max_squared(cfg, voxel_size));
}

/// Signed distance in meters: negative on the occupied side, zero at
/// sites. Callers must check observed() first; unobserved voxels carry no
/// value.
inline double esdf_distance(const EsdfVoxel& v, double voxel_size) {
  const double d =
      std::sqrt(static_cast<double>(v.squared_distance)) * voxel_size;
  return v.inside() ? -d : d;
}

/// Work lists passed between the update phases. All indices reference
/// allocated ESDF blocks.
struct EsdfUpdateState {
  /// Blocks holding new sites or newly observed voxels; seeds of lowering.
  std::vector<GridIndex> indices_to_update;
  /// Blocks where a site was removed; children may now be orphaned.
  std::vector<GridIndex> indices_to_clear;
  /// Blocks in which clear_invalid reset at least one voxel.
  std::vector<GridIndex> cleared_indices;
};

/// Phase 1: reconciles site / observed / inside flags against the source
/// layer. Processes the updated blocks plus their allocated face neighbors
/// (occupancy site status looks across borders). Newly observed voxels are
/// initialized to their side's saturation value and queued for lowering;
/// removed sites queue their block for invalidation.
void mark_sites(Layer<EsdfVoxel>& esdf, const Layer<TsdfVoxel>& source,
                const std::vector<GridIndex>& updated_blocks,
                const EsdfConfig& cfg, EsdfUpdateState* state,
                std::vector<GridIndex>* changed);
void mark_sites(Layer<EsdfVoxel>& esdf, const Layer<OccupancyVoxel>& source,
                const std::vector<GridIndex>& updated_blocks,
                const EsdfConfig& cfg, EsdfUpdateState* state,
                std::vector<GridIndex>* changed);

/// Phase 2: within max_distance (Chebyshev, in blocks) of every block in
/// indices_to_clear, resets each voxel whose recorded parent is no longer a
/// site back to its side's saturation value. Blocks that lost voxels are
/// appended to cleared_indices (they rejoin the lowering front).
void clear_invalid(Layer<EsdfVoxel>& esdf, const EsdfConfig& cfg,
                   EsdfUpdateState* state, std::vector<GridIndex>* changed);

/// Phase 3: monotone lowering to a fixed point. Each round runs the six
/// in-block directional sweeps (X+, X-, Y+, Y-, Z+, Z-) on every dirty
/// block, then exchanges candidates across block faces, one axis group at a
/// time; blocks receiving a lowered value form the next round's dirty set.
/// A voxel adopts a neighbor's parent when the integer squared distance
/// through that neighbor is smaller; ties break on the lexicographically
/// smallest offset, which keeps the fixed point independent of the update
/// schedule. Seeds are indices_to_update plus cleared_indices. Returns the
/// number of rounds executed and appends every block it changed.
int lower_esdf(Layer<EsdfVoxel>& esdf, const EsdfUpdateState& state,
               const EsdfConfig& cfg, std::vector<GridIndex>* changed);

/// Full incremental update: mark_sites, clear_invalid, then lower_esdf.
/// Returns the sorted set of ESDF blocks whose bytes changed. An empty
/// updated_blocks set returns empty and leaves the layer untouched.
/// Throws std::invalid_argument if the layers' voxel sizes differ.
std::vector<GridIndex> update_esdf(Layer<EsdfVoxel>& esdf,
                                   const Layer<TsdfVoxel>& source,
                                   const std::vector<GridIndex>& updated_blocks,
                                   const EsdfConfig& cfg);
std::vector<GridIndex> update_esdf(Layer<EsdfVoxel>& esdf,
                                   const Layer<OccupancyVoxel>& source,
                                   const std::vector<GridIndex>& updated_blocks,
                                   const EsdfConfig& cfg);

}  // namespace voxmap
