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
#include <array>
#include <cmath>

#include "voxmap/core/voxels.hpp"
#include "voxmap/integrate/config.hpp"

namespace voxmap {

/// Fusion weight of one observation at measured depth d.
inline float weight_for_depth(double d, const IntegratorConfig& cfg) {
  if (cfg.weighting == WeightMode::kInverseSquareDepth) {
    return static_cast<float>(1.0 / std::max(d * d, 1e-6));
  }
  return 1.0f;
}

/// Projective TSDF update for one voxel with projective distance
/// d_p = measured depth - voxel depth. Voxels more than the truncation
/// behind the surface are occluded and left untouched; otherwise the
/// truncated distance is folded into the weighted running average and the
/// weight saturates at max_weight.
inline TsdfVoxel tsdf_update(const TsdfVoxel& voxel, float d_p, float w_new,
                             const IntegratorConfig& cfg) {
  const float eps = static_cast<float>(cfg.truncation);
  if (d_p < -eps) {
    return voxel;
  }
  const float d_t = std::clamp(d_p, -eps, eps);
  TsdfVoxel out;
  const float w_sum = voxel.weight + w_new;
  // The final clamp only absorbs float rounding: the exact average of two
  // in-band values cannot leave the band, but its rounded value can.
  out.distance = std::clamp(
      (voxel.weight * voxel.distance + w_new * d_t) / w_sum, -eps, eps);
  out.weight = std::min(w_sum, cfg.max_weight);
  return out;
}

/// Log-odds occupancy update: a hit within the occupied band behind the
/// surface, a miss for voxels in front of it, untouched beyond the band.
/// The running sum is clamped into [log_odds_min, log_odds_max].
inline OccupancyVoxel occupancy_update(const OccupancyVoxel& voxel, float d_p,
                                       const IntegratorConfig& cfg) {
  const float eps = static_cast<float>(cfg.truncation);
  if (d_p < -eps) {
    return voxel;
  }
  const float inc = d_p <= 0.0f ? quantize_log_odds(cfg.hit_log_odds)
                                : quantize_log_odds(cfg.miss_log_odds);
  OccupancyVoxel out;
  out.log_odds = std::clamp(voxel.log_odds + inc,
                            quantize_log_odds(cfg.log_odds_min),
                            quantize_log_odds(cfg.log_odds_max));
  return out;
}

/// Per-channel weighted average with weight 1 per observation, rounding
/// half away from zero. Callers gate updates to the truncation band.
inline ColorVoxel color_update(const ColorVoxel& voxel,
                               const std::array<uint8_t, 3>& rgb,
                               const IntegratorConfig& cfg) {
  ColorVoxel out = voxel;
  const float w_new = 1.0f;
  const float w_sum = voxel.weight + w_new;
  const auto blend = [&](uint8_t cur, uint8_t obs) {
    const double v = (double(voxel.weight) * cur + double(w_new) * obs) / w_sum;
    return static_cast<uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
  };
  out.r = blend(voxel.r, rgb[0]);
  out.g = blend(voxel.g, rgb[1]);
  out.b = blend(voxel.b, rgb[2]);
  out.weight = std::min(w_sum, cfg.max_weight);
  return out;
}

}  // namespace voxmap
