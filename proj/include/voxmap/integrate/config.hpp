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

namespace voxmap {

enum class WeightMode {
  kConstant,           // w = 1
  kInverseSquareDepth  // w = 1 / d^2 for measured depth d
};

enum class DepthSampleMode {
  kNearest,
  kLinearForegroundSafe,
};

/// Log-odds increments are snapped to multiples of 1/4096 so that repeated
/// Bayesian updates are exact float sums and therefore independent of
/// observation order (away from the clamps).
inline float quantize_log_odds(float value) {
  return static_cast<float>(std::nearbyint(double(value) * 4096.0) / 4096.0);
}

struct IntegratorConfig {
  double truncation = 0.2;  // meters; pipelines default this to 4 * voxel
  float max_weight = 100.0f;
  WeightMode weighting = WeightMode::kConstant;
  double max_integration_distance = 5.0;  // meters, sensor depth units

  DepthSampleMode camera_sample = DepthSampleMode::kNearest;
  DepthSampleMode lidar_sample = DepthSampleMode::kLinearForegroundSafe;
  float max_sample_gap = 0.2f;  // meters; linear-mode discontinuity guard
  int view_pixel_subsample = 8;

  // Occupancy increments for p(hit) = 0.7 and p(miss) = 0.4, quantized.
  float hit_log_odds = quantize_log_odds(0.8473f);
  float miss_log_odds = quantize_log_odds(-0.4055f);
  float log_odds_min = -5.0f;
  float log_odds_max = 5.0f;

  bool parallel = true;  // OpenMP over blocks; false runs serially
};

}  // namespace voxmap
