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

namespace voxmap {

/// Truncated signed projective distance plus fusion weight.
struct TsdfVoxel {
  float distance = 0.0f;  // meters, clamped to +/- truncation
  float weight = 0.0f;    // 0 means never observed
};
static_assert(sizeof(TsdfVoxel) == 8);

/// Log-odds occupancy; 0 is the unobserved prior.
struct OccupancyVoxel {
  float log_odds = 0.0f;
};
static_assert(sizeof(OccupancyVoxel) == 4);

/// Fused surface color, maintained only near the TSDF zero crossing.
struct ColorVoxel {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;
  uint8_t reserved = 0;
  float weight = 0.0f;
};
static_assert(sizeof(ColorVoxel) == 8);

/// Euclidean distance voxel. Distances are exact integer squared voxel
/// counts to the parent site; parent_offset points from this voxel to its
/// site, and a zero offset means the voxel is itself a site or holds no
/// useful parent (unknown / at the distance cap).
struct EsdfVoxel {
  static constexpr uint8_t kObserved = 1;
  static constexpr uint8_t kSite = 2;
  static constexpr uint8_t kInside = 4;

  int32_t squared_distance = 0;  // voxel^2 units
  int16_t parent_x = 0;
  int16_t parent_y = 0;
  int16_t parent_z = 0;
  uint8_t flags = 0;
  uint8_t reserved = 0;

  bool observed() const { return flags & kObserved; }
  bool is_site() const { return flags & kSite; }
  bool inside() const { return flags & kInside; }
  bool has_parent() const {
    return parent_x != 0 || parent_y != 0 || parent_z != 0;
  }
  friend bool operator==(const EsdfVoxel&, const EsdfVoxel&) = default;
};
static_assert(sizeof(EsdfVoxel) == 12);

}  // namespace voxmap
