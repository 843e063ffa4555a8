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
#include <algorithm>
#include <cmath>
#include <numbers>

namespace voxmap {

/// Spinning lidar modeled as a cylindrical depth image: columns are azimuth
/// bins, rows are elevation bins indexed by polar angle from +z, and the
/// stored measurement is Euclidean range along the beam.
struct LidarIntrinsics {
  int num_azimuth = 0;
  int num_elevation = 0;
  double azimuth_start = 0.0;    // radians, left edge of column 0
  double elevation_start = 0.0;  // radians, polar angle at top of row 0
  double azimuth_fov = 2.0 * std::numbers::pi;
  double elevation_fov = 0.0;
  double min_range = 0.0;
  double max_range = 0.0;

  double rad_per_azimuth_px() const { return azimuth_fov / num_azimuth; }
  double rad_per_elevation_px() const { return elevation_fov / num_elevation; }

  /// Projects a sensor-frame point to continuous image coordinates. The
  /// azimuth wraps; false when the point's polar angle leaves the vertical
  /// field of view or the point is at the origin.
  bool project(const Eigen::Vector3d& p, double* u, double* v) const {
    const double r = p.norm();
    if (!(r > 0.0)) {
      return false;
    }
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double azimuth = std::atan2(p.y(), p.x()) - azimuth_start;
    azimuth -= kTwoPi * std::floor(azimuth / kTwoPi);
    *u = azimuth * (num_azimuth / azimuth_fov);
    const double polar = std::acos(std::clamp(p.z() / r, -1.0, 1.0));
    *v = (polar - elevation_start) * (num_elevation / elevation_fov);
    return contains(*u, *v);
  }

  bool contains(double u, double v) const {
    return u >= 0.0 && u < num_azimuth && v >= 0.0 && v < num_elevation;
  }

  /// The sensor's measurement coordinate for a point: Euclidean range.
  double depth_of(const Eigen::Vector3d& p) const { return p.norm(); }

  Eigen::Vector3d unproject(double u, double v, double range) const {
    return ray_direction(u, v) * range;
  }

  Eigen::Vector3d ray_direction(double u, double v) const {
    const double azimuth = azimuth_start + u * rad_per_azimuth_px();
    const double polar = elevation_start + v * rad_per_elevation_px();
    const double sp = std::sin(polar);
    return Eigen::Vector3d(std::cos(azimuth) * sp, std::sin(azimuth) * sp,
                           std::cos(polar));
  }
};

}  // namespace voxmap
