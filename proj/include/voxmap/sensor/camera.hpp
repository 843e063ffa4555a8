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
#include <cmath>

namespace voxmap {

/// Pinhole camera. Pixel (c, r) covers [c, c+1) x [r, r+1) with its center
/// at (c + 0.5, r + 0.5); depth is the z component in the camera frame.
struct CameraIntrinsics {
  double fu = 0.0;
  double fv = 0.0;
  double cu = 0.0;
  double cv = 0.0;
  int width = 0;
  int height = 0;
  double max_depth = 0.0;  // meters; measurements beyond are invalid

  /// Projects a camera-frame point. False when the point is at or behind
  /// the camera plane; (u, v) are continuous image coordinates.
  bool project(const Eigen::Vector3d& p, double* u, double* v) const {
    if (!(p.z() > 0.0)) {
      return false;
    }
    *u = fu * p.x() / p.z() + cu;
    *v = fv * p.y() / p.z() + cv;
    return true;
  }

  bool contains(double u, double v) const {
    return u >= 0.0 && u < width && v >= 0.0 && v < height;
  }

  /// The sensor's measurement coordinate for a point: perpendicular depth.
  double depth_of(const Eigen::Vector3d& p) const { return p.z(); }

  /// Point on the pixel ray at the given depth.
  Eigen::Vector3d unproject(double u, double v, double depth) const {
    return Eigen::Vector3d((u - cu) / fu * depth, (v - cv) / fv * depth,
                           depth);
  }

  /// Unit direction of the ray through continuous pixel coordinates.
  Eigen::Vector3d ray_direction(double u, double v) const {
    return Eigen::Vector3d((u - cu) / fu, (v - cv) / fv, 1.0).normalized();
  }
};

}  // namespace voxmap
