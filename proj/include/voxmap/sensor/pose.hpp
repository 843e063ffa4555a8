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
#include <Eigen/Geometry>
#include <stdexcept>

namespace voxmap {

class InvalidPoseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rigid transform mapping points from this pose's child frame into its
/// parent frame: p_parent = R * p_child + t.
struct Pose {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  static Pose identity() { return Pose{}; }

  static Pose from_quaternion(const Eigen::Quaterniond& q,
                              const Eigen::Vector3d& t) {
    return Pose{q.normalized().toRotationMatrix(), t};
  }

  /// Rotation must be orthonormal with determinant +1 within 1e-6.
  bool valid() const {
    if (!R.allFinite() || !t.allFinite()) {
      return false;
    }
    const double det_err = std::abs(R.determinant() - 1.0);
    const double ortho_err =
        (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    return det_err <= 1e-6 && ortho_err <= 1e-6;
  }

  Pose inverse() const { return Pose{R.transpose(), -(R.transpose() * t)}; }

  Pose operator*(const Pose& other) const {
    return Pose{R * other.R, R * other.t + t};
  }

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return R * p + t;
  }
};

}  // namespace voxmap
