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

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "voxmap/io/scene.hpp"
#include "voxmap/sensor/camera.hpp"
#include "voxmap/sensor/image.hpp"
#include "voxmap/sensor/lidar.hpp"
#include "voxmap/sensor/pose.hpp"

namespace voxmap {

/// Load failures carry a distinct type per cause so callers can react to
/// missing data differently from malformed data.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required file (intrinsics, poses, or a referenced image) is absent.
class MissingFileError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

/// An image's dimensions disagree with the dataset's intrinsics.
class DimensionMismatchError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

/// Frame timestamps are not strictly increasing.
class TimestampOrderError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

/// A pose or intrinsics entry cannot be parsed, or a pose quaternion's norm
/// deviates from one by more than 1e-3.
class FormatError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

enum class SensorKind { kCamera, kLidar };

/// One observation: a depth image with its sensor pose, and optionally a
/// registered color image. The quaternion and translation mirror the pose
/// file verbatim (qx qy qz qw order) so a loaded dataset saves back
/// byte-identically; T_WS is derived from them with the quaternion
/// normalized.
struct DatasetFrame {
  double timestamp = 0.0;
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  Eigen::Vector4d q{0.0, 0.0, 0.0, 1.0};
  Pose T_WS;
  DepthImage depth;
  bool has_color = false;
  ColorImage color;
};

/// A replayable recording: frames ordered by strictly increasing timestamp,
/// sharing one sensor model.
struct Dataset {
  SensorKind kind = SensorKind::kCamera;
  CameraIntrinsics camera;  // meaningful when kind == kCamera
  LidarIntrinsics lidar;    // meaningful when kind == kLidar
  std::vector<DatasetFrame> frames;
};

/// Reads a dataset directory (see FORMATS.md: intrinsics.txt, poses.txt,
/// depth_NNNNNN.pgm and optional color_NNNNNN.ppm). Frames pair with pose
/// lines by order. Throws MissingFileError, DimensionMismatchError,
/// TimestampOrderError or FormatError as appropriate.
Dataset load_dataset(const std::string& dir);

/// Writes the directory layout load_dataset reads. Floating-point values
/// are printed with 17 significant digits, so load and save are mutually
/// inverse down to the byte. Throws IoError on filesystem failures.
void save_dataset(const Dataset& dataset, const std::string& dir);

/// Sensor models used by the synthetic dataset generator: a 90-degree
/// pinhole camera (fu = fv = width / 2, centered principal point, 10 m
/// range) and a spinning lidar covering 0.6 rad around the horizon between
/// 0.3 m and 20 m.
CameraIntrinsics default_camera_intrinsics(int width = 640, int height = 480);
LidarIntrinsics default_lidar_intrinsics(int num_azimuth = 512,
                                         int num_elevation = 32);

/// Pose of frame k of an inspection orbit: the sensor circles the scene
/// interior on an ellipse sized to the bounding box, at mid height with a
/// gentle vertical bob, aimed at the scene center (cameras look along +z;
/// lidars keep +z up and yaw towards the center). Throws
/// std::invalid_argument when total_frames < 1.
Pose orbit_pose(const SyntheticScene& scene, SensorKind kind, int frame,
                int total_frames);

/// Renders a complete synthetic dataset: `frames` orbit poses at 10 Hz,
/// depth from sphere tracing, and (for cameras) normal-shaded color.
Dataset make_synthetic_dataset(const SyntheticScene& scene, int frames,
                               const CameraIntrinsics& intrinsics);
Dataset make_synthetic_dataset(const SyntheticScene& scene, int frames,
                               const LidarIntrinsics& intrinsics);
Dataset make_synthetic_dataset(const SyntheticScene& scene, SensorKind kind,
                               int frames);

}  // namespace voxmap
