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

#include <string>
#include <vector>

#include <Eigen/Core>

namespace voxmap {

/// One solid primitive of a synthetic scene. Only the fields of the active
/// kind are meaningful:
///  - kSphere: center, radius
///  - kBox:    box_min, box_max (axis-aligned, solid)
///  - kPlane:  point, normal (solid half space behind the plane; the unit
///             normal points into free space)
///
/// Rooms and corridors are hollow shells built from planes whose normals
/// face inward, so the interior is free space bounded by solid walls.
struct ScenePrimitive {
  enum class Kind { kSphere, kBox, kPlane };

  Kind kind = Kind::kSphere;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
  Eigen::Vector3d box_min = Eigen::Vector3d::Zero();
  Eigen::Vector3d box_max = Eigen::Vector3d::Zero();
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();

  /// Exact signed distance to this primitive: positive in free space,
  /// negative inside the solid. 1-Lipschitz.
  double sdf(const Eigen::Vector3d& p) const;
};

ScenePrimitive make_sphere(const Eigen::Vector3d& center, double radius);
ScenePrimitive make_box(const Eigen::Vector3d& box_min,
                        const Eigen::Vector3d& box_max);
/// The normal is normalized here; throws std::invalid_argument when it is
/// (near) zero.
ScenePrimitive make_plane(const Eigen::Vector3d& point,
                          const Eigen::Vector3d& normal);

/// An analytic world: the union of solid primitives, with a finite bounding
/// box marking the region of interest for rendering and evaluation.
struct SyntheticScene {
  std::string name;
  std::vector<ScenePrimitive> primitives;
  Eigen::Vector3d bbox_min = Eigen::Vector3d::Zero();
  Eigen::Vector3d bbox_max = Eigen::Vector3d::Zero();

  /// Signed distance to the union: the minimum over all primitives.
  /// Positive in free space, negative inside any solid, 1-Lipschitz.
  double sdf(const Eigen::Vector3d& p) const;

  /// Central-difference gradient of sdf(), normalized when possible.
  Eigen::Vector3d sdf_gradient(const Eigen::Vector3d& p,
                               double h = 1e-5) const;
};

/// Builds one of the named example worlds: "sphere_in_box", "room" or
/// "corridor". Throws std::invalid_argument for any other name.
SyntheticScene make_scene(const std::string& name);

/// JSON round trip for scene description files (see FORMATS.md).
std::string scene_to_json(const SyntheticScene& scene);
SyntheticScene scene_from_json(const std::string& json_text);

/// File variants; throw IoError when the file cannot be read or written and
/// std::invalid_argument (via scene_from_json) on malformed content.
void save_scene(const SyntheticScene& scene, const std::string& path);
SyntheticScene load_scene(const std::string& path);

}  // namespace voxmap
