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

#include "voxmap/io/scene.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "voxmap/core/serialization.hpp"

namespace voxmap {
namespace {

/// Adds the six inward-facing walls of an axis-aligned room.
void add_room_shell(SyntheticScene& scene, const Eigen::Vector3d& lo,
                    const Eigen::Vector3d& hi) {
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    n[axis] = 1.0;
    scene.primitives.push_back(make_plane(lo, n));
    scene.primitives.push_back(make_plane(hi, -n));
  }
  scene.bbox_min = lo;
  scene.bbox_max = hi;
}

nlohmann::json vec_to_json(const Eigen::Vector3d& v) {
  return nlohmann::json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("scene: expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

double ScenePrimitive::sdf(const Eigen::Vector3d& p) const {
  switch (kind) {
    case Kind::kSphere:
      return (p - center).norm() - radius;
    case Kind::kBox: {
      const Eigen::Vector3d mid = 0.5 * (box_min + box_max);
      const Eigen::Vector3d half = 0.5 * (box_max - box_min);
      const Eigen::Vector3d q = (p - mid).cwiseAbs() - half;
      const double outside = q.cwiseMax(0.0).norm();
      const double inside = std::min(q.maxCoeff(), 0.0);
      return outside + inside;
    }
    case Kind::kPlane:
      return normal.dot(p - point);
  }
  return std::numeric_limits<double>::infinity();
}

ScenePrimitive make_sphere(const Eigen::Vector3d& center, double radius) {
  ScenePrimitive prim;
  prim.kind = ScenePrimitive::Kind::kSphere;
  prim.center = center;
  prim.radius = radius;
  return prim;
}

ScenePrimitive make_box(const Eigen::Vector3d& box_min,
                        const Eigen::Vector3d& box_max) {
  ScenePrimitive prim;
  prim.kind = ScenePrimitive::Kind::kBox;
  prim.box_min = box_min;
  prim.box_max = box_max;
  return prim;
}

ScenePrimitive make_plane(const Eigen::Vector3d& point,
                          const Eigen::Vector3d& normal) {
  const double norm = normal.norm();
  if (norm < 1e-12) {
    throw std::invalid_argument("make_plane: zero normal");
  }
  ScenePrimitive prim;
  prim.kind = ScenePrimitive::Kind::kPlane;
  prim.point = point;
  prim.normal = normal / norm;
  return prim;
}

double SyntheticScene::sdf(const Eigen::Vector3d& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const ScenePrimitive& prim : primitives) {
    best = std::min(best, prim.sdf(p));
  }
  return best;
}

Eigen::Vector3d SyntheticScene::sdf_gradient(const Eigen::Vector3d& p,
                                             double h) const {
  Eigen::Vector3d g;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    dp[axis] = h;
    g[axis] = (sdf(p + dp) - sdf(p - dp)) / (2.0 * h);
  }
  const double norm = g.norm();
  return norm > 1e-12 ? Eigen::Vector3d(g / norm) : g;
}

SyntheticScene make_scene(const std::string& name) {
  SyntheticScene scene;
  scene.name = name;
  if (name == "sphere_in_box") {
    add_room_shell(scene, {0.0, 0.0, 0.0}, {3.0, 3.0, 2.5});
    scene.primitives.push_back(make_sphere({1.5, 1.5, 1.25}, 0.5));
  } else if (name == "room") {
    add_room_shell(scene, {0.0, 0.0, 0.0}, {4.0, 3.0, 2.5});
    scene.primitives.push_back(make_box({1.4, 0.7, 0.0}, {2.0, 1.3, 0.8}));
    scene.primitives.push_back(make_box({2.9, 2.0, 0.0}, {3.2, 2.3, 2.5}));
    scene.primitives.push_back(make_sphere({1.0, 2.2, 0.5}, 0.35));
  } else if (name == "corridor") {
    add_room_shell(scene, {0.0, 0.0, 0.0}, {8.0, 2.0, 2.2});
    scene.primitives.push_back(make_box({2.0, 0.0, 0.0}, {2.6, 0.9, 1.3}));
    scene.primitives.push_back(make_box({4.6, 1.1, 0.0}, {5.2, 2.0, 1.5}));
    scene.primitives.push_back(make_sphere({6.4, 1.0, 0.55}, 0.35));
  } else {
    throw std::invalid_argument("make_scene: unknown scene '" + name + "'");
  }
  return scene;
}

std::string scene_to_json(const SyntheticScene& scene) {
  nlohmann::json j;
  j["name"] = scene.name;
  j["bbox_min"] = vec_to_json(scene.bbox_min);
  j["bbox_max"] = vec_to_json(scene.bbox_max);
  nlohmann::json prims = nlohmann::json::array();
  for (const ScenePrimitive& prim : scene.primitives) {
    nlohmann::json p;
    switch (prim.kind) {
      case ScenePrimitive::Kind::kSphere:
        p["type"] = "sphere";
        p["center"] = vec_to_json(prim.center);
        p["radius"] = prim.radius;
        break;
      case ScenePrimitive::Kind::kBox:
        p["type"] = "box";
        p["min"] = vec_to_json(prim.box_min);
        p["max"] = vec_to_json(prim.box_max);
        break;
      case ScenePrimitive::Kind::kPlane:
        p["type"] = "plane";
        p["point"] = vec_to_json(prim.point);
        p["normal"] = vec_to_json(prim.normal);
        break;
    }
    prims.push_back(std::move(p));
  }
  j["primitives"] = std::move(prims);
  return j.dump(2);
}

SyntheticScene scene_from_json(const std::string& json_text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    SyntheticScene scene;
    scene.name = j.at("name").get<std::string>();
    scene.bbox_min = vec_from_json(j.at("bbox_min"));
    scene.bbox_max = vec_from_json(j.at("bbox_max"));
    for (const nlohmann::json& p : j.at("primitives")) {
      const std::string type = p.at("type").get<std::string>();
      if (type == "sphere") {
        scene.primitives.push_back(
            make_sphere(vec_from_json(p.at("center")),
                        p.at("radius").get<double>()));
      } else if (type == "box") {
        scene.primitives.push_back(
            make_box(vec_from_json(p.at("min")), vec_from_json(p.at("max"))));
      } else if (type == "plane") {
        scene.primitives.push_back(make_plane(vec_from_json(p.at("point")),
                                              vec_from_json(p.at("normal"))));
      } else {
        throw std::invalid_argument("scene: unknown primitive type '" + type +
                                    "'");
      }
    }
    return scene;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("scene: malformed JSON: ") +
                                e.what());
  }
}

void save_scene(const SyntheticScene& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open scene file for writing: " + path);
  }
  out << scene_to_json(scene) << '\n';
  if (!out) {
    throw IoError("failed writing scene file: " + path);
  }
}

SyntheticScene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open scene file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return scene_from_json(buffer.str());
}

}  // namespace voxmap
