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

#include "voxmap/io/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "voxmap/core/serialization.hpp"
#include "voxmap/io/render.hpp"
#include "voxmap/sensor/image_io.hpp"

namespace voxmap {
namespace {

namespace fs = std::filesystem;

std::string frame_file(const char* prefix, size_t index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06zu.%s", prefix, index, ext);
  return buf;
}

/// Shortest representation that parses back to the same double.
std::string fmt_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw FormatError("dataset: cannot parse " + what + ": '" + text + "'");
  }
  if (consumed != text.size()) {
    throw FormatError("dataset: trailing characters in " + what + ": '" +
                      text + "'");
  }
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  const double value = parse_double(text, what);
  const int as_int = static_cast<int>(value);
  if (static_cast<double>(as_int) != value) {
    throw FormatError("dataset: " + what + " must be an integer: '" + text +
                      "'");
  }
  return as_int;
}

/// Reads key=value lines, ignoring blank lines and '#' comments.
std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MissingFileError("dataset: missing file: " + path);
  }
  std::map<std::string, std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("dataset: expected key=value, got '" + line + "'");
    }
    entries[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return entries;
}

std::string take(std::map<std::string, std::string>& entries,
                 const std::string& key) {
  const auto it = entries.find(key);
  if (it == entries.end()) {
    throw FormatError("dataset: intrinsics missing key '" + key + "'");
  }
  std::string value = it->second;
  entries.erase(it);
  return value;
}

void read_intrinsics(const std::string& path, Dataset* dataset) {
  auto entries = read_key_values(path);
  const std::string sensor = take(entries, "sensor");
  if (sensor == "camera") {
    dataset->kind = SensorKind::kCamera;
    CameraIntrinsics& c = dataset->camera;
    c.width = parse_int(take(entries, "width"), "width");
    c.height = parse_int(take(entries, "height"), "height");
    c.fu = parse_double(take(entries, "fu"), "fu");
    c.fv = parse_double(take(entries, "fv"), "fv");
    c.cu = parse_double(take(entries, "cu"), "cu");
    c.cv = parse_double(take(entries, "cv"), "cv");
    c.max_depth = parse_double(take(entries, "max_depth"), "max_depth");
  } else if (sensor == "lidar") {
    dataset->kind = SensorKind::kLidar;
    LidarIntrinsics& l = dataset->lidar;
    l.num_azimuth = parse_int(take(entries, "num_azimuth"), "num_azimuth");
    l.num_elevation =
        parse_int(take(entries, "num_elevation"), "num_elevation");
    l.azimuth_start =
        parse_double(take(entries, "azimuth_start"), "azimuth_start");
    l.elevation_start =
        parse_double(take(entries, "elevation_start"), "elevation_start");
    l.azimuth_fov = parse_double(take(entries, "azimuth_fov"), "azimuth_fov");
    l.elevation_fov =
        parse_double(take(entries, "elevation_fov"), "elevation_fov");
    l.min_range = parse_double(take(entries, "min_range"), "min_range");
    l.max_range = parse_double(take(entries, "max_range"), "max_range");
  } else {
    throw FormatError("dataset: unknown sensor kind '" + sensor + "'");
  }
  if (!entries.empty()) {
    throw FormatError("dataset: unexpected intrinsics key '" +
                      entries.begin()->first + "'");
  }
}

void write_intrinsics(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  if (dataset.kind == SensorKind::kCamera) {
    const CameraIntrinsics& c = dataset.camera;
    out << "sensor=camera\n"
        << "width=" << c.width << "\nheight=" << c.height << "\nfu="
        << fmt_double(c.fu) << "\nfv=" << fmt_double(c.fv) << "\ncu="
        << fmt_double(c.cu) << "\ncv=" << fmt_double(c.cv) << "\nmax_depth="
        << fmt_double(c.max_depth) << "\n";
  } else {
    const LidarIntrinsics& l = dataset.lidar;
    out << "sensor=lidar\n"
        << "num_azimuth=" << l.num_azimuth << "\nnum_elevation="
        << l.num_elevation << "\nazimuth_start="
        << fmt_double(l.azimuth_start) << "\nelevation_start="
        << fmt_double(l.elevation_start) << "\nazimuth_fov="
        << fmt_double(l.azimuth_fov) << "\nelevation_fov="
        << fmt_double(l.elevation_fov) << "\nmin_range="
        << fmt_double(l.min_range) << "\nmax_range="
        << fmt_double(l.max_range) << "\n";
  }
  if (!out) {
    throw IoError("failed writing: " + path);
  }
}

/// Parses "timestamp tx ty tz qx qy qz qw" and derives the pose.
DatasetFrame parse_pose_line(const std::string& line, size_t line_number) {
  std::istringstream stream(line);
  double values[8];
  for (double& v : values) {
    std::string token;
    if (!(stream >> token)) {
      throw FormatError("dataset: pose line " + std::to_string(line_number) +
                        " has fewer than 8 fields");
    }
    v = parse_double(token, "pose line " + std::to_string(line_number));
  }
  std::string extra;
  if (stream >> extra) {
    throw FormatError("dataset: pose line " + std::to_string(line_number) +
                      " has more than 8 fields");
  }
  DatasetFrame frame;
  frame.timestamp = values[0];
  frame.t = {values[1], values[2], values[3]};
  frame.q = {values[4], values[5], values[6], values[7]};
  const double norm = frame.q.norm();
  if (std::abs(norm - 1.0) > 1e-3) {
    throw FormatError("dataset: pose line " + std::to_string(line_number) +
                      " quaternion norm " + fmt_double(norm) +
                      " deviates from 1 by more than 1e-3");
  }
  frame.T_WS = Pose::from_quaternion(
      Eigen::Quaterniond(frame.q[3], frame.q[0], frame.q[1], frame.q[2]),
      frame.t);
  return frame;
}

}  // namespace

Dataset load_dataset(const std::string& dir) {
  Dataset dataset;
  read_intrinsics((fs::path(dir) / "intrinsics.txt").string(), &dataset);

  const std::string poses_path = (fs::path(dir) / "poses.txt").string();
  std::ifstream poses(poses_path);
  if (!poses) {
    throw MissingFileError("dataset: missing file: " + poses_path);
  }
  std::string line;
  size_t line_number = 0;
  while (std::getline(poses, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    dataset.frames.push_back(parse_pose_line(line, line_number));
    const size_t n = dataset.frames.size();
    if (n >= 2 &&
        dataset.frames[n - 1].timestamp <= dataset.frames[n - 2].timestamp) {
      throw TimestampOrderError(
          "dataset: timestamps must strictly increase; line " +
          std::to_string(line_number) + " goes from " +
          fmt_double(dataset.frames[n - 2].timestamp) + " to " +
          fmt_double(dataset.frames[n - 1].timestamp));
    }
  }

  const int want_w = dataset.kind == SensorKind::kCamera
                         ? dataset.camera.width
                         : dataset.lidar.num_azimuth;
  const int want_h = dataset.kind == SensorKind::kCamera
                         ? dataset.camera.height
                         : dataset.lidar.num_elevation;
  for (size_t k = 0; k < dataset.frames.size(); ++k) {
    DatasetFrame& frame = dataset.frames[k];
    const fs::path depth_path = fs::path(dir) / frame_file("depth", k, "pgm");
    if (!fs::exists(depth_path)) {
      throw MissingFileError("dataset: missing file: " + depth_path.string());
    }
    frame.depth = depth_from_millimeters(read_pgm16(depth_path.string()));
    if (frame.depth.width != want_w || frame.depth.height != want_h) {
      throw DimensionMismatchError(
          "dataset: " + depth_path.filename().string() + " is " +
          std::to_string(frame.depth.width) + "x" +
          std::to_string(frame.depth.height) + " but intrinsics say " +
          std::to_string(want_w) + "x" + std::to_string(want_h));
    }
    const fs::path color_path = fs::path(dir) / frame_file("color", k, "ppm");
    if (fs::exists(color_path)) {
      frame.color = read_ppm(color_path.string());
      frame.has_color = true;
      if (frame.color.width != want_w || frame.color.height != want_h) {
        throw DimensionMismatchError(
            "dataset: " + color_path.filename().string() + " is " +
            std::to_string(frame.color.width) + "x" +
            std::to_string(frame.color.height) + " but intrinsics say " +
            std::to_string(want_w) + "x" + std::to_string(want_h));
      }
    }
  }
  return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create dataset directory " + dir + ": " +
                  ec.message());
  }
  write_intrinsics((fs::path(dir) / "intrinsics.txt").string(), dataset);

  const std::string poses_path = (fs::path(dir) / "poses.txt").string();
  std::ofstream poses(poses_path, std::ios::binary);
  if (!poses) {
    throw IoError("cannot open for writing: " + poses_path);
  }
  for (const DatasetFrame& frame : dataset.frames) {
    poses << fmt_double(frame.timestamp);
    for (int i = 0; i < 3; ++i) {
      poses << ' ' << fmt_double(frame.t[i]);
    }
    for (int i = 0; i < 4; ++i) {
      poses << ' ' << fmt_double(frame.q[i]);
    }
    poses << '\n';
  }
  if (!poses) {
    throw IoError("failed writing: " + poses_path);
  }
  poses.close();

  for (size_t k = 0; k < dataset.frames.size(); ++k) {
    const DatasetFrame& frame = dataset.frames[k];
    write_pgm16((fs::path(dir) / frame_file("depth", k, "pgm")).string(),
                depth_to_millimeters(frame.depth));
    if (frame.has_color) {
      write_ppm((fs::path(dir) / frame_file("color", k, "ppm")).string(),
                frame.color);
    }
  }
}

CameraIntrinsics default_camera_intrinsics(int width, int height) {
  CameraIntrinsics c;
  c.width = width;
  c.height = height;
  c.fu = width / 2.0;
  c.fv = width / 2.0;
  c.cu = width / 2.0;
  c.cv = height / 2.0;
  c.max_depth = 10.0;
  return c;
}

LidarIntrinsics default_lidar_intrinsics(int num_azimuth, int num_elevation) {
  LidarIntrinsics l;
  l.num_azimuth = num_azimuth;
  l.num_elevation = num_elevation;
  l.azimuth_start = -std::numbers::pi;
  l.elevation_start = 0.5 * std::numbers::pi - 0.3;
  l.azimuth_fov = 2.0 * std::numbers::pi;
  l.elevation_fov = 0.6;
  l.min_range = 0.3;
  l.max_range = 20.0;
  return l;
}

Pose orbit_pose(const SyntheticScene& scene, SensorKind kind, int frame,
                int total_frames) {
  if (total_frames < 1) {
    throw std::invalid_argument("orbit_pose: total_frames must be >= 1");
  }
  const Eigen::Vector3d center = 0.5 * (scene.bbox_min + scene.bbox_max);
  const Eigen::Vector3d extent = scene.bbox_max - scene.bbox_min;
  const double theta =
      2.0 * std::numbers::pi * frame / static_cast<double>(total_frames);

  Pose pose;
  pose.t = center + Eigen::Vector3d(0.35 * extent.x() * std::cos(theta),
                                    0.35 * extent.y() * std::sin(theta),
                                    0.12 * extent.z() * std::sin(2.0 * theta));
  if (kind == SensorKind::kLidar) {
    // Spin about +z, nose towards the center; elevation stays level.
    const double yaw = std::atan2(center.y() - pose.t.y(),
                                  center.x() - pose.t.x());
    pose.R = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())
                 .toRotationMatrix();
    return pose;
  }
  // Camera: optical axis (+z) towards the center, y roughly down.
  const Eigen::Vector3d forward = (center - pose.t).normalized();
  const Eigen::Vector3d up = std::abs(forward.z()) > 0.99
                                 ? Eigen::Vector3d::UnitX()
                                 : Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d right = forward.cross(up).normalized();
  const Eigen::Vector3d down = forward.cross(right);
  pose.R.col(0) = right;
  pose.R.col(1) = down;
  pose.R.col(2) = forward;
  return pose;
}

namespace {

Dataset finish_synthetic(const SyntheticScene& scene, SensorKind kind,
                         int frames, Dataset dataset) {
  if (frames < 1) {
    throw std::invalid_argument(
        "make_synthetic_dataset: need at least one frame");
  }
  dataset.frames.resize(frames);
  for (int k = 0; k < frames; ++k) {
    DatasetFrame& frame = dataset.frames[k];
    frame.timestamp = 0.1 * k;
    frame.T_WS = orbit_pose(scene, kind, k, frames);
    frame.t = frame.T_WS.t;
    Eigen::Quaterniond q(frame.T_WS.R);
    q.normalize();
    if (q.w() < 0.0) {  // canonical sign keeps the files deterministic
      q.coeffs() = -q.coeffs();
    }
    frame.q = {q.x(), q.y(), q.z(), q.w()};
    if (kind == SensorKind::kCamera) {
      frame.depth = render_depth(scene, frame.T_WS, dataset.camera);
      frame.color = render_color(scene, frame.T_WS, dataset.camera);
      frame.has_color = true;
    } else {
      frame.depth = render_depth(scene, frame.T_WS, dataset.lidar);
    }
  }
  return dataset;
}

}  // namespace

Dataset make_synthetic_dataset(const SyntheticScene& scene, int frames,
                               const CameraIntrinsics& intrinsics) {
  Dataset dataset;
  dataset.kind = SensorKind::kCamera;
  dataset.camera = intrinsics;
  return finish_synthetic(scene, SensorKind::kCamera, frames,
                          std::move(dataset));
}

Dataset make_synthetic_dataset(const SyntheticScene& scene, int frames,
                               const LidarIntrinsics& intrinsics) {
  Dataset dataset;
  dataset.kind = SensorKind::kLidar;
  dataset.lidar = intrinsics;
  return finish_synthetic(scene, SensorKind::kLidar, frames,
                          std::move(dataset));
}

Dataset make_synthetic_dataset(const SyntheticScene& scene, SensorKind kind,
                               int frames) {
  return kind == SensorKind::kCamera
             ? make_synthetic_dataset(scene, frames,
                                      default_camera_intrinsics())
             : make_synthetic_dataset(scene, frames,
                                      default_lidar_intrinsics());
}

}  // namespace voxmap
