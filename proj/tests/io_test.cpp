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

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "voxmap/core/indexing.hpp"
#include "voxmap/core/serialization.hpp"
#include "voxmap/eval/error.hpp"
#include "voxmap/io/dataset.hpp"
#include "voxmap/io/pipeline.hpp"
#include "voxmap/io/render.hpp"
#include "voxmap/io/scene.hpp"
#include "voxmap/io/slice.hpp"
#include "voxmap/mesh/ply.hpp"

namespace voxmap {
namespace {

namespace fs = std::filesystem;

/// Fresh scratch directory under the system temp root.
fs::path scratch_dir(const std::string& tag) {
  const fs::path dir =
      fs::temp_directory_path() / ("voxmap_io_" + tag + "_" +
                                   std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Maps file name -> content for every regular file in a directory.
std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> contents;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      contents[entry.path().filename().string()] = read_file(entry.path());
    }
  }
  return contents;
}

TEST_CASE("primitive signed distances match closed forms") {
  // Sphere of radius 2 at the origin.
  const ScenePrimitive sphere = make_sphere({0.0, 0.0, 0.0}, 2.0);
  CHECK(sphere.sdf({5.0, 0.0, 0.0}) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sphere.sdf({0.0, 0.0, 0.0}) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(sphere.sdf({0.0, 1.0, 0.0}) == doctest::Approx(-1.0).epsilon(1e-12));

  // Unit box [0,1]^3: face, edge and corner distances.
  const ScenePrimitive box = make_box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  CHECK(box.sdf({0.5, 0.5, 2.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(box.sdf({2.0, 2.0, 0.5}) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(box.sdf({2.0, 2.0, 2.0}) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(box.sdf({0.5, 0.5, 0.5}) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(box.sdf({0.1, 0.5, 0.5}) == doctest::Approx(-0.1).epsilon(1e-12));

  // Half space below z = 1.
  const ScenePrimitive plane = make_plane({0.0, 0.0, 1.0}, {0.0, 0.0, 4.0});
  CHECK(plane.sdf({7.0, -3.0, 3.5}) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(plane.sdf({0.0, 0.0, 0.0}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_plane({0, 0, 0}, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("scene sdf is the minimum over primitives and 1-Lipschitz") {
  const SyntheticScene scene = make_scene("room");
  CHECK(scene.primitives.size() == 9);  // 6 walls + 2 boxes + 1 sphere

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(-1.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Vector3d a{coord(rng), coord(rng), coord(rng)};
    const Eigen::Vector3d b{coord(rng), coord(rng), coord(rng)};
    double expected = std::numeric_limits<double>::infinity();
    for (const ScenePrimitive& prim : scene.primitives) {
      expected = std::min(expected, prim.sdf(a));
    }
    CHECK(scene.sdf(a) == expected);
    // 1-Lipschitz: the field changes no faster than the points move.
    CHECK(std::abs(scene.sdf(a) - scene.sdf(b)) <= (a - b).norm() + 1e-12);
  }

  // The room interior is free space; inside the table box is solid.
  CHECK(scene.sdf({0.5, 2.5, 1.8}) > 0.0);
  CHECK(scene.sdf({1.7, 1.0, 0.4}) < 0.0);

  CHECK_THROWS_AS(make_scene("atlantis"), std::invalid_argument);
}

TEST_CASE("scene json round trip preserves every primitive exactly") {
  for (const char* name : {"sphere_in_box", "room", "corridor"}) {
    CAPTURE(name);
    const SyntheticScene scene = make_scene(name);
    const SyntheticScene back = scene_from_json(scene_to_json(scene));
    CHECK(back.name == scene.name);
    CHECK(back.bbox_min == scene.bbox_min);
    CHECK(back.bbox_max == scene.bbox_max);
    REQUIRE(back.primitives.size() == scene.primitives.size());
    for (size_t i = 0; i < scene.primitives.size(); ++i) {
      const ScenePrimitive& p = scene.primitives[i];
      const ScenePrimitive& q = back.primitives[i];
      CHECK(q.kind == p.kind);
      CHECK(q.center == p.center);
      CHECK(q.radius == p.radius);
      CHECK(q.box_min == p.box_min);
      CHECK(q.box_max == p.box_max);
      CHECK(q.point == p.point);
      CHECK(q.normal == p.normal);
    }
    // Serialization is deterministic, so a second pass is byte-identical.
    CHECK(scene_to_json(back) == scene_to_json(scene));
  }

  CHECK_THROWS_AS(scene_from_json("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(scene_from_json(R"({"name":"x","bbox_min":[0,0,0],
      "bbox_max":[1,1,1],"primitives":[{"type":"torus"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(load_scene("/nonexistent/scene.json"), IoError);
}

TEST_CASE("camera depth rendering matches analytic distances") {
  // A lone floor plane at z = 0, camera 2 m above looking straight down.
  SyntheticScene scene;
  scene.name = "floor";
  scene.primitives.push_back(make_plane({0, 0, 0}, {0, 0, 1}));
  scene.bbox_min = {-5, -5, 0};
  scene.bbox_max = {5, 5, 4};

  const CameraIntrinsics cam = default_camera_intrinsics(64, 48);
  Pose pose;  // camera +z looks along world -z
  pose.R.col(0) = Eigen::Vector3d::UnitX();
  pose.R.col(1) = Eigen::Vector3d::UnitY();
  pose.R.col(2) = -Eigen::Vector3d::UnitZ();
  pose.R.col(1) = pose.R.col(2).cross(pose.R.col(0));
  pose.t = {0, 0, 2};
  REQUIRE(pose.valid());

  const DepthImage depth = render_depth(scene, pose, cam);
  int valid = 0;
  for (int r = 0; r < cam.height; ++r) {
    for (int c = 0; c < cam.width; ++c) {
      const float d = depth.at(c, r);
      if (!DepthImage::valid_depth(d)) {
        continue;
      }
      ++valid;
      // Perpendicular depth to a fronto-parallel plane is constant: the
      // sphere tracer must reproduce the 2 m standoff on every pixel.
      CHECK(d == doctest::Approx(2.0).epsilon(1e-3));
      const Eigen::Vector3d hit =
          pose * cam.unproject(c + 0.5, r + 0.5, double(d));
      CHECK(std::abs(scene.sdf(hit)) < 2e-3);
    }
  }
  CHECK(valid == cam.width * cam.height);
}

TEST_CASE("rendered hits lie on scene surfaces for all named scenes") {
  for (const char* name : {"sphere_in_box", "room", "corridor"}) {
    CAPTURE(name);
    const SyntheticScene scene = make_scene(name);
    const CameraIntrinsics cam = default_camera_intrinsics(48, 36);
    const Pose pose = orbit_pose(scene, SensorKind::kCamera, 1, 7);
    REQUIRE(pose.valid());
    const DepthImage depth = render_depth(scene, pose, cam);
    int valid = 0;
    for (int r = 0; r < cam.height; ++r) {
      for (int c = 0; c < cam.width; ++c) {
        const float d = depth.at(c, r);
        if (!DepthImage::valid_depth(d)) {
          continue;
        }
        ++valid;
        const Eigen::Vector3d hit =
            pose * cam.unproject(c + 0.5, r + 0.5, double(d));
        CHECK(std::abs(scene.sdf(hit)) < 2e-3);
        CHECK(double(d) <= cam.max_depth + 1e-9);
      }
    }
    // Closed rooms leave no escape: every ray lands somewhere.
    CHECK(valid == cam.width * cam.height);
  }
}

TEST_CASE("lidar rendering returns ranges with min-range blanking") {
  const SyntheticScene scene = make_scene("corridor");
  LidarIntrinsics lidar = default_lidar_intrinsics(96, 12);
  const Pose pose = orbit_pose(scene, SensorKind::kLidar, 3, 11);
  REQUIRE(pose.valid());

  const DepthImage depth = render_depth(scene, pose, lidar);
  int valid = 0;
  for (int r = 0; r < lidar.num_elevation; ++r) {
    for (int c = 0; c < lidar.num_azimuth; ++c) {
      const float range = depth.at(c, r);
      if (!DepthImage::valid_depth(range)) {
        continue;
      }
      ++valid;
      CHECK(range >= lidar.min_range);
      CHECK(range <= lidar.max_range + 1e-9);
      const Eigen::Vector3d hit =
          pose * lidar.unproject(c + 0.5, r + 0.5, double(range));
      CHECK(std::abs(scene.sdf(hit)) < 2e-3);
    }
  }
  CHECK(valid > lidar.num_azimuth * lidar.num_elevation / 2);
}

TEST_CASE("render_color shades hits by surface normal") {
  const SyntheticScene scene = make_scene("sphere_in_box");
  const CameraIntrinsics cam = default_camera_intrinsics(32, 24);
  const Pose pose = orbit_pose(scene, SensorKind::kCamera, 0, 5);
  const ColorImage color = render_color(scene, pose, cam);
  const DepthImage depth = render_depth(scene, pose, cam);
  REQUIRE(color.width == cam.width);
  REQUIRE(color.height == cam.height);

  int checked = 0;
  for (int r = 0; r < cam.height; ++r) {
    for (int c = 0; c < cam.width; ++c) {
      const float d = depth.at(c, r);
      if (!DepthImage::valid_depth(d)) {
        continue;
      }
      const Eigen::Vector3d hit =
          pose * cam.unproject(c + 0.5, r + 0.5, double(d));
      const Eigen::Vector3d n = scene.sdf_gradient(hit);
      for (int ch = 0; ch < 3; ++ch) {
        const double expected = 255.0 * 0.5 * (n[ch] + 1.0);
        CHECK(std::abs(double(color.at(c, r)[ch]) - expected) <= 2.0);
      }
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("synthetic datasets save, load and round-trip byte-identically") {
  const SyntheticScene scene = make_scene("sphere_in_box");
  const Dataset dataset =
      make_synthetic_dataset(scene, 4, default_camera_intrinsics(40, 30));
  REQUIRE(dataset.frames.size() == 4);

  const fs::path dir_a = scratch_dir("roundtrip_a");
  const fs::path dir_b = scratch_dir("roundtrip_b");
  save_dataset(dataset, dir_a.string());

  const Dataset loaded = load_dataset(dir_a.string());
  CHECK(loaded.kind == SensorKind::kCamera);
  CHECK(loaded.camera.width == 40);
  CHECK(loaded.camera.fu == dataset.camera.fu);
  REQUIRE(loaded.frames.size() == dataset.frames.size());
  for (size_t k = 0; k < loaded.frames.size(); ++k) {
    const DatasetFrame& a = dataset.frames[k];
    const DatasetFrame& b = loaded.frames[k];
    CHECK(b.timestamp == a.timestamp);
    CHECK(b.t == a.t);
    CHECK(b.q == a.q);
    CHECK(b.has_color);
    // Depth survives the millimeter quantization applied on save.
    for (size_t i = 0; i < b.depth.data.size(); ++i) {
      CHECK(std::abs(b.depth.data[i] - a.depth.data[i]) <= 5.1e-4f);
    }
    CHECK(b.color.data == a.color.data);
  }

  // Saving what was loaded reproduces every file byte for byte.
  save_dataset(loaded, dir_b.string());
  const auto files_a = dir_contents(dir_a);
  const auto files_b = dir_contents(dir_b);
  REQUIRE(files_a.size() == files_b.size());
  for (const auto& [name, content] : files_a) {
    CAPTURE(name);
    REQUIRE(files_b.count(name) == 1);
    CHECK(files_b.at(name) == content);
  }

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("load_dataset raises a distinct error per failure mode") {
  const SyntheticScene scene = make_scene("sphere_in_box");
  const Dataset dataset =
      make_synthetic_dataset(scene, 3, default_camera_intrinsics(16, 12));
  const fs::path dir = scratch_dir("errors");
  save_dataset(dataset, dir.string());
  const std::string poses = read_file(dir / "poses.txt");
  const std::string intrinsics = read_file(dir / "intrinsics.txt");

  const auto write = [](const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  };

  SUBCASE("missing directory") {
    CHECK_THROWS_AS(load_dataset((dir / "nope").string()), MissingFileError);
  }
  SUBCASE("missing poses file") {
    fs::remove(dir / "poses.txt");
    CHECK_THROWS_AS(load_dataset(dir.string()), MissingFileError);
  }
  SUBCASE("missing depth image") {
    fs::remove(dir / "depth_000001.pgm");
    CHECK_THROWS_AS(load_dataset(dir.string()), MissingFileError);
  }
  SUBCASE("depth dimensions disagree with intrinsics") {
    write(dir / "intrinsics.txt",
          "sensor=camera\nwidth=99\nheight=12\nfu=8\nfv=8\ncu=8\ncv=6\n"
          "max_depth=10\n");
    CHECK_THROWS_AS(load_dataset(dir.string()), DimensionMismatchError);
  }
  SUBCASE("timestamps must strictly increase") {
    std::istringstream lines(poses);
    std::string l0, l1, l2;
    std::getline(lines, l0);
    std::getline(lines, l1);
    std::getline(lines, l2);
    write(dir / "poses.txt", l0 + "\n" + l2 + "\n" + l1 + "\n");
    CHECK_THROWS_AS(load_dataset(dir.string()), TimestampOrderError);
  }
  SUBCASE("equal timestamps are rejected too") {
    std::istringstream lines(poses);
    std::string l0;
    std::getline(lines, l0);
    write(dir / "poses.txt", l0 + "\n" + l0 + "\n");
    CHECK_THROWS_AS(load_dataset(dir.string()), TimestampOrderError);
  }
  SUBCASE("malformed pose line") {
    write(dir / "poses.txt", "0.0 1 2 3 0 0 0\n");  // 7 fields
    CHECK_THROWS_AS(load_dataset(dir.string()), FormatError);
  }
  SUBCASE("denormalized quaternion") {
    write(dir / "poses.txt", "0.0 1 2 3 0 0 0 1.01\n");
    CHECK_THROWS_AS(load_dataset(dir.string()), FormatError);
  }
  SUBCASE("unknown intrinsics key") {
    write(dir / "intrinsics.txt", intrinsics + "zoom=2\n");
    CHECK_THROWS_AS(load_dataset(dir.string()), FormatError);
  }
  SUBCASE("missing intrinsics key") {
    write(dir / "intrinsics.txt", "sensor=camera\nwidth=16\n");
    CHECK_THROWS_AS(load_dataset(dir.string()), FormatError);
  }
  SUBCASE("unknown sensor kind") {
    write(dir / "intrinsics.txt", "sensor=sonar\n");
    CHECK_THROWS_AS(load_dataset(dir.string()), FormatError);
  }

  fs::remove_all(dir);
}

TEST_CASE("esdf slice reports stored distances on a regular grid") {
  const double vs = 0.1;
  Layer<TsdfVoxel> tsdf(vs);
  // A single occupied column at the map origin block.
  VoxelBlock<TsdfVoxel>& blk = tsdf.get_or_allocate({0, 0, 0});
  for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
    blk.voxels[lin].weight = 1.0f;
    blk.voxels[lin].distance = 0.5f;
  }
  blk.voxels[linear_voxel_index({4, 4, 4})].distance = 0.0f;

  Layer<EsdfVoxel> esdf(vs);
  EsdfConfig cfg;
  cfg.site_threshold = vs;
  update_esdf(esdf, tsdf, {{0, 0, 0}}, cfg);

  const fs::path dir = scratch_dir("slice");
  const std::string path = (dir / "slice.csv").string();
  save_esdf_slice(esdf, 0.45, path);  // voxel row z = 4

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // comment
  CHECK(line.substr(0, 1) == "#");
  std::getline(in, line);
  CHECK(line == "x,y,distance");
  int rows = 0;
  int finite = 0;
  bool site_seen = false;
  while (std::getline(in, line)) {
    double x = 0, y = 0, d = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &d) >= 2);
    ++rows;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &d) == 3 &&
        std::isfinite(d)) {
      ++finite;
      // Cross-check against the stored voxel under this center.
      const GlobalVoxelIndex gv =
          position_to_global_voxel({x, y, 0.45}, vs);
      const EsdfVoxel& v = esdf.block_ptr(block_of_global_voxel(gv))
                               ->voxels[linear_voxel_index(
                                   local_voxel_of_global(gv))];
      CHECK(esdf_distance(v, vs) == doctest::Approx(d).epsilon(1e-9));
      if (d == 0.0) {
        site_seen = true;
      }
    }
  }
  // The allocated x/y rectangle spans at least the ESDF's blocks.
  CHECK(rows >= 8 * 8);
  CHECK(finite >= 64);
  CHECK(site_seen);

  Layer<EsdfVoxel> empty(vs);
  CHECK_THROWS_AS(save_esdf_slice(empty, 0.0, path), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("replay fuses a dataset and derives layers on cadence") {
  const SyntheticScene scene = make_scene("sphere_in_box");
  const Dataset dataset =
      make_synthetic_dataset(scene, 6, default_camera_intrinsics(64, 48));
  ReplayConfig config = make_replay_config(0.1);
  config.with_color = true;

  const ReplayResult result = replay(dataset, config);
  REQUIRE(result.timings.size() == 6);
  CHECK(result.cake.tsdf != nullptr);
  CHECK(result.cake.color != nullptr);
  CHECK(result.cake.esdf != nullptr);
  CHECK(result.cake.mesh != nullptr);
  CHECK(result.cake.occupancy == nullptr);
  CHECK(result.cake.esdf->num_blocks() > 0);
  CHECK(result.cake.mesh->num_blocks() > 0);

  for (const FrameTiming& t : result.timings) {
    CHECK(t.tsdf_ms > 0.0);
    CHECK(t.color_ms > 0.0);
    // Derived layers update on frames 3 and 5 (cadence 4 plus final).
    const bool expect_update = t.frame == 3 || t.frame == 5;
    CHECK((t.esdf_ms > 0.0) == expect_update);
    CHECK((t.mesh_ms > 0.0) == expect_update);
  }

  // Every mesh vertex hugs the true geometry.
  const ErrorStats stats = surface_error(
      *result.cake.mesh,
      [&scene](const Eigen::Vector3d& p) { return scene.sdf(p); });
  CHECK(stats.rms <= 0.5 * config.voxel_size);

  SUBCASE("timing csv uses the pinned header and 3 decimals") {
    const fs::path dir = scratch_dir("timing");
    const std::string path = (dir / "timing.csv").string();
    write_timing_csv(result.timings, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "frame,tsdf_ms,color_ms,esdf_ms,mesh_ms");
    int rows = 0;
    while (std::getline(in, line)) {
      int frame = 0;
      double a = 0, b = 0, c = 0, d = 0;
      REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &frame, &a, &b,
                          &c, &d) == 5);
      // Three decimals exactly: every comma-separated field has them.
      CHECK(std::count(line.begin(), line.end(), '.') == 4);
      ++rows;
    }
    CHECK(rows == 6);
    fs::remove_all(dir);
  }
}

TEST_CASE("replay is deterministic down to the serialized snapshot") {
  const SyntheticScene scene = make_scene("room");
  const Dataset dataset =
      make_synthetic_dataset(scene, 5, default_camera_intrinsics(48, 36));
  const ReplayConfig config = make_replay_config(0.1);

  const fs::path dir = scratch_dir("determinism");
  const ReplayResult a = replay(dataset, config);
  const ReplayResult b = replay(dataset, config);
  save_snapshot(a.cake, (dir / "a.vxlf").string());
  save_snapshot(b.cake, (dir / "b.vxlf").string());
  CHECK(read_file(dir / "a.vxlf") == read_file(dir / "b.vxlf"));

  save_mesh_ply(*a.cake.mesh, (dir / "a.ply").string());
  save_mesh_ply(*b.cake.mesh, (dir / "b.ply").string());
  CHECK(read_file(dir / "a.ply") == read_file(dir / "b.ply"));
  fs::remove_all(dir);
}

TEST_CASE("replay maps lidar datasets into occupancy") {
  const SyntheticScene scene = make_scene("corridor");
  const Dataset dataset =
      make_synthetic_dataset(scene, 3, default_lidar_intrinsics(128, 16));
  ReplayConfig config = make_replay_config(0.1);
  config.use_occupancy = true;

  const ReplayResult result = replay(dataset, config);
  CHECK(result.cake.occupancy != nullptr);
  CHECK(result.cake.tsdf == nullptr);
  CHECK(result.cake.mesh == nullptr);  // meshes come from TSDF only
  CHECK(result.cake.esdf != nullptr);
  CHECK(result.cake.esdf->num_blocks() > 0);
}

TEST_CASE("replay rejects invalid requests") {
  const SyntheticScene scene = make_scene("sphere_in_box");
  Dataset empty;
  CHECK_THROWS_AS(replay(empty, make_replay_config(0.1)),
                  std::invalid_argument);

  const Dataset lidar_set =
      make_synthetic_dataset(scene, 1, default_lidar_intrinsics(64, 8));
  ReplayConfig config = make_replay_config(0.1);
  config.with_color = true;
  CHECK_THROWS_AS(replay(lidar_set, config), std::invalid_argument);

  const Dataset cam_set =
      make_synthetic_dataset(scene, 1, default_camera_intrinsics(16, 12));
  ReplayConfig bad_cadence = make_replay_config(0.1);
  bad_cadence.update_every = 0;
  CHECK_THROWS_AS(replay(cam_set, bad_cadence), std::invalid_argument);
}

}  // namespace
}  // namespace voxmap
