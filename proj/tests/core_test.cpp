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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "voxmap/core/layer.hpp"
#include "voxmap/core/layer_cake.hpp"
#include "voxmap/core/serialization.hpp"
#include "voxmap/core/voxels.hpp"

namespace voxmap {
namespace {

TEST_CASE("position_to_indices: floor semantics across the origin") {
  const double vs = 0.05;
  GridIndex g;
  VoxelIndex v;

  position_to_indices({0.0, 0.0, 0.0}, vs, &g, &v);
  CHECK(g == GridIndex{0, 0, 0});
  CHECK(v == VoxelIndex{0, 0, 0});

  position_to_indices({-0.01, 0.0, 0.0}, vs, &g, &v);
  CHECK(g == GridIndex{-1, 0, 0});
  CHECK(v == VoxelIndex{7, 0, 0});

  position_to_indices({0.43, 0.05, -0.40}, vs, &g, &v);
  CHECK(g == GridIndex{1, 0, -1});
  CHECK(v == VoxelIndex{0, 1, 0});
}

TEST_CASE("voxel_center inverts position_to_indices") {
  const double vs = 0.05;
  const Eigen::Vector3d origin_center = voxel_center({0, 0, 0}, {0, 0, 0}, vs);
  CHECK(origin_center.x() == 0.025);
  CHECK(origin_center.y() == 0.025);
  CHECK(origin_center.z() == 0.025);
  const Eigen::Vector3d neg_center = voxel_center({-1, 0, 0}, {7, 0, 0}, vs);
  CHECK(neg_center.x() == -0.025);
  CHECK(neg_center.y() == 0.025);
  CHECK(neg_center.z() == 0.025);

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> block(-50, 50);
  std::uniform_int_distribution<int> voxel(0, kVoxelsPerSide - 1);
  for (int i = 0; i < 1000; ++i) {
    const GridIndex g{block(rng), block(rng), block(rng)};
    const VoxelIndex v{voxel(rng), voxel(rng), voxel(rng)};
    GridIndex g2;
    VoxelIndex v2;
    position_to_indices(voxel_center(g, v, vs), vs, &g2, &v2);
    CHECK(g2 == g);
    CHECK(v2 == v);
  }
}

TEST_CASE("every position lies inside its voxel's cube") {
  const double vs = 0.07;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d p{coord(rng), coord(rng), coord(rng)};
    GridIndex g;
    VoxelIndex v;
    position_to_indices(p, vs, &g, &v);
    const Eigen::Vector3d c = voxel_center(g, v, vs);
    for (int k = 0; k < 3; ++k) {
      CHECK(p[k] >= c[k] - vs / 2 - 1e-12);
      CHECK(p[k] <= c[k] + vs / 2 + 1e-12);
    }
  }
}

TEST_CASE("get_or_allocate is idempotent and defaults are unknown") {
  Layer<TsdfVoxel> layer(0.05);
  VoxelBlock<TsdfVoxel>& a = layer.get_or_allocate({3, -2, 9});
  VoxelBlock<TsdfVoxel>& b = layer.get_or_allocate({3, -2, 9});
  CHECK(&a == &b);
  CHECK(layer.num_blocks() == 1);
  for (const TsdfVoxel& v : a.voxels) {
    CHECK(v.weight == 0.0f);
  }

  Layer<OccupancyVoxel> occ(0.05);
  for (const OccupancyVoxel& v : occ.get_or_allocate({0, 0, 0}).voxels) {
    CHECK(v.log_odds == 0.0f);
  }
  Layer<EsdfVoxel> esdf(0.05);
  for (const EsdfVoxel& v : esdf.get_or_allocate({0, 0, 0}).voxels) {
    CHECK_FALSE(v.observed());
  }
}

TEST_CASE("allocating 4096 distinct blocks yields 4096 blocks") {
  Layer<TsdfVoxel> layer(0.05);
  for (int x = 0; x < 16; ++x) {
    for (int y = 0; y < 16; ++y) {
      for (int z = 0; z < 16; ++z) {
        layer.get_or_allocate({x, y, z});
      }
    }
  }
  CHECK(layer.num_blocks() == 4096);
}

TEST_CASE("capacity exhaustion raises a distinct error") {
  Layer<TsdfVoxel> layer(0.05, 2);
  layer.get_or_allocate({0, 0, 0});
  layer.get_or_allocate({1, 0, 0});
  CHECK_THROWS_AS(layer.get_or_allocate({2, 0, 0}), MapCapacityError);
  layer.get_or_allocate({1, 0, 0});  // existing blocks remain reachable
}

TEST_CASE("layer cake shares voxel size across layers") {
  LayerCake cake(0.05);
  CHECK(cake.require_tsdf().voxel_size() == 0.05);
  CHECK(cake.require_esdf().voxel_size() == 0.05);
  CHECK(cake.require_color().voxel_size() == 0.05);
  CHECK(cake.require_occupancy().voxel_size() == 0.05);
}

TEST_CASE("snapshot round-trip is byte-identical") {
  const double vs = 0.05;
  LayerCake cake(vs);
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> block(-4, 4);
  std::uniform_real_distribution<float> dist(-0.2f, 0.2f);
  for (int i = 0; i < 20; ++i) {
    const GridIndex g{block(rng), block(rng), block(rng)};
    VoxelBlock<TsdfVoxel>& tb = cake.require_tsdf().get_or_allocate(g);
    for (TsdfVoxel& v : tb.voxels) {
      v.distance = dist(rng);
      v.weight = 1.0f;
    }
    VoxelBlock<EsdfVoxel>& eb = cake.require_esdf().get_or_allocate(g);
    for (EsdfVoxel& v : eb.voxels) {
      v.flags = EsdfVoxel::kObserved;
      v.squared_distance = 41;
      v.parent_x = 3;
      v.parent_y = -4;
      v.parent_z = 4;
    }
  }

  const auto dir = std::filesystem::temp_directory_path();
  const auto path_a = dir / "voxmap_core_test_a.vxlf";
  const auto path_b = dir / "voxmap_core_test_b.vxlf";
  save_snapshot(cake, path_a.string());

  LayerCake loaded = load_snapshot(path_a.string());
  CHECK(loaded.voxel_size == vs);
  save_snapshot(loaded, path_b.string());

  std::ifstream fa(path_a, std::ios::binary);
  std::ifstream fb(path_b, std::ios::binary);
  const std::string bytes_a((std::istreambuf_iterator<char>(fa)),
                            std::istreambuf_iterator<char>());
  const std::string bytes_b((std::istreambuf_iterator<char>(fb)),
                            std::istreambuf_iterator<char>());
  CHECK(bytes_a == bytes_b);
  CHECK(!bytes_a.empty());
  CHECK(bytes_a.substr(0, 4) == "VXLF");

  std::filesystem::remove(path_a);
  std::filesystem::remove(path_b);
}

TEST_CASE("snapshot loading rejects corrupted input") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "voxmap_core_test_bad.vxlf";
  {
    std::ofstream f(path, std::ios::binary);
    f << "NOPE this is not a snapshot";
  }
  CHECK_THROWS_AS(load_snapshot(path.string()), IoError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace voxmap
