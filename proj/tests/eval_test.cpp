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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "voxmap/core/indexing.hpp"
#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"
#include "voxmap/esdf/integrator.hpp"
#include "voxmap/eval/error.hpp"
#include "voxmap/eval/oracle.hpp"
#include "voxmap/integrate/integrator.hpp"
#include "voxmap/io/dataset.hpp"
#include "voxmap/io/render.hpp"
#include "voxmap/io/scene.hpp"
#include "voxmap/mesh/mesh_layer.hpp"
#include "voxmap/sensor/camera.hpp"
#include "voxmap/sensor/image.hpp"

namespace voxmap {
namespace {

int64_t squared_norm(const GlobalVoxelIndex& a, const GlobalVoxelIndex& b) {
  const int64_t dx = int64_t(a.x) - b.x;
  const int64_t dy = int64_t(a.y) - b.y;
  const int64_t dz = int64_t(a.z) - b.z;
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

TEST_CASE("oracle distances match an independent exhaustive scan") {
  std::mt19937 rng(0x00c0ffeeu);
  const double vs = 0.1;
  EsdfConfig cfg;
  cfg.max_distance = 1.2;  // 12 voxels before the far field saturates

  // A fully observed 32x32x32 free region with scattered obstacles: single
  // voxels (all boundary) plus solid cubes (which have interior voxels).
  Layer<OccupancyVoxel> occ(vs);
  constexpr int kSide = 32;
  for (int bz = 0; bz < kSide / kVoxelsPerSide; ++bz) {
    for (int by = 0; by < kSide / kVoxelsPerSide; ++by) {
      for (int bx = 0; bx < kSide / kVoxelsPerSide; ++bx) {
        auto& blk = occ.get_or_allocate({bx, by, bz});
        for (auto& v : blk.voxels) {
          v.log_odds = -1.0f;
        }
      }
    }
  }
  const auto occupy = [&](int x, int y, int z) {
    occ.voxel_ptr(GlobalVoxelIndex{x, y, z})->log_odds = 2.0f;
  };
  std::uniform_int_distribution<int> coord(0, kSide - 1);
  for (int i = 0; i < 12; ++i) {
    occupy(coord(rng), coord(rng), coord(rng));
  }
  for (const auto& [ox, oy, oz, side] :
       std::vector<std::array<int, 4>>{{4, 5, 6, 3}, {20, 18, 9, 4}}) {
    for (int z = 0; z < side; ++z) {
      for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
          occupy(ox + x, oy + y, oz + z);
        }
      }
    }
  }

  Layer<EsdfVoxel> esdf(vs);
  update_esdf(esdf, occ, occ.sorted_indices(), cfg);
  const Layer<EsdfVoxel> oracle = brute_force_esdf(esdf, cfg);

  // Reconstruct the classification and the exact distances from the
  // occupancy grid alone, with plain global-index arithmetic.
  const auto log_odds_at = [&](int x, int y, int z) -> float {
    const OccupancyVoxel* v = occ.voxel_ptr(GlobalVoxelIndex{x, y, z});
    return v ? v->log_odds : 0.0f;
  };
  const auto is_occupied = [&](int x, int y, int z) {
    return log_odds_at(x, y, z) > cfg.occupied_log_odds_threshold &&
           log_odds_at(x, y, z) != 0.0f;
  };
  const auto is_free = [&](int x, int y, int z) {
    const float lo = log_odds_at(x, y, z);
    return lo != 0.0f && !(lo > cfg.occupied_log_odds_threshold);
  };
  std::vector<GlobalVoxelIndex> sites;
  for (int z = 0; z < kSide; ++z) {
    for (int y = 0; y < kSide; ++y) {
      for (int x = 0; x < kSide; ++x) {
        if (!is_occupied(x, y, z)) {
          continue;
        }
        const bool boundary = is_free(x + 1, y, z) || is_free(x - 1, y, z) ||
                              is_free(x, y + 1, z) || is_free(x, y - 1, z) ||
                              is_free(x, y, z + 1) || is_free(x, y, z - 1);
        if (boundary) {
          sites.push_back({x, y, z});
        }
      }
    }
  }
  REQUIRE(sites.size() > 20);

  const int32_t max_sq = esdf_max_squared(cfg, vs);
  const int32_t cap_sq = esdf_interior_cap_squared(cfg, vs);
  size_t saturated = 0;
  size_t interior = 0;
  for (const GridIndex& g : oracle.sorted_indices()) {
    const auto& blk = *oracle.block_ptr(g);
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const EsdfVoxel& ov = blk.voxels[lin];
      const GlobalVoxelIndex gv =
          global_voxel_index(g, voxel_index_from_linear(lin));

      // Flags reproduce the source classification untouched.
      REQUIRE(ov.observed() == (log_odds_at(gv.x, gv.y, gv.z) != 0.0f));
      if (!ov.observed()) {
        continue;
      }
      CHECK(ov.inside() == is_occupied(gv.x, gv.y, gv.z));
      const bool should_be_site =
          std::find_if(sites.begin(), sites.end(), [&](const auto& s) {
            return s.x == gv.x && s.y == gv.y && s.z == gv.z;
          }) != sites.end();
      CHECK(ov.is_site() == should_be_site);

      int64_t best = std::numeric_limits<int64_t>::max();
      for (const GlobalVoxelIndex& s : sites) {
        best = std::min(best, squared_norm(gv, s));
      }
      const int32_t limit = ov.inside() ? cap_sq : max_sq;
      const int32_t expected =
          static_cast<int32_t>(std::min<int64_t>(best, limit));
      CHECK(ov.squared_distance == expected);

      if (ov.is_site()) {
        CHECK(ov.squared_distance == 0);
        continue;
      }
      if (expected == limit && best >= limit) {
        ++saturated;
      }
      interior += ov.inside() ? 1 : 0;
      if (ov.has_parent()) {
        // A claimed parent must be a real site at exactly the stored
        // distance.
        const GlobalVoxelIndex p{gv.x + ov.parent_x, gv.y + ov.parent_y,
                                 gv.z + ov.parent_z};
        CHECK(is_occupied(p.x, p.y, p.z));
        CHECK(squared_norm(gv, p) == ov.squared_distance);
      }
    }
  }
  CHECK(saturated > 0);  // the domain is large enough to clip the far field
  CHECK(interior > 0);   // the cubes contributed non-site interiors

  // The production field agrees with the oracle to the documented accuracy.
  const EsdfComparison cmp = compare_esdf(esdf, oracle);
  REQUIRE(cmp.compared > 10000);
  CHECK(cmp.flag_mismatches == 0);
  CHECK(cmp.within_one_voxel == cmp.compared);
  CHECK(double(cmp.exact) >= 0.99 * double(cmp.compared));
}

TEST_CASE("field error against the analytic scene shrinks with resolution") {
  const SyntheticScene scene = make_scene("sphere_in_box");
  const SdfFunction sdf = [&](const Eigen::Vector3d& p) {
    return scene.sdf(p);
  };
  const CameraIntrinsics cam = default_camera_intrinsics(160, 120);

  const auto field_error = [&](double vs) {
    IntegratorConfig icfg;
    icfg.truncation = 4 * vs;
    EsdfConfig ecfg;
    ecfg.site_threshold = vs;
    Layer<TsdfVoxel> tsdf(vs);
    Layer<EsdfVoxel> esdf(vs);
    for (int k = 0; k < 8; ++k) {
      const Pose T_WC = orbit_pose(scene, SensorKind::kCamera, k, 8);
      const DepthImage depth = render_depth(scene, T_WC, cam);
      const auto changed = integrate_depth(tsdf, depth, T_WC, cam, icfg);
      update_esdf(esdf, tsdf, changed, ecfg);
    }
    return esdf_error(esdf, sdf, ecfg);
  };

  const ErrorStats fine = field_error(0.05);
  const ErrorStats coarse = field_error(0.2);
  CHECK(fine.count > 10000);
  CHECK(fine.median_abs <= 0.05);
  CHECK(coarse.median_abs <= 0.2);
  CHECK(coarse.median_abs >= fine.median_abs);
}

TEST_CASE("error statistics agree with a direct recomputation") {
  std::mt19937 rng(0xbeef5eedu);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (const size_t n : {size_t(1), size_t(2), size_t(17), size_t(1000)}) {
    std::vector<double> errors(n);
    for (double& e : errors) {
      e = noise(rng);
    }
    const ErrorStats stats = compute_error_stats(errors);

    std::vector<double> abs_sorted(n);
    std::transform(errors.begin(), errors.end(), abs_sorted.begin(),
                   [](double v) { return std::abs(v); });
    std::sort(abs_sorted.begin(), abs_sorted.end());
    const auto nearest_rank = [&](double pct) {
      const size_t rank = size_t(std::ceil(pct / 100.0 * double(n)));
      return abs_sorted[std::max<size_t>(rank, 1) - 1];
    };
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : abs_sorted) {
      sum += v;
      sum_sq += v * v;
    }

    CHECK(stats.count == n);
    CHECK(stats.mean_abs == doctest::Approx(sum / double(n)).epsilon(1e-12));
    CHECK(stats.median_abs == nearest_rank(50.0));
    CHECK(stats.p95_abs == nearest_rank(95.0));
    CHECK(stats.max_abs == abs_sorted.back());
    CHECK(stats.rms ==
          doctest::Approx(std::sqrt(sum_sq / double(n))).epsilon(1e-12));

    // Ordering invariants of any absolute-error summary.
    CHECK(stats.median_abs <= stats.p95_abs);
    CHECK(stats.p95_abs <= stats.max_abs);
    CHECK(stats.mean_abs <= stats.max_abs);
    CHECK(stats.rms >= stats.mean_abs * (1.0 - 1e-12));

    // JSON serialization is lossless.
    const ErrorStats back = error_stats_from_json(error_stats_to_json(stats));
    CHECK(back == stats);
  }
}

TEST_CASE("evaluation helpers refuse degenerate inputs") {
  CHECK_THROWS_AS(compute_error_stats({}), std::invalid_argument);

  const SdfFunction unit_sphere = [](const Eigen::Vector3d& p) {
    return p.norm() - 1.0;
  };

  SUBCASE("an empty mesh has no surface error") {
    const MeshLayer mesh(0.4);
    CHECK_THROWS_AS(surface_error(mesh, unit_sphere), std::invalid_argument);
  }

  SUBCASE("a field with nothing comparable has no field error") {
    EsdfConfig cfg;
    Layer<EsdfVoxel> esdf(0.1);
    CHECK_THROWS_AS(esdf_error(esdf, unit_sphere, cfg), std::invalid_argument);
  }

  SUBCASE("the exhaustive oracle needs at least one site") {
    EsdfConfig cfg;
    Layer<EsdfVoxel> esdf(0.1);
    auto& blk = esdf.get_or_allocate({0, 0, 0});
    blk.voxels[0].flags = EsdfVoxel::kObserved;
    CHECK_THROWS_AS(brute_force_esdf(esdf, cfg), std::invalid_argument);
  }

  SUBCASE("the exhaustive oracle rejects oversized domains") {
    EsdfConfig cfg;
    Layer<EsdfVoxel> esdf(0.1);
    const int blocks_over_limit = 1000000 / kVoxelsPerBlock + 1;
    for (int i = 0; i < blocks_over_limit; ++i) {
      esdf.get_or_allocate({i, 0, 0});
    }
    CHECK_THROWS_AS(brute_force_esdf(esdf, cfg), std::invalid_argument);
  }
}

TEST_CASE("field comparison helpers count what actually differs") {
  const double vs = 0.1;
  Layer<EsdfVoxel> a(vs);
  auto& blk = a.get_or_allocate({0, 0, 0});
  for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
    auto& v = blk.voxels[lin];
    v.flags = EsdfVoxel::kObserved;
    v.squared_distance = lin % 40;
  }
  blk.voxels[7].flags |= EsdfVoxel::kSite;
  blk.voxels[7].squared_distance = 0;

  Layer<EsdfVoxel> b = a.clone();
  CHECK(esdf_identical(a, b));
  const EsdfComparison same = compare_esdf(a, b);
  CHECK(same.compared == kVoxelsPerBlock);
  CHECK(same.exact == same.compared);
  CHECK(same.within_one_voxel == same.compared);
  CHECK(same.flag_mismatches == 0);
  CHECK(same.max_abs_error == 0.0);

  // One voxel nudged by a sub-voxel amount: not exact, still within one.
  b.block_ptr({0, 0, 0})->voxels[3].squared_distance += 1;
  CHECK(!esdf_identical(a, b));
  const EsdfComparison nudged = compare_esdf(a, b);
  CHECK(nudged.exact == nudged.compared - 1);
  CHECK(nudged.within_one_voxel == nudged.compared);
  CHECK(nudged.max_abs_error > 0.0);
  CHECK(nudged.max_abs_error <= vs);

  // A flag flip is a classification mismatch, not a distance error.
  b.block_ptr({0, 0, 0})->voxels[3].squared_distance -= 1;
  b.block_ptr({0, 0, 0})->voxels[9].flags |= EsdfVoxel::kInside;
  const EsdfComparison flipped = compare_esdf(a, b);
  CHECK(flipped.flag_mismatches == 1);
  CHECK(!esdf_identical(a, b));
}

}  // namespace voxmap
