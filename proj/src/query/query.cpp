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

#include "voxmap/query/query.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "voxmap/core/indexing.hpp"
#include "voxmap/esdf/integrator.hpp"

namespace voxmap {
namespace {

/// Weights snapping closer than this (in voxel units) to a lattice corner
/// collapse to it, so queries at voxel centers return stored values exactly.
constexpr double kCornerSnap = 1e-6;

/// Single-entry block cache: spatially adjacent lookups usually land in the
/// same block, sparing the hash probe.
struct CachedLayer {
  const Layer<EsdfVoxel>* layer;
  GridIndex cached_index{INT32_MIN, INT32_MIN, INT32_MIN};
  const VoxelBlock<EsdfVoxel>* cached_block = nullptr;

  const EsdfVoxel* voxel(const GlobalVoxelIndex& gv) {
    const GridIndex g = block_of_global_voxel(gv);
    if (!(g == cached_index)) {
      cached_index = g;
      cached_block = layer->block_ptr(g);
    }
    if (cached_block == nullptr) {
      return nullptr;
    }
    return &cached_block->voxels[size_t(
        linear_voxel_index(local_voxel_of_global(gv)))];
  }
};

/// Gradient fallback: the distance field grows away from the parent site
/// outside an obstacle and toward it inside.
Eigen::Vector3d parent_gradient(const EsdfVoxel& v) {
  if (!v.has_parent()) {
    return Eigen::Vector3d::Zero();
  }
  const Eigen::Vector3d off(v.parent_x, v.parent_y, v.parent_z);
  return v.inside() ? off.normalized() : Eigen::Vector3d(-off.normalized());
}

QueryResult query_point(CachedLayer& map, const Eigen::Vector3d& p,
                        bool want_gradient, const QueryConfig& cfg) {
  QueryResult out;
  if (!p.allFinite()) {
    return out;
  }
  const double vs = map.layer->voxel_size();
  const EsdfVoxel* at = map.voxel(position_to_global_voxel(p, vs));
  if (at == nullptr || !at->observed()) {
    return out;
  }
  out.known = true;

  // Interpolation cell: the dual cube spanned by the eight voxel centers
  // around p, with snapped barycentric weights.
  const Eigen::Vector3d q = p / vs - Eigen::Vector3d::Constant(0.5);
  const Eigen::Vector3d fl(std::floor(q.x()), std::floor(q.y()),
                           std::floor(q.z()));
  GlobalVoxelIndex base{int64_t(fl.x()), int64_t(fl.y()), int64_t(fl.z())};
  double w[3] = {q.x() - fl.x(), q.y() - fl.y(), q.z() - fl.z()};
  for (int a = 0; a < 3; ++a) {
    if (w[a] < kCornerSnap) {
      w[a] = 0.0;
    } else if (w[a] > 1.0 - kCornerSnap) {
      w[a] = 1.0;
    }
  }

  bool corners_known = cfg.interpolate;
  double d[2][2][2];
  if (cfg.interpolate) {
    for (int dz = 0; dz < 2 && corners_known; ++dz) {
      for (int dy = 0; dy < 2 && corners_known; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const EsdfVoxel* v =
              map.voxel({base.x + dx, base.y + dy, base.z + dz});
          if (v == nullptr || !v->observed()) {
            corners_known = false;
            break;
          }
          d[dx][dy][dz] = esdf_distance(*v, vs);
        }
      }
    }
  }

  if (!corners_known) {
    // Nearest-voxel fallback (also the interpolate=false mode).
    out.distance = esdf_distance(*at, vs);
    if (want_gradient) {
      out.gradient = parent_gradient(*at);
    }
    return out;
  }

  const double ix = 1.0 - w[0], iy = 1.0 - w[1], iz = 1.0 - w[2];
  out.distance = iz * (iy * (ix * d[0][0][0] + w[0] * d[1][0][0]) +
                       w[1] * (ix * d[0][1][0] + w[0] * d[1][1][0])) +
                 w[2] * (iy * (ix * d[0][0][1] + w[0] * d[1][0][1]) +
                         w[1] * (ix * d[0][1][1] + w[0] * d[1][1][1]));
  if (want_gradient) {
    Eigen::Vector3d grad;
    grad.x() = iz * (iy * (d[1][0][0] - d[0][0][0]) +
                     w[1] * (d[1][1][0] - d[0][1][0])) +
               w[2] * (iy * (d[1][0][1] - d[0][0][1]) +
                       w[1] * (d[1][1][1] - d[0][1][1]));
    grad.y() = iz * (ix * (d[0][1][0] - d[0][0][0]) +
                     w[0] * (d[1][1][0] - d[1][0][0])) +
               w[2] * (ix * (d[0][1][1] - d[0][0][1]) +
                       w[0] * (d[1][1][1] - d[1][0][1]));
    grad.z() = iy * (ix * (d[0][0][1] - d[0][0][0]) +
                     w[0] * (d[1][0][1] - d[1][0][0])) +
               w[1] * (ix * (d[0][1][1] - d[0][1][0]) +
                       w[0] * (d[1][1][1] - d[1][1][0]));
    const double norm = grad.norm();
    out.gradient =
        norm > 1e-9 ? Eigen::Vector3d(grad / norm) : parent_gradient(*at);
  }
  return out;
}

}  // namespace

std::vector<QueryResult> query_batch(const Layer<EsdfVoxel>& esdf,
                                     const std::vector<Eigen::Vector3d>& points,
                                     bool want_gradient,
                                     const QueryConfig& cfg) {
  std::vector<QueryResult> results(points.size());
#pragma omp parallel if (cfg.parallel)
  {
    CachedLayer map{&esdf};
#pragma omp for schedule(static, 256)
    for (size_t i = 0; i < points.size(); ++i) {
      results[i] = query_point(map, points[i], want_gradient, cfg);
    }
  }
  return results;
}

QueryBenchmark benchmark_queries(const Layer<EsdfVoxel>& esdf, size_t count,
                                 SampleMode mode, uint64_t seed,
                                 const QueryConfig& cfg) {
  const std::vector<GridIndex> blocks = esdf.sorted_indices();
  if (blocks.empty()) {
    throw std::invalid_argument("benchmark_queries: map is empty");
  }
  const double vs = esdf.voxel_size();
  const double side = kVoxelsPerSide * vs;

  Eigen::Vector3d lo(1e300, 1e300, 1e300);
  Eigen::Vector3d hi(-1e300, -1e300, -1e300);
  for (const GridIndex& g : blocks) {
    const Eigen::Vector3d origin = block_origin(g, vs);
    lo = lo.cwiseMin(origin);
    hi = hi.cwiseMax(origin + Eigen::Vector3d::Constant(side));
  }

  std::mt19937_64 rng(seed);
  std::vector<Eigen::Vector3d> points;
  points.reserve(count);
  if (mode == SampleMode::kCorrelated) {
    // Bursts of consecutive points around one cluster center model a
    // planner probing a neighbourhood; the locality is what distinguishes
    // this mode from the uncorrelated one.
    constexpr size_t kBurst = 256;
    std::uniform_int_distribution<size_t> pick(0, blocks.size() - 1);
    std::normal_distribution<double> gauss(0.0, 0.25 * side);
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < count; ++i) {
      if (i % kBurst == 0) {
        const GridIndex g = blocks[pick(rng)];
        center = block_origin(g, vs) + Eigen::Vector3d::Constant(0.5 * side);
      }
      points.emplace_back(center.x() + gauss(rng), center.y() + gauss(rng),
                          center.z() + gauss(rng));
    }
  } else {
    std::uniform_real_distribution<double> ux(lo.x(), hi.x());
    std::uniform_real_distribution<double> uy(lo.y(), hi.y());
    std::uniform_real_distribution<double> uz(lo.z(), hi.z());
    for (size_t i = 0; i < count; ++i) {
      points.emplace_back(ux(rng), uy(rng), uz(rng));
    }
  }

  QueryBenchmark report;
  report.count = count;
  const auto t0 = std::chrono::steady_clock::now();
  report.results = query_batch(esdf, points, /*want_gradient=*/false, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  report.seconds = std::chrono::duration<double>(t1 - t0).count();
  if (count > 0) {
    report.queries_per_second =
        report.seconds > 0.0 ? double(count) / report.seconds : 0.0;
    size_t known = 0;
    for (const QueryResult& r : report.results) {
      known += r.known ? 1u : 0u;
    }
    report.valid_ratio = double(known) / double(count);
  }
  return report;
}

}  // namespace voxmap
