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

#include "voxmap/reference/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "voxmap/core/indexing.hpp"
#include "voxmap/esdf/integrator.hpp"
#include "voxmap/sensor/view.hpp"

namespace voxmap {
namespace {

// ---------------------------------------------------------------------------
// Depth sampling, restated.

bool ref_sample_nearest(const DepthImage& img, double u, double v,
                        float* out) {
  if (u < 0.0 || v < 0.0) {
    return false;
  }
  const int col = int(std::floor(u));
  const int row = int(std::floor(v));
  if (col >= img.width || row >= img.height) {
    return false;
  }
  const float d = img.at(col, row);
  if (!(d > 0.0f) || !std::isfinite(d)) {
    return false;
  }
  *out = d;
  return true;
}

bool ref_sample_linear(const DepthImage& img, double u, double v,
                       float max_gap, float* out) {
  const double gu = u - 0.5;
  const double gv = v - 0.5;
  const int x0 = int(std::floor(gu));
  const int y0 = int(std::floor(gv));
  if (x0 < 0 || y0 < 0 || x0 + 1 >= img.width || y0 + 1 >= img.height) {
    return false;
  }
  const float corners[4] = {img.at(x0, y0), img.at(x0 + 1, y0),
                            img.at(x0, y0 + 1), img.at(x0 + 1, y0 + 1)};
  float lo = corners[0];
  float hi = corners[0];
  for (const float c : corners) {
    if (!(c > 0.0f) || !std::isfinite(c)) {
      return false;
    }
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (hi - lo > max_gap) {
    return false;
  }
  const double wx = gu - x0;
  const double wy = gv - y0;
  const double d = (1.0 - wy) * ((1.0 - wx) * corners[0] + wx * corners[1]) +
                   wy * ((1.0 - wx) * corners[2] + wx * corners[3]);
  *out = float(d);
  return true;
}

// ---------------------------------------------------------------------------
// Sensor plumbing.

struct CameraShim {
  const CameraIntrinsics& s;
  int width() const { return s.width; }
  int height() const { return s.height; }
  double measure(const Eigen::Vector3d& p_S) const { return p_S.z(); }
  bool project(const Eigen::Vector3d& p_S, double* u, double* v) const {
    return s.project(p_S, u, v) && s.contains(*u, *v);
  }
  bool sample(const DepthImage& img, double u, double v,
              const IntegratorConfig& cfg, float* out) const {
    return cfg.camera_sample == DepthSampleMode::kNearest
               ? ref_sample_nearest(img, u, v, out)
               : ref_sample_linear(img, u, v, cfg.max_sample_gap, out);
  }
};

struct LidarShim {
  const LidarIntrinsics& s;
  int width() const { return s.num_azimuth; }
  int height() const { return s.num_elevation; }
  double measure(const Eigen::Vector3d& p_S) const { return p_S.norm(); }
  bool project(const Eigen::Vector3d& p_S, double* u, double* v) const {
    return s.project(p_S, u, v) && s.contains(*u, *v);
  }
  bool sample(const DepthImage& img, double u, double v,
              const IntegratorConfig& cfg, float* out) const {
    return cfg.lidar_sample == DepthSampleMode::kNearest
               ? ref_sample_nearest(img, u, v, out)
               : ref_sample_linear(img, u, v, cfg.max_sample_gap, out);
  }
};

std::vector<GridIndex> view_candidates(const Pose& T_LS,
                                       const CameraIntrinsics& s,
                                       const DepthImage& depth,
                                       double block_size,
                                       const IntegratorConfig& cfg) {
  return blocks_in_view(T_LS, s, depth, block_size,
                        ViewConfig{cfg.max_integration_distance,
                                   cfg.truncation, cfg.view_pixel_subsample});
}
std::vector<GridIndex> view_candidates(const Pose& T_LS,
                                       const LidarIntrinsics& s,
                                       const DepthImage& depth,
                                       double block_size,
                                       const IntegratorConfig& cfg) {
  return blocks_in_view(T_LS, s, depth, block_size,
                        ViewConfig{cfg.max_integration_distance,
                                   cfg.truncation, cfg.view_pixel_subsample});
}

// ---------------------------------------------------------------------------
// Per-voxel rules, restated.

TsdfVoxel ref_tsdf_rule(const TsdfVoxel& voxel, float d_p, float d_measured,
                        const IntegratorConfig& cfg) {
  const float eps = float(cfg.truncation);
  if (d_p < -eps) {
    return voxel;  // occluded: more than the truncation behind the surface
  }
  float w_new = 1.0f;
  if (cfg.weighting == WeightMode::kInverseSquareDepth) {
    const double dd = double(d_measured) * double(d_measured);
    w_new = float(1.0 / std::max(dd, 1e-6));
  }
  const float d_t = std::clamp(d_p, -eps, eps);
  const float w_sum = voxel.weight + w_new;
  TsdfVoxel out;
  out.distance = std::clamp(
      (voxel.weight * voxel.distance + w_new * d_t) / w_sum, -eps, eps);
  out.weight = std::min(w_sum, cfg.max_weight);
  return out;
}

OccupancyVoxel ref_occupancy_rule(const OccupancyVoxel& voxel, float d_p,
                                  const IntegratorConfig& cfg) {
  const float eps = float(cfg.truncation);
  if (d_p < -eps) {
    return voxel;
  }
  const float inc = d_p <= 0.0f ? quantize_log_odds(cfg.hit_log_odds)
                                : quantize_log_odds(cfg.miss_log_odds);
  OccupancyVoxel out;
  out.log_odds = std::clamp(voxel.log_odds + inc,
                            quantize_log_odds(cfg.log_odds_min),
                            quantize_log_odds(cfg.log_odds_max));
  return out;
}

template <typename VoxelT, typename ShimT, typename RuleT>
std::vector<GridIndex> ref_integrate(Layer<VoxelT>& layer,
                                     const DepthImage& depth,
                                     const Pose& T_LS, const ShimT& sensor,
                                     const IntegratorConfig& cfg,
                                     RuleT&& rule) {
  if (!T_LS.valid()) {
    throw InvalidPoseError("reference integrate: degenerate sensor pose");
  }
  if (depth.width != sensor.width() || depth.height != sensor.height()) {
    throw std::invalid_argument(
        "reference integrate: image size does not match intrinsics");
  }
  const std::vector<GridIndex> candidates = view_candidates(
      T_LS, sensor.s, depth, layer.block_size(), cfg);
  const Pose T_SL = T_LS.inverse();
  const double vs = layer.voxel_size();
  const double max_depth = cfg.max_integration_distance + cfg.truncation;

  std::vector<GridIndex> updated;
  for (const GridIndex& g : candidates) {
    VoxelBlock<VoxelT>& block = layer.get_or_allocate(g);
    bool block_changed = false;
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const Eigen::Vector3d p_S =
          T_SL * voxel_center(g, voxel_index_from_linear(lin), vs);
      const double d_v = sensor.measure(p_S);
      if (!(d_v > 0.0) || d_v > max_depth) {
        continue;
      }
      double u = 0.0, v = 0.0;
      if (!sensor.project(p_S, &u, &v)) {
        continue;
      }
      float measured = 0.0f;
      if (!sensor.sample(depth, u, v, cfg, &measured)) {
        continue;
      }
      const float d_p = measured - float(d_v);
      VoxelT& voxel = block.voxels[lin];
      const VoxelT next = rule(voxel, d_p, measured);
      if (std::memcmp(&next, &voxel, sizeof(VoxelT)) != 0) {
        voxel = next;
        block_changed = true;
      }
    }
    if (block_changed) {
      updated.push_back(g);
    }
  }
  return updated;
}

// ---------------------------------------------------------------------------
// Query, restated.

const EsdfVoxel* voxel_at(const Layer<EsdfVoxel>& esdf,
                          const GlobalVoxelIndex& gv) {
  const VoxelBlock<EsdfVoxel>* block = esdf.block_ptr(block_of_global_voxel(gv));
  if (block == nullptr) {
    return nullptr;
  }
  return &block->voxels[size_t(linear_voxel_index(local_voxel_of_global(gv)))];
}

Eigen::Vector3d ref_parent_gradient(const EsdfVoxel& v) {
  if (!v.has_parent()) {
    return Eigen::Vector3d::Zero();
  }
  Eigen::Vector3d off(v.parent_x, v.parent_y, v.parent_z);
  off.normalize();
  return v.inside() ? off : Eigen::Vector3d(-off);
}

QueryResult ref_query_point(const Layer<EsdfVoxel>& esdf,
                            const Eigen::Vector3d& p, bool want_gradient,
                            const QueryConfig& cfg) {
  QueryResult out;
  if (!p.allFinite()) {
    return out;
  }
  const double vs = esdf.voxel_size();
  const EsdfVoxel* at = voxel_at(esdf, position_to_global_voxel(p, vs));
  if (at == nullptr || !at->observed()) {
    return out;
  }
  out.known = true;

  double w[3];
  GlobalVoxelIndex base;
  {
    const Eigen::Vector3d q = p / vs - Eigen::Vector3d::Constant(0.5);
    const double fx = std::floor(q.x());
    const double fy = std::floor(q.y());
    const double fz = std::floor(q.z());
    base = GlobalVoxelIndex{int64_t(fx), int64_t(fy), int64_t(fz)};
    w[0] = q.x() - fx;
    w[1] = q.y() - fy;
    w[2] = q.z() - fz;
    for (double& wi : w) {
      if (wi < 1e-6) {
        wi = 0.0;
      } else if (wi > 1.0 - 1e-6) {
        wi = 1.0;
      }
    }
  }

  double d[2][2][2];
  bool have_cell = cfg.interpolate;
  for (int dz = 0; dz < 2 && have_cell; ++dz) {
    for (int dy = 0; dy < 2 && have_cell; ++dy) {
      for (int dx = 0; dx < 2 && have_cell; ++dx) {
        const EsdfVoxel* v =
            voxel_at(esdf, {base.x + dx, base.y + dy, base.z + dz});
        if (v == nullptr || !v->observed()) {
          have_cell = false;
        } else {
          d[dx][dy][dz] = esdf_distance(*v, vs);
        }
      }
    }
  }
  if (!have_cell) {
    out.distance = esdf_distance(*at, vs);
    if (want_gradient) {
      out.gradient = ref_parent_gradient(*at);
    }
    return out;
  }

  const auto axis_weight = [&](int axis, int bit) {
    return bit == 1 ? w[axis] : 1.0 - w[axis];
  };
  double value = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  for (int dz = 0; dz < 2; ++dz) {
    for (int dy = 0; dy < 2; ++dy) {
      for (int dx = 0; dx < 2; ++dx) {
        const double wx = axis_weight(0, dx);
        const double wy = axis_weight(1, dy);
        const double wz = axis_weight(2, dz);
        value += wx * wy * wz * d[dx][dy][dz];
        // d/dx sums signed slab weights; likewise for y and z.
        grad.x() += (dx == 1 ? 1.0 : -1.0) * wy * wz * d[dx][dy][dz];
        grad.y() += (dy == 1 ? 1.0 : -1.0) * wx * wz * d[dx][dy][dz];
        grad.z() += (dz == 1 ? 1.0 : -1.0) * wx * wy * d[dx][dy][dz];
      }
    }
  }
  out.distance = value;
  if (want_gradient) {
    const double norm = grad.norm();
    out.gradient = norm > 1e-9 ? Eigen::Vector3d(grad / norm)
                               : ref_parent_gradient(*at);
  }
  return out;
}

}  // namespace

std::vector<GridIndex> reference_integrate_depth(Layer<TsdfVoxel>& layer,
                                                 const DepthImage& depth,
                                                 const Pose& T_LS,
                                                 const CameraIntrinsics& camera,
                                                 const IntegratorConfig& cfg) {
  return ref_integrate(layer, depth, T_LS, CameraShim{camera}, cfg,
                       [&cfg](const TsdfVoxel& v, float d_p, float measured) {
                         return ref_tsdf_rule(v, d_p, measured, cfg);
                       });
}

std::vector<GridIndex> reference_integrate_depth(Layer<TsdfVoxel>& layer,
                                                 const DepthImage& depth,
                                                 const Pose& T_LS,
                                                 const LidarIntrinsics& lidar,
                                                 const IntegratorConfig& cfg) {
  return ref_integrate(layer, depth, T_LS, LidarShim{lidar}, cfg,
                       [&cfg](const TsdfVoxel& v, float d_p, float measured) {
                         return ref_tsdf_rule(v, d_p, measured, cfg);
                       });
}

std::vector<GridIndex> reference_integrate_depth(Layer<OccupancyVoxel>& layer,
                                                 const DepthImage& depth,
                                                 const Pose& T_LS,
                                                 const CameraIntrinsics& camera,
                                                 const IntegratorConfig& cfg) {
  return ref_integrate(layer, depth, T_LS, CameraShim{camera}, cfg,
                       [&cfg](const OccupancyVoxel& v, float d_p, float) {
                         return ref_occupancy_rule(v, d_p, cfg);
                       });
}

std::vector<GridIndex> reference_integrate_depth(Layer<OccupancyVoxel>& layer,
                                                 const DepthImage& depth,
                                                 const Pose& T_LS,
                                                 const LidarIntrinsics& lidar,
                                                 const IntegratorConfig& cfg) {
  return ref_integrate(layer, depth, T_LS, LidarShim{lidar}, cfg,
                       [&cfg](const OccupancyVoxel& v, float d_p, float) {
                         return ref_occupancy_rule(v, d_p, cfg);
                       });
}

std::vector<QueryResult> reference_query_batch(
    const Layer<EsdfVoxel>& esdf, const std::vector<Eigen::Vector3d>& points,
    bool want_gradient, const QueryConfig& cfg) {
  std::vector<QueryResult> results(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    results[i] = ref_query_point(esdf, points[i], want_gradient, cfg);
  }
  return results;
}

}  // namespace voxmap
