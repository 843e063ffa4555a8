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

#include "voxmap/esdf/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace voxmap {
namespace {

struct Limits {
  int32_t max_sq = 0;
  int32_t cap_sq = 0;  // interior band cap
};

Limits limits_for(const EsdfConfig& cfg, double voxel_size) {
  return Limits{esdf_max_squared(cfg, voxel_size),
                esdf_interior_cap_squared(cfg, voxel_size)};
}

void sort_unique(std::vector<GridIndex>* v) {
  std::sort(v->begin(), v->end());
  v->erase(std::unique(v->begin(), v->end()), v->end());
}

/// Resets a voxel to its side's saturation state, keeping the flags.
void reset_to_saturated(EsdfVoxel* v, const Limits& lim) {
  v->squared_distance = v->inside() ? lim.cap_sq : lim.max_sq;
  v->parent_x = 0;
  v->parent_y = 0;
  v->parent_z = 0;
}

/// Offers v the candidate "u's parent seen one step away", where
/// (dx, dy, dz) is the single-axis step from u to v. Adopts it when it is
/// strictly better in (squared distance, offset) lexicographic order;
/// comparing offsets is equivalent to comparing absolute parent coordinates
/// because both candidates are expressed relative to the same voxel.
inline bool relax(EsdfVoxel& v, const EsdfVoxel& u, int dx, int dy, int dz,
                  const Limits& lim) {
  if (!u.observed() || (!u.is_site() && !u.has_parent())) {
    return false;  // u carries no usable distance
  }
  if (!v.observed() || v.is_site()) {
    return false;
  }
  const int cx = u.parent_x - dx;
  const int cy = u.parent_y - dy;
  const int cz = u.parent_z - dz;
  const int32_t cand = cx * cx + cy * cy + cz * cz;
  if (cand == 0) {
    return false;  // only sites hold zero distance
  }
  const int32_t limit = v.inside() ? lim.cap_sq : lim.max_sq;
  if (cand > limit || cand > v.squared_distance) {
    return false;
  }
  if (cand == v.squared_distance && v.has_parent()) {
    const int vx = v.parent_x, vy = v.parent_y, vz = v.parent_z;
    if (!(std::tie(cx, cy, cz) < std::tie(vx, vy, vz))) {
      return false;
    }
  }
  v.squared_distance = cand;
  v.parent_x = static_cast<int16_t>(cx);
  v.parent_y = static_cast<int16_t>(cy);
  v.parent_z = static_cast<int16_t>(cz);
  return true;
}

inline int lin_of(int x, int y, int z) {
  return x + kVoxelsPerSide * (y + kVoxelsPerSide * z);
}

/// Runs the six directional in-block sweeps until the block reaches its
/// internal fixed point. Returns true if anything changed.
bool sweep_block(VoxelBlock<EsdfVoxel>& blk, const Limits& lim) {
  constexpr int N = kVoxelsPerSide;
  bool block_changed = false;
  bool pass_changed = true;
  while (pass_changed) {
    pass_changed = false;
    for (int z = 0; z < N; ++z) {
      for (int y = 0; y < N; ++y) {
        EsdfVoxel* row = &blk.voxels[lin_of(0, y, z)];
        for (int x = 1; x < N; ++x) {  // X+
          pass_changed |= relax(row[x], row[x - 1], 1, 0, 0, lim);
        }
        for (int x = N - 2; x >= 0; --x) {  // X-
          pass_changed |= relax(row[x], row[x + 1], -1, 0, 0, lim);
        }
      }
    }
    for (int z = 0; z < N; ++z) {
      for (int x = 0; x < N; ++x) {
        EsdfVoxel* col = &blk.voxels[lin_of(x, 0, z)];
        for (int y = 1; y < N; ++y) {  // Y+
          pass_changed |= relax(col[y * N], col[(y - 1) * N], 0, 1, 0, lim);
        }
        for (int y = N - 2; y >= 0; --y) {  // Y-
          pass_changed |= relax(col[y * N], col[(y + 1) * N], 0, -1, 0, lim);
        }
      }
    }
    constexpr int NN = N * N;
    for (int y = 0; y < N; ++y) {
      for (int x = 0; x < N; ++x) {
        EsdfVoxel* pil = &blk.voxels[lin_of(x, y, 0)];
        for (int z = 1; z < N; ++z) {  // Z+
          pass_changed |= relax(pil[z * NN], pil[(z - 1) * NN], 0, 0, 1, lim);
        }
        for (int z = N - 2; z >= 0; --z) {  // Z-
          pass_changed |= relax(pil[z * NN], pil[(z + 1) * NN], 0, 0, -1, lim);
        }
      }
    }
    block_changed |= pass_changed;
  }
  return block_changed;
}

/// Exchanges border candidates across the shared face of blocks a and
/// b = a + axis, in both directions. Writes touch only a's high face and
/// b's low face of this axis, so pairs of the same axis never collide.
std::pair<bool, bool> exchange_pair(VoxelBlock<EsdfVoxel>& a,
                                    VoxelBlock<EsdfVoxel>& b, int axis,
                                    const Limits& lim) {
  constexpr int N = kVoxelsPerSide;
  const int dx = axis == 0 ? 1 : 0;
  const int dy = axis == 1 ? 1 : 0;
  const int dz = axis == 2 ? 1 : 0;
  bool a_changed = false;
  bool b_changed = false;
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      int ax = 0, ay = 0, az = 0, bx = 0, by = 0, bz = 0;
      switch (axis) {
        case 0: ax = N - 1; ay = i; az = j; bx = 0; by = i; bz = j; break;
        case 1: ax = i; ay = N - 1; az = j; bx = i; by = 0; bz = j; break;
        default: ax = i; ay = j; az = N - 1; bx = i; by = j; bz = 0; break;
      }
      EsdfVoxel& va = a.voxels[lin_of(ax, ay, az)];
      EsdfVoxel& vb = b.voxels[lin_of(bx, by, bz)];
      b_changed |= relax(vb, va, dx, dy, dz, lim);
      a_changed |= relax(va, vb, -dx, -dy, -dz, lim);
    }
  }
  return {a_changed, b_changed};
}

struct VoxelState {
  bool observed = false;
  bool site = false;
  bool inside = false;
};

/// Classification of source voxels into (observed, site, inside).
struct TsdfClassifier {
  const Layer<TsdfVoxel>& source;
  float site_threshold;

  explicit TsdfClassifier(const Layer<TsdfVoxel>& src, const EsdfConfig& cfg)
      : source(src), site_threshold(static_cast<float>(cfg.site_threshold)) {}

  struct BlockCtx {
    const VoxelBlock<TsdfVoxel>* block = nullptr;
  };
  BlockCtx block_context(const GridIndex& g) const {
    return BlockCtx{source.block_ptr(g)};
  }
  VoxelState classify(const BlockCtx& ctx, const GridIndex&, int lin) const {
    VoxelState s;
    const TsdfVoxel& tv = ctx.block->voxels[lin];
    s.observed = tv.weight > 0.0f;
    s.site = s.observed && std::abs(tv.distance) <= site_threshold;
    s.inside = s.observed && tv.distance < 0.0f;
    return s;
  }
};

struct OccupancyClassifier {
  const Layer<OccupancyVoxel>& source;
  float threshold;

  explicit OccupancyClassifier(const Layer<OccupancyVoxel>& src,
                               const EsdfConfig& cfg)
      : source(src), threshold(cfg.occupied_log_odds_threshold) {}

  static bool observed(const OccupancyVoxel& v) { return v.log_odds != 0.0f; }
  bool occupied(const OccupancyVoxel& v) const {
    return observed(v) && v.log_odds > threshold;
  }
  bool free(const OccupancyVoxel& v) const {
    return observed(v) && !(v.log_odds > threshold);
  }

  struct BlockCtx {
    const VoxelBlock<OccupancyVoxel>* block = nullptr;
    std::array<const VoxelBlock<OccupancyVoxel>*, 6> neighbors{};
  };
  BlockCtx block_context(const GridIndex& g) const {
    BlockCtx ctx;
    ctx.block = source.block_ptr(g);
    ctx.neighbors = {source.block_ptr({g.x + 1, g.y, g.z}),
                     source.block_ptr({g.x - 1, g.y, g.z}),
                     source.block_ptr({g.x, g.y + 1, g.z}),
                     source.block_ptr({g.x, g.y - 1, g.z}),
                     source.block_ptr({g.x, g.y, g.z + 1}),
                     source.block_ptr({g.x, g.y, g.z - 1})};
    return ctx;
  }

  VoxelState classify(const BlockCtx& ctx, const GridIndex&, int lin) const {
    VoxelState s;
    const OccupancyVoxel& ov = ctx.block->voxels[lin];
    s.observed = observed(ov);
    if (!s.observed) {
      return s;
    }
    s.inside = occupied(ov);
    if (!s.inside) {
      return s;  // free voxels are never sites
    }
    // Occupied voxels become sites when they border observed free space.
    const VoxelIndex v = voxel_index_from_linear(lin);
    constexpr int N = kVoxelsPerSide;
    const std::array<std::array<int, 3>, 6> steps = {
        {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
    for (int n = 0; n < 6; ++n) {
      const int nx = v.x + steps[n][0];
      const int ny = v.y + steps[n][1];
      const int nz = v.z + steps[n][2];
      const OccupancyVoxel* nb = nullptr;
      if (nx >= 0 && nx < N && ny >= 0 && ny < N && nz >= 0 && nz < N) {
        nb = &ctx.block->voxels[lin_of(nx, ny, nz)];
      } else if (ctx.neighbors[n] != nullptr) {
        nb = &ctx.neighbors[n]->voxels[lin_of((nx + N) % N, (ny + N) % N,
                                              (nz + N) % N)];
      }
      if (nb != nullptr && free(*nb)) {
        s.site = true;
        break;
      }
    }
    return s;
  }
};

template <typename SourceLayer, typename Classifier>
void mark_impl(Layer<EsdfVoxel>& esdf, const SourceLayer& source,
               const Classifier& classifier,
               const std::vector<GridIndex>& updated_blocks,
               const EsdfConfig& cfg, EsdfUpdateState* state,
               std::vector<GridIndex>* changed) {
  const Limits lim = limits_for(cfg, esdf.voxel_size());

  // Site status can depend on voxels across a block border, so the updated
  // set is grown by its allocated face neighbors before reconciliation.
  std::vector<GridIndex> effective;
  effective.reserve(updated_blocks.size() * 7);
  for (const GridIndex& g : updated_blocks) {
    const std::array<GridIndex, 7> cands = {
        g,
        GridIndex{g.x + 1, g.y, g.z}, GridIndex{g.x - 1, g.y, g.z},
        GridIndex{g.x, g.y + 1, g.z}, GridIndex{g.x, g.y - 1, g.z},
        GridIndex{g.x, g.y, g.z + 1}, GridIndex{g.x, g.y, g.z - 1}};
    for (const GridIndex& c : cands) {
      if (source.has_block(c)) {
        effective.push_back(c);
      }
    }
  }
  sort_unique(&effective);

  for (const GridIndex& g : effective) {
    VoxelBlock<EsdfVoxel>& blk = esdf.get_or_allocate(g);
    const auto ctx = classifier.block_context(g);
    bool block_changed = false;
    bool block_to_update = false;
    bool block_to_clear = false;
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      const VoxelState s = classifier.classify(ctx, g, lin);
      EsdfVoxel& ev = blk.voxels[lin];
      EsdfVoxel nv = ev;
      if (!s.observed) {
        if (ev.is_site()) {
          block_to_clear = true;
        }
        nv = EsdfVoxel{};
      } else {
        nv.flags = EsdfVoxel::kObserved | (s.site ? EsdfVoxel::kSite : 0) |
                   (s.inside ? EsdfVoxel::kInside : 0);
        if (s.site) {
          nv.squared_distance = 0;
          nv.parent_x = nv.parent_y = nv.parent_z = 0;
          if (!ev.observed() || !ev.is_site()) {
            block_to_update = true;  // newly created site
          }
        } else if (!ev.observed()) {
          reset_to_saturated(&nv, lim);  // newly observed voxel
          block_to_update = true;
        } else if (ev.is_site()) {
          reset_to_saturated(&nv, lim);  // site removed
          block_to_clear = true;
          block_to_update = true;
        } else if (ev.inside() != s.inside) {
          reset_to_saturated(&nv, lim);  // switched sides; distance invalid
          block_to_update = true;
        }
        // otherwise: observed non-site, same side -- value kept
      }
      if (nv != ev) {
        ev = nv;
        block_changed = true;
      }
    }
    if (block_changed) {
      changed->push_back(g);
    }
    if (block_to_update) {
      state->indices_to_update.push_back(g);
    }
    if (block_to_clear) {
      state->indices_to_clear.push_back(g);
    }
  }
  sort_unique(&state->indices_to_update);
  sort_unique(&state->indices_to_clear);
}

/// Returns every non-site voxel to its side's saturation value, erasing all
/// previously lowered distances while keeping sites and flags.
void reset_parented(Layer<EsdfVoxel>& esdf, const EsdfConfig& cfg) {
  const Limits lim = limits_for(cfg, esdf.voxel_size());
  const std::vector<GridIndex> indices = esdf.sorted_indices();
#pragma omp parallel for schedule(dynamic, 8) if (cfg.parallel)
  for (size_t i = 0; i < indices.size(); ++i) {
    for (EsdfVoxel& v : esdf.block_ptr(indices[i])->voxels) {
      if (v.observed() && !v.is_site() && v.has_parent()) {
        reset_to_saturated(&v, lim);
      }
    }
  }
}

template <typename SourceLayer>
std::vector<GridIndex> update_impl(Layer<EsdfVoxel>& esdf,
                                   const SourceLayer& source,
                                   const std::vector<GridIndex>& updated,
                                   const EsdfConfig& cfg) {
  std::vector<GridIndex> changed;
  if (updated.empty()) {
    return changed;
  }
  if (esdf.voxel_size() != source.voxel_size()) {
    throw std::invalid_argument(
        "update_esdf: source and ESDF layer voxel sizes differ");
  }

  // Snapshot so the returned set reflects net byte changes.
  std::unordered_map<GridIndex, VoxelBlock<EsdfVoxel>> before;
  for (const GridIndex& g : esdf.sorted_indices()) {
    before.emplace(g, *esdf.block_ptr(g));
  }

  EsdfUpdateState state;
  std::vector<GridIndex> touched;
  mark_sites(esdf, source, updated, cfg, &state, &touched);
  clear_invalid(esdf, cfg, &state, &touched);

  // Lowered values may depend on the order in which past updates delivered
  // them (a voxel relays an offset only while it still holds it). To keep
  // the field a pure function of the current source layer -- and therefore
  // bit-identical to a from-scratch rebuild -- lowering always restarts
  // from saturation over the whole map once any site or side changed.
  if (!state.indices_to_update.empty() || !state.indices_to_clear.empty() ||
      !state.cleared_indices.empty()) {
    reset_parented(esdf, cfg);
    EsdfUpdateState full;
    full.indices_to_update = esdf.sorted_indices();
    lower_esdf(esdf, full, cfg, &touched);
  }

  for (const GridIndex& g : esdf.sorted_indices()) {
    const auto it = before.find(g);
    if (it == before.end() ||
        std::memcmp(it->second.voxels.data(),
                    esdf.block_ptr(g)->voxels.data(),
                    sizeof(EsdfVoxel) * kVoxelsPerBlock) != 0) {
      changed.push_back(g);
    }
  }
  return changed;
}

}  // namespace

void mark_sites(Layer<EsdfVoxel>& esdf, const Layer<TsdfVoxel>& source,
                const std::vector<GridIndex>& updated_blocks,
                const EsdfConfig& cfg, EsdfUpdateState* state,
                std::vector<GridIndex>* changed) {
  mark_impl(esdf, source, TsdfClassifier(source, cfg), updated_blocks, cfg,
            state, changed);
}

void mark_sites(Layer<EsdfVoxel>& esdf, const Layer<OccupancyVoxel>& source,
                const std::vector<GridIndex>& updated_blocks,
                const EsdfConfig& cfg, EsdfUpdateState* state,
                std::vector<GridIndex>* changed) {
  mark_impl(esdf, source, OccupancyClassifier(source, cfg), updated_blocks,
            cfg, state, changed);
}

void clear_invalid(Layer<EsdfVoxel>& esdf, const EsdfConfig& cfg,
                   EsdfUpdateState* state, std::vector<GridIndex>* changed) {
  if (state->indices_to_clear.empty()) {
    return;
  }
  const Limits lim = limits_for(cfg, esdf.voxel_size());
  const int radius = static_cast<int>(
      std::ceil(cfg.max_distance / esdf.voxel_size() / kVoxelsPerSide));

  // Every voxel pointing at a removed site lies within max_distance of it,
  // i.e. within this many blocks (Chebyshev) of a block in to_clear.
  std::vector<GridIndex> scan;
  for (const GridIndex& g : esdf.sorted_indices()) {
    for (const GridIndex& c : state->indices_to_clear) {
      if (std::abs(g.x - c.x) <= radius && std::abs(g.y - c.y) <= radius &&
          std::abs(g.z - c.z) <= radius) {
        scan.push_back(g);
        break;
      }
    }
  }

  std::vector<uint8_t> block_cleared(scan.size(), 0);
#pragma omp parallel for schedule(dynamic, 8) if (cfg.parallel)
  for (size_t i = 0; i < scan.size(); ++i) {
    const GridIndex g = scan[i];
    VoxelBlock<EsdfVoxel>& blk = *esdf.block_ptr(g);
    const GlobalVoxelIndex base = global_voxel_index(g, VoxelIndex{0, 0, 0});
    bool any = false;
    for (int lin = 0; lin < kVoxelsPerBlock; ++lin) {
      EsdfVoxel& ev = blk.voxels[lin];
      if (!ev.has_parent()) {
        continue;
      }
      const VoxelIndex v = voxel_index_from_linear(lin);
      const GlobalVoxelIndex parent{base.x + v.x + ev.parent_x,
                                    base.y + v.y + ev.parent_y,
                                    base.z + v.z + ev.parent_z};
      const EsdfVoxel* pv = esdf.voxel_ptr(parent);
      if (pv == nullptr || !pv->is_site()) {
        reset_to_saturated(&ev, lim);
        any = true;
      }
    }
    block_cleared[i] = any ? 1 : 0;
  }
  for (size_t i = 0; i < scan.size(); ++i) {
    if (block_cleared[i]) {
      state->cleared_indices.push_back(scan[i]);
      changed->push_back(scan[i]);
    }
  }
  sort_unique(&state->cleared_indices);
}

int lower_esdf(Layer<EsdfVoxel>& esdf, const EsdfUpdateState& state,
               const EsdfConfig& cfg, std::vector<GridIndex>* changed) {
  const Limits lim = limits_for(cfg, esdf.voxel_size());

  std::vector<GridIndex> dirty;
  dirty.reserve(state.indices_to_update.size() +
                state.cleared_indices.size());
  for (const auto* seed : {&state.indices_to_update, &state.cleared_indices}) {
    for (const GridIndex& g : *seed) {
      if (esdf.has_block(g)) {
        dirty.push_back(g);
      }
    }
  }
  sort_unique(&dirty);

  int rounds = 0;
  std::unordered_set<GridIndex> changed_set;
  while (!dirty.empty()) {
    ++rounds;
    // Sweep phase: blocks only write themselves; order is irrelevant.
    std::vector<uint8_t> swept(dirty.size(), 0);
#pragma omp parallel for schedule(dynamic, 8) if (cfg.parallel)
    for (size_t i = 0; i < dirty.size(); ++i) {
      swept[i] = sweep_block(*esdf.block_ptr(dirty[i]), lim) ? 1 : 0;
    }
    for (size_t i = 0; i < dirty.size(); ++i) {
      if (swept[i]) {
        changed_set.insert(dirty[i]);
      }
    }

    // Border phase, one axis group at a time: within a group a block's low
    // and high faces are written by different pairs, so pairs are disjoint.
    std::unordered_set<GridIndex> next;
    for (int axis = 0; axis < 3; ++axis) {
      const auto step = [&](const GridIndex& g, int s) {
        GridIndex r = g;
        (axis == 0 ? r.x : axis == 1 ? r.y : r.z) += s;
        return r;
      };
      std::vector<GridIndex> lowers;  // pair = (g, g + axis)
      for (const GridIndex& b : dirty) {
        if (esdf.has_block(step(b, 1))) {
          lowers.push_back(b);
        }
        const GridIndex below = step(b, -1);
        if (esdf.has_block(below)) {
          lowers.push_back(below);
        }
      }
      sort_unique(&lowers);
      std::vector<std::pair<uint8_t, uint8_t>> flags(lowers.size(), {0, 0});
#pragma omp parallel for schedule(dynamic, 16) if (cfg.parallel)
      for (size_t i = 0; i < lowers.size(); ++i) {
        auto [a_changed, b_changed] =
            exchange_pair(*esdf.block_ptr(lowers[i]),
                          *esdf.block_ptr(step(lowers[i], 1)), axis, lim);
        flags[i] = {a_changed ? uint8_t{1} : uint8_t{0},
                    b_changed ? uint8_t{1} : uint8_t{0}};
      }
      for (size_t i = 0; i < lowers.size(); ++i) {
        if (flags[i].first) {
          next.insert(lowers[i]);
          changed_set.insert(lowers[i]);
        }
        if (flags[i].second) {
          next.insert(step(lowers[i], 1));
          changed_set.insert(step(lowers[i], 1));
        }
      }
    }
    dirty.assign(next.begin(), next.end());
    std::sort(dirty.begin(), dirty.end());
  }
  changed->insert(changed->end(), changed_set.begin(), changed_set.end());
  return rounds;
}

std::vector<GridIndex> update_esdf(Layer<EsdfVoxel>& esdf,
                                   const Layer<TsdfVoxel>& source,
                                   const std::vector<GridIndex>& updated_blocks,
                                   const EsdfConfig& cfg) {
  return update_impl(esdf, source, updated_blocks, cfg);
}

std::vector<GridIndex> update_esdf(Layer<EsdfVoxel>& esdf,
                                   const Layer<OccupancyVoxel>& source,
                                   const std::vector<GridIndex>& updated_blocks,
                                   const EsdfConfig& cfg) {
  return update_impl(esdf, source, updated_blocks, cfg);
}

}  // namespace voxmap
