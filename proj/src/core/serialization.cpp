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

#include "voxmap/core/serialization.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace voxmap {
namespace {

constexpr char kMagic[4] = {'V', 'X', 'L', 'F'};
constexpr uint32_t kVersion = 1;

// The on-disk layout is little-endian; this implementation targets
// little-endian hosts and copies PODs directly.
template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& is, T* value) {
  is.read(reinterpret_cast<char*>(value), sizeof(T));
  if (!is) {
    throw IoError("snapshot: truncated file");
  }
}

template <typename VoxelT>
void write_layer(std::ostream& os, const std::string& name,
                 const Layer<VoxelT>& layer) {
  const uint32_t name_len = static_cast<uint32_t>(name.size());
  write_pod(os, name_len);
  os.write(name.data(), name_len);
  const uint32_t voxel_bytes = sizeof(VoxelT);
  write_pod(os, voxel_bytes);
  const std::vector<GridIndex> indices = layer.sorted_indices();
  const uint64_t block_count = indices.size();
  write_pod(os, block_count);
  for (const GridIndex& g : indices) {
    write_pod(os, g.x);
    write_pod(os, g.y);
    write_pod(os, g.z);
    const auto* block = layer.block_ptr(g);
    os.write(reinterpret_cast<const char*>(block->voxels.data()),
             sizeof(VoxelT) * kVoxelsPerBlock);
  }
}

template <typename VoxelT>
void read_layer(std::istream& is, Layer<VoxelT>& layer) {
  uint32_t voxel_bytes = 0;
  read_pod(is, &voxel_bytes);
  if (voxel_bytes != sizeof(VoxelT)) {
    throw IoError("snapshot: voxel size mismatch for layer payload");
  }
  uint64_t block_count = 0;
  read_pod(is, &block_count);
  for (uint64_t i = 0; i < block_count; ++i) {
    GridIndex g;
    read_pod(is, &g.x);
    read_pod(is, &g.y);
    read_pod(is, &g.z);
    auto& block = layer.get_or_allocate(g);
    is.read(reinterpret_cast<char*>(block.voxels.data()),
            sizeof(VoxelT) * kVoxelsPerBlock);
    if (!is) {
      throw IoError("snapshot: truncated block payload");
    }
  }
}

}  // namespace

void save_snapshot(const LayerCake& cake, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("snapshot: cannot open for writing: " + path);
  }
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kVersion);
  write_pod(os, cake.voxel_size);  // f64
  uint32_t layer_count = 0;
  layer_count += cake.tsdf ? 1 : 0;
  layer_count += cake.occupancy ? 1 : 0;
  layer_count += cake.color ? 1 : 0;
  layer_count += cake.esdf ? 1 : 0;
  write_pod(os, layer_count);
  if (cake.tsdf) write_layer(os, "tsdf", *cake.tsdf);
  if (cake.occupancy) write_layer(os, "occupancy", *cake.occupancy);
  if (cake.color) write_layer(os, "color", *cake.color);
  if (cake.esdf) write_layer(os, "esdf", *cake.esdf);
  if (!os) {
    throw IoError("snapshot: write failed: " + path);
  }
}

LayerCake load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("snapshot: cannot open: " + path);
  }
  char magic[4];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("snapshot: bad magic");
  }
  uint32_t version = 0;
  read_pod(is, &version);
  if (version != kVersion) {
    throw IoError("snapshot: unsupported version " + std::to_string(version));
  }
  double voxel_size = 0.0;
  read_pod(is, &voxel_size);
  if (!(voxel_size > 0.0)) {
    throw IoError("snapshot: invalid voxel size");
  }
  uint32_t layer_count = 0;
  read_pod(is, &layer_count);
  LayerCake cake(voxel_size);
  for (uint32_t i = 0; i < layer_count; ++i) {
    uint32_t name_len = 0;
    read_pod(is, &name_len);
    if (name_len > 64) {
      throw IoError("snapshot: layer name too long");
    }
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) {
      throw IoError("snapshot: truncated layer name");
    }
    if (name == "tsdf") {
      read_layer(is, cake.require_tsdf());
    } else if (name == "occupancy") {
      read_layer(is, cake.require_occupancy());
    } else if (name == "color") {
      read_layer(is, cake.require_color());
    } else if (name == "esdf") {
      read_layer(is, cake.require_esdf());
    } else {
      throw IoError("snapshot: unknown layer name '" + name + "'");
    }
  }
  return cake;
}

}  // namespace voxmap
