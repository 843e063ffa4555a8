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

#include "voxmap/mesh/ply.hpp"

#include <cstdint>
#include <fstream>
#include <vector>

#include "voxmap/core/serialization.hpp"

namespace voxmap {
namespace {

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

void save_mesh_ply(const MeshLayer& mesh, const std::string& path) {
  const std::vector<GridIndex> indices = mesh.sorted_indices();

  size_t num_vertices = 0;
  size_t num_faces = 0;
  bool with_color = true;
  for (const GridIndex& g : indices) {
    const MeshBlock* block = mesh.block_ptr(g);
    if (block->empty()) {
      continue;
    }
    num_vertices += block->vertices.size();
    num_faces += block->triangles.size();
    with_color = with_color && block->colors.size() == block->vertices.size();
  }
  if (num_vertices == 0) {
    with_color = false;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << "ply\n"
      << "format binary_little_endian 1.0\n"
      << "element vertex " << num_vertices << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property float nx\nproperty float ny\nproperty float nz\n";
  if (with_color) {
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  }
  out << "element face " << num_faces << "\n"
      << "property list uchar int vertex_indices\n"
      << "end_header\n";

  for (const GridIndex& g : indices) {
    const MeshBlock* block = mesh.block_ptr(g);
    if (block->empty()) {
      continue;
    }
    for (size_t i = 0; i < block->vertices.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        write_raw(out, block->vertices[i][k]);
      }
      for (int k = 0; k < 3; ++k) {
        write_raw(out, block->normals[i][k]);
      }
      if (with_color) {
        for (int k = 0; k < 3; ++k) {
          write_raw(out, block->colors[i][k]);
        }
      }
    }
  }

  uint32_t offset = 0;
  for (const GridIndex& g : indices) {
    const MeshBlock* block = mesh.block_ptr(g);
    if (block->empty()) {
      continue;
    }
    for (const auto& tri : block->triangles) {
      write_raw(out, uint8_t{3});
      for (int k = 0; k < 3; ++k) {
        write_raw(out, int32_t(tri[size_t(k)] + offset));
      }
    }
    offset += uint32_t(block->vertices.size());
  }
  if (!out) {
    throw IoError("failed while writing: " + path);
  }
}

}  // namespace voxmap
