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

#pragma once

#include <string>

#include "voxmap/mesh/mesh_layer.hpp"

namespace voxmap {

/// Writes the whole mesh layer as one binary little-endian PLY: float32
/// positions and normals, int32 face indices, and uint8 RGB when every
/// non-empty block carries per-vertex colors. Blocks are concatenated in
/// sorted index order, so identical layers produce identical files.
///
/// Throws IoError when the file cannot be written.
void save_mesh_ply(const MeshLayer& mesh, const std::string& path);

}  // namespace voxmap
