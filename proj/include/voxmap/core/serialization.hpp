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

#include <stdexcept>
#include <string>

#include "voxmap/core/layer_cake.hpp"

namespace voxmap {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes the voxel layers of a cake as a versioned binary snapshot
/// (see FORMATS.md). Blocks are written in sorted index order so repeated
/// saves of equal maps are byte-identical.
void save_snapshot(const LayerCake& cake, const std::string& path);

/// Loads a snapshot written by save_snapshot. Throws IoError on bad magic,
/// unsupported version, or truncated payload.
LayerCake load_snapshot(const std::string& path);

}  // namespace voxmap
