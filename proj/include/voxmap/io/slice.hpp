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

#include "voxmap/core/layer.hpp"
#include "voxmap/core/voxels.hpp"

namespace voxmap {

/// Writes a horizontal cross-section of the distance field as CSV (see
/// FORMATS.md): one row per voxel center in the allocated x/y bounding
/// rectangle at the voxel row containing height z, columns x,y,distance,
/// with nan for unknown cells. Throws IoError on write failure and
/// std::invalid_argument when the layer has no blocks.
void save_esdf_slice(const Layer<EsdfVoxel>& esdf, double z,
                     const std::string& path);

}  // namespace voxmap
