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

#include <cstdint>
#include <string>
#include <vector>

#include "voxmap/sensor/image.hpp"

namespace voxmap {

struct Image16 {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> data;  // row-major
};

/// 16-bit grayscale PGM (P5, maxval 65535, samples big-endian per Netpbm).
void write_pgm16(const std::string& path, const Image16& img);
Image16 read_pgm16(const std::string& path);

/// 8-bit RGB PPM (P6).
void write_ppm(const std::string& path, const ColorImage& img);
ColorImage read_ppm(const std::string& path);

/// Depth images are stored as 16-bit millimeters; 0 marks invalid pixels.
Image16 depth_to_millimeters(const DepthImage& depth);
DepthImage depth_from_millimeters(const Image16& img);

}  // namespace voxmap
