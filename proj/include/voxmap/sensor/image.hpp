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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace voxmap {

/// Row-major depth image in meters; values <= 0 or non-finite are invalid.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), data(size_t(w) * h, 0.0f) {}

  float& at(int col, int row) { return data[size_t(row) * width + col]; }
  float at(int col, int row) const { return data[size_t(row) * width + col]; }

  static bool valid_depth(float d) { return d > 0.0f && std::isfinite(d); }
};

struct ColorImage {
  int width = 0;
  int height = 0;
  std::vector<std::array<uint8_t, 3>> data;

  ColorImage() = default;
  ColorImage(int w, int h) : width(w), height(h), data(size_t(w) * h) {}

  std::array<uint8_t, 3>& at(int col, int row) {
    return data[size_t(row) * width + col];
  }
  const std::array<uint8_t, 3>& at(int col, int row) const {
    return data[size_t(row) * width + col];
  }
};

struct DepthSample {
  float depth = 0.0f;
  bool valid = false;
};

/// Nearest-pixel depth lookup; invalid outside the image or on invalid
/// pixels. With centers at half-integer coordinates the containing pixel is
/// the nearest one.
inline DepthSample sample_depth_nearest(const DepthImage& img, double u,
                                        double v) {
  const int col = static_cast<int>(std::floor(u));
  const int row = static_cast<int>(std::floor(v));
  if (u < 0.0 || v < 0.0 || col >= img.width || row >= img.height) {
    return {};
  }
  const float d = img.at(col, row);
  return DepthImage::valid_depth(d) ? DepthSample{d, true} : DepthSample{};
}

/// Foreground-safe bilinear depth lookup: invalid if any of the four
/// neighbors is invalid or out of bounds, or if the neighbor spread exceeds
/// max_gap (avoids interpolating across depth discontinuities).
inline DepthSample sample_depth_linear(const DepthImage& img, double u,
                                       double v, float max_gap) {
  const double gu = u - 0.5;
  const double gv = v - 0.5;
  const int x0 = static_cast<int>(std::floor(gu));
  const int y0 = static_cast<int>(std::floor(gv));
  if (x0 < 0 || y0 < 0 || x0 + 1 >= img.width || y0 + 1 >= img.height) {
    return {};
  }
  const float d00 = img.at(x0, y0);
  const float d10 = img.at(x0 + 1, y0);
  const float d01 = img.at(x0, y0 + 1);
  const float d11 = img.at(x0 + 1, y0 + 1);
  if (!DepthImage::valid_depth(d00) || !DepthImage::valid_depth(d10) ||
      !DepthImage::valid_depth(d01) || !DepthImage::valid_depth(d11)) {
    return {};
  }
  const float dmin = std::min({d00, d10, d01, d11});
  const float dmax = std::max({d00, d10, d01, d11});
  if (dmax - dmin > max_gap) {
    return {};
  }
  const double wx = gu - x0;
  const double wy = gv - y0;
  const double d = (1.0 - wy) * ((1.0 - wx) * d00 + wx * d10) +
                   wy * ((1.0 - wx) * d01 + wx * d11);
  return {static_cast<float>(d), true};
}

inline std::array<uint8_t, 3> sample_color_nearest(const ColorImage& img,
                                                   double u, double v,
                                                   bool* valid) {
  const int col = static_cast<int>(std::floor(u));
  const int row = static_cast<int>(std::floor(v));
  if (u < 0.0 || v < 0.0 || col >= img.width || row >= img.height) {
    *valid = false;
    return {0, 0, 0};
  }
  *valid = true;
  return img.at(col, row);
}

}  // namespace voxmap
