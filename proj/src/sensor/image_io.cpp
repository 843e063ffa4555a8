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

#include "voxmap/sensor/image_io.hpp"

#include <cmath>
#include <fstream>

#include "voxmap/core/serialization.hpp"  // IoError

namespace voxmap {
namespace {

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& is) {
  std::string tok;
  while (is >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    return tok;
  }
  throw IoError("netpbm: truncated header");
}

void read_header(std::istream& is, const std::string& expected_magic,
                 int* width, int* height, int* maxval) {
  const std::string magic = next_token(is);
  if (magic != expected_magic) {
    throw IoError("netpbm: expected " + expected_magic + ", got " + magic);
  }
  *width = std::stoi(next_token(is));
  *height = std::stoi(next_token(is));
  *maxval = std::stoi(next_token(is));
  if (*width <= 0 || *height <= 0) {
    throw IoError("netpbm: invalid dimensions");
  }
  is.get();  // single whitespace before the raster
}

}  // namespace

void write_pgm16(const std::string& path, const Image16& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("pgm: cannot open for writing: " + path);
  }
  os << "P5\n" << img.width << " " << img.height << "\n65535\n";
  std::vector<uint8_t> raster(img.data.size() * 2);
  for (size_t i = 0; i < img.data.size(); ++i) {
    raster[2 * i] = static_cast<uint8_t>(img.data[i] >> 8);
    raster[2 * i + 1] = static_cast<uint8_t>(img.data[i] & 0xff);
  }
  os.write(reinterpret_cast<const char*>(raster.data()), raster.size());
  if (!os) {
    throw IoError("pgm: write failed: " + path);
  }
}

Image16 read_pgm16(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("pgm: cannot open: " + path);
  }
  int width = 0, height = 0, maxval = 0;
  read_header(is, "P5", &width, &height, &maxval);
  if (maxval != 65535) {
    throw IoError("pgm: expected 16-bit maxval");
  }
  Image16 img;
  img.width = width;
  img.height = height;
  img.data.resize(size_t(width) * height);
  std::vector<uint8_t> raster(img.data.size() * 2);
  is.read(reinterpret_cast<char*>(raster.data()), raster.size());
  if (!is) {
    throw IoError("pgm: truncated raster: " + path);
  }
  for (size_t i = 0; i < img.data.size(); ++i) {
    img.data[i] = static_cast<uint16_t>((raster[2 * i] << 8) | raster[2 * i + 1]);
  }
  return img;
}

void write_ppm(const std::string& path, const ColorImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("ppm: cannot open for writing: " + path);
  }
  os << "P6\n" << img.width << " " << img.height << "\n255\n";
  for (const auto& px : img.data) {
    os.write(reinterpret_cast<const char*>(px.data()), 3);
  }
  if (!os) {
    throw IoError("ppm: write failed: " + path);
  }
}

ColorImage read_ppm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("ppm: cannot open: " + path);
  }
  int width = 0, height = 0, maxval = 0;
  read_header(is, "P6", &width, &height, &maxval);
  if (maxval != 255) {
    throw IoError("ppm: expected 8-bit maxval");
  }
  ColorImage img(width, height);
  for (auto& px : img.data) {
    is.read(reinterpret_cast<char*>(px.data()), 3);
  }
  if (!is) {
    throw IoError("ppm: truncated raster: " + path);
  }
  return img;
}

Image16 depth_to_millimeters(const DepthImage& depth) {
  Image16 img;
  img.width = depth.width;
  img.height = depth.height;
  img.data.resize(depth.data.size());
  for (size_t i = 0; i < depth.data.size(); ++i) {
    const float d = depth.data[i];
    if (!DepthImage::valid_depth(d)) {
      img.data[i] = 0;
      continue;
    }
    const long mm = std::lround(double(d) * 1000.0);
    img.data[i] = static_cast<uint16_t>(std::clamp(mm, 1L, 65535L));
  }
  return img;
}

DepthImage depth_from_millimeters(const Image16& img) {
  DepthImage depth(img.width, img.height);
  for (size_t i = 0; i < img.data.size(); ++i) {
    depth.data[i] = img.data[i] == 0 ? 0.0f : img.data[i] / 1000.0f;
  }
  return depth;
}

}  // namespace voxmap
