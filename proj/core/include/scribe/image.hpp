///////////////////////////////////////////////////////////////////////
// (C) Copyright 2026, The Scribe Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
///////////////////////////////////////////////////////////////////////

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace scribe {

// Height every recognizer input is normalized to.
inline constexpr int kNormalizedHeight = 64;

// Intensity of untouched paper. Ink is 0.
inline constexpr float kBackground = 1.0f;

// 8-bit grayscale raster as it comes off disk or out of the renderer.
// 255 is background, 0 is ink.
struct Raster {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // row-major, height * width

  std::uint8_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  bool empty() const { return height <= 0 || width <= 0; }
};

// Single-channel image with values in [0,1]; 0 is ink, 1 is background.
// Row-major storage. The height is not pinned here because pretext patches
// and intermediate crops use other sizes; recognizer inputs always come
// out of normalize_image with height 64.
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(int height, int width, float fill = kBackground);
  ImageTensor(int height, int width, std::vector<float> values);

  int channels() const { return 1; }
  int height() const { return height_; }
  int width() const { return width_; }
  bool empty() const { return values_.empty(); }

  float at(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }
  float& at(int row, int col) {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<const float> values() const { return values_; }
  std::span<float> values() { return values_; }

  // Sum of (1 - value): how much ink the image carries.
  double ink_mass() const;

  bool operator==(const ImageTensor&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<float> values_;
};

// Resamples to height 64 preserving aspect ratio (bilinear). Output width is
// round-half-up(width * 64 / height), never below 1. 8-bit input is mapped
// to [0,1] by dividing by 255.
ImageTensor normalize_image(const Raster& raw);
ImageTensor normalize_image(const ImageTensor& image);

// Output width normalize_image will produce for a raster of the given size.
int normalized_width(int height, int width);

// Bilinear resize to an explicit size (pixel-centre aligned).
ImageTensor resize_bilinear(const ImageTensor& image, int height, int width);

// Columns [x, x + width) of every row. Requires the range to be in bounds.
ImageTensor crop_columns(const ImageTensor& image, int x, int width);
ImageTensor crop(const ImageTensor& image, int y, int x, int height, int width);

// Extends on the right with background up to min_width (no-op when wider).
ImageTensor pad_right(const ImageTensor& image, int min_width);

// Horizontal concatenation; all parts must share a height.
ImageTensor concat_columns(std::span<const ImageTensor> parts);

// Counter-clockwise rotation by quarter_turns * 90 degrees.
ImageTensor rotate_quarter_turns(const ImageTensor& image, int quarter_turns);
ImageTensor flip_horizontal(const ImageTensor& image);
ImageTensor flip_vertical(const ImageTensor& image);

Raster to_raster(const ImageTensor& image);

// 8-bit grayscale PNG. Colour inputs are converted to gray on read.
Raster read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Raster& raster);

}  // namespace scribe
