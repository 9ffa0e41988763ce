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

#include <filesystem>

#include "scribe/checkpoint.hpp"
#include "scribe/encoder.hpp"
#include "scribe/image.hpp"

namespace scribe {

struct HeatmapOptions {
  // Measure feature energy relative to the response to an all-background
  // input of the same size, which cancels zero-padding artefacts.
  bool subtract_background = true;
  // Ranges below this are treated as flat and mapped to zeros.
  double flat_range = 1e-6;
};

// Per-location L2 norm of the final convolutional feature map, bilinearly
// upsampled to the input size and min-max normalized to [0, 1].
ImageTensor feature_heatmap(Encoder& encoder, const ImageTensor& image,
                            const HeatmapOptions& options = {});
ImageTensor export_feature_heatmap(const Checkpoint& checkpoint, const ImageTensor& image,
                                   const HeatmapOptions& options = {});

// 8-bit grayscale PNG, 255 = strongest response.
void write_heatmap(const std::filesystem::path& path, const ImageTensor& heatmap);

}  // namespace scribe
