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

#include "scribe/heatmap.hpp"

#include <algorithm>

#include "scribe/errors.hpp"

namespace scribe {

ImageTensor feature_heatmap(Encoder& encoder, const ImageTensor& image,
                            const HeatmapOptions& options) {
  if (image.height() < 1 || image.width() < 1) throw InvalidArgument("empty image");
  torch::NoGradGuard no_grad;
  const bool was_training = encoder->is_training();
  encoder->eval();

  const ImageTensor normalized = normalize_image(image);
  const ImageTensor padded = pad_right(normalized, kEncoderStride);
  auto input = to_input(padded);
  auto energy = encoder->encode_visual(input);
  if (options.subtract_background) {
    energy = energy - encoder->encode_visual(torch::zeros_like(input));
  }
  auto norm = energy.pow(2).sum(1, true).sqrt();  // [1, 1, h', w']
  auto up = torch::nn::functional::interpolate(
      norm, torch::nn::functional::InterpolateFuncOptions()
                .size(std::vector<std::int64_t>{padded.height(), padded.width()})
                .mode(torch::kBilinear)
                .align_corners(false));
  encoder->train(was_training);

  auto map = up[0][0].contiguous();
  const std::vector<float> values(map.data_ptr<float>(), map.data_ptr<float>() + map.numel());
  ImageTensor heat(padded.height(), padded.width(), values);
  heat = crop_columns(heat, 0, normalized.width());
  if (heat.height() != image.height() || heat.width() != image.width()) {
    heat = resize_bilinear(heat, image.height(), image.width());
  }

  auto span = heat.values();
  const auto [lo, hi] = std::minmax_element(span.begin(), span.end());
  const float min = *lo, range = *hi - *lo;
  std::vector<float> out(span.size(), 0.0f);
  if (range > options.flat_range) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::clamp((span[i] - min) / range, 0.0f, 1.0f);
    }
  }
  return ImageTensor(image.height(), image.width(), std::move(out));
}

ImageTensor export_feature_heatmap(const Checkpoint& checkpoint, const ImageTensor& image,
                                   const HeatmapOptions& options) {
  Encoder encoder(checkpoint.model);
  if (load_module_state(*encoder, checkpoint.tensors, "encoder.") == 0) {
    throw DataError("checkpoint holds no encoder weights");
  }
  return feature_heatmap(encoder, image, options);
}

void write_heatmap(const std::filesystem::path& path, const ImageTensor& heatmap) {
  write_png(path, to_raster(heatmap));
}

}  // namespace scribe
