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

#include "scribe/batch.hpp"

#include <algorithm>

#include "scribe/errors.hpp"

namespace scribe {

Batch make_batch(std::span<const ImageTensor> images,
                 std::span<const std::string> transcripts,
                 const Alphabet& alphabet) {
  if (images.empty()) throw InvalidArgument("empty batch");
  if (images.size() != transcripts.size()) {
    throw InvalidArgument("batch images and transcripts differ in count");
  }
  Batch batch;
  batch.size = static_cast<int>(images.size());
  batch.height = images.front().height();
  for (const auto& img : images) {
    if (img.height() != batch.height) {
      throw InvalidArgument("batch images must share a height");
    }
    batch.max_width = std::max(batch.max_width, img.width());
  }
  const std::size_t plane =
      static_cast<std::size_t>(batch.height) * batch.max_width;
  batch.pixels.assign(plane * images.size(), kBackground);
  for (std::size_t b = 0; b < images.size(); ++b) {
    const auto& img = images[b];
    for (int r = 0; r < img.height(); ++r) {
      const float* src = img.values().data() +
                         static_cast<std::size_t>(r) * img.width();
      std::copy(src, src + img.width(),
                batch.pixels.data() + b * plane +
                    static_cast<std::size_t>(r) * batch.max_width);
    }
    batch.widths.push_back(img.width());
    auto ids = alphabet.encode(transcripts[b]);
    batch.target_lengths.push_back(static_cast<std::int64_t>(ids.size()));
    batch.targets.push_back(std::move(ids));
    batch.transcripts.push_back(transcripts[b]);
  }
  return batch;
}

Batch load_batch(const Manifest& manifest,
                 std::span<const std::size_t> indices) {
  std::vector<ImageTensor> images;
  std::vector<std::string> transcripts;
  for (auto i : indices) {
    if (i >= manifest.size()) {
      throw InvalidArgument("batch index " + std::to_string(i) +
                            " out of range for manifest of " +
                            std::to_string(manifest.size()));
    }
    images.push_back(normalize_image(read_png(manifest.image_path(i))));
    transcripts.push_back(manifest.samples()[i].transcript);
  }
  return make_batch(images, transcripts, manifest.alphabet());
}

ImageStore::ImageStore(const Manifest& manifest)
    : alphabet_(manifest.alphabet()) {
  images_.reserve(manifest.size());
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    images_.push_back(normalize_image(read_png(manifest.image_path(i))));
    transcripts_.push_back(manifest.samples()[i].transcript);
  }
}

Batch ImageStore::batch(std::span<const std::size_t> indices) const {
  std::vector<ImageTensor> images;
  std::vector<std::string> transcripts;
  for (auto i : indices) {
    if (i >= images_.size()) throw InvalidArgument("batch index out of range");
    images.push_back(images_[i]);
    transcripts.push_back(transcripts_[i]);
  }
  return make_batch(images, transcripts, alphabet_);
}

}  // namespace scribe
