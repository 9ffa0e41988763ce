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
#include <span>
#include <string>
#include <vector>

#include "scribe/image.hpp"
#include "scribe/manifest.hpp"

namespace scribe {

// Images right-padded with background to the widest sample, plus the encoded
// transcripts (character ids, see Alphabet).
struct Batch {
  int size = 0;
  int height = 0;
  int max_width = 0;
  std::vector<float> pixels;  // size * height * max_width, row-major per image
  std::vector<int> widths;
  std::vector<std::vector<std::int64_t>> targets;
  std::vector<std::int64_t> target_lengths;
  std::vector<std::string> transcripts;
};

Batch make_batch(std::span<const ImageTensor> images,
                 std::span<const std::string> transcripts,
                 const Alphabet& alphabet);

// Reads and normalizes the selected images from disk.
Batch load_batch(const Manifest& manifest, std::span<const std::size_t> indices);

// Every normalized image of a manifest held in memory.
class ImageStore {
 public:
  explicit ImageStore(const Manifest& manifest);

  std::size_t size() const { return images_.size(); }
  const ImageTensor& image(std::size_t i) const { return images_.at(i); }
  const std::string& transcript(std::size_t i) const { return transcripts_.at(i); }
  const Alphabet& alphabet() const { return alphabet_; }

  Batch batch(std::span<const std::size_t> indices) const;

 private:
  std::vector<ImageTensor> images_;
  std::vector<std::string> transcripts_;
  Alphabet alphabet_;
};

}  // namespace scribe
