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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scribe/image.hpp"
#include "scribe/permutation.hpp"
#include "scribe/random.hpp"

namespace scribe {

enum class PretextTask { kRotation, kFlip, kJigsaw, kSorting };

std::string task_name(PretextTask task);
PretextTask parse_task(std::string_view name);  // throws InvalidArgument

// Number of classes of the classification tasks (4, 4, 24); 0 for sorting.
int task_classes(PretextTask task);

// Ordered flip classes.
enum class Flip { kNone = 0, kHorizontal = 1, kVertical = 2, kBoth = 3 };

inline constexpr int kSquareSide = 64;
inline constexpr int kJigsawCanvas = 150;
inline constexpr int kJigsawTile = 75;
inline constexpr int kJigsawPatch = 64;
inline constexpr int kJigsawPieces = 4;
// Every sorting patch must keep at least one encoder frame.
inline constexpr int kMinSortingPatchWidth = 32;

enum class CropMode { kRandom, kCentred };

struct PretextSample {
  PretextTask task = PretextTask::kRotation;
  ImageTensor image;                // rotation / flip / sorting input
  std::vector<ImageTensor> patches; // jigsaw: shuffled 64x64 patches
  int class_label = -1;             // rotation / flip / jigsaw
  std::vector<int> order_target;    // sorting
  int pieces = 0;                   // sorting M

  // Provenance for inverse-transform checks.
  int crop_offset = 0;                  // horizontal offset of the square crop
  Permutation permutation;              // jigsaw / sorting shuffle
  std::vector<std::pair<int, int>> sub_crop_offsets;  // jigsaw (y, x) per slot
};

// Square 64x64 crop of a height-64 image; narrow images are padded right with
// background first. Returns the crop and writes the offset used.
ImageTensor square_crop(const ImageTensor& image, CropMode mode,
                        RandomSource& rng, int* offset = nullptr);

PretextSample make_rotation_sample(const ImageTensor& image, RandomSource& rng,
                                   CropMode mode = CropMode::kRandom);
PretextSample make_flip_sample(const ImageTensor& image, RandomSource& rng,
                               CropMode mode = CropMode::kRandom);
PretextSample make_jigsaw_sample(const ImageTensor& image, RandomSource& rng,
                                 CropMode mode = CropMode::kRandom);

// Returns nullopt when the image is narrower than 32 * pieces columns.
std::optional<PretextSample> make_sorting_sample(const ImageTensor& image,
                                                 RandomSource& rng, int pieces);

// Deterministic variants with the random choices fixed by the caller.
ImageTensor apply_flip(const ImageTensor& image, Flip flip);
PretextSample make_sorting_sample_with(const ImageTensor& image,
                                       const Permutation& permutation);

// The four 75x75 tiles of the 150x150 resized square, row-major.
std::vector<ImageTensor> jigsaw_tiles(const ImageTensor& square);

// Dispatch used by the trainers. For sorting, `pieces` of 0 draws M uniformly
// from {2,3,4}; nullopt means the sample was skipped.
std::optional<PretextSample> make_pretext_sample(PretextTask task,
                                                 const ImageTensor& image,
                                                 RandomSource& rng,
                                                 CropMode mode, int pieces = 0);

// `task<TAB>label_or_sequence` with the sorting target written as
// space-separated indices.
std::string pretext_label_line(const PretextSample& sample);

// Image written when a pretext dataset is materialized: the transformed image
// or, for jigsaw, the patches side by side.
ImageTensor pretext_preview(const PretextSample& sample);

}  // namespace scribe
