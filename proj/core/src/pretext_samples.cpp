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

#include "scribe/pretext.hpp"

#include "scribe/errors.hpp"

namespace scribe {

std::string task_name(PretextTask task) {
  switch (task) {
    case PretextTask::kRotation: return "rotation";
    case PretextTask::kFlip: return "flip";
    case PretextTask::kJigsaw: return "jigsaw";
    case PretextTask::kSorting: return "sorting";
  }
  return "?";
}

PretextTask parse_task(std::string_view name) {
  if (name == "rotation") return PretextTask::kRotation;
  if (name == "flip") return PretextTask::kFlip;
  if (name == "jigsaw") return PretextTask::kJigsaw;
  if (name == "sorting") return PretextTask::kSorting;
  throw InvalidArgument("unknown pretext task '" + std::string(name) +
                        "' (expected rotation, flip, jigsaw or sorting)");
}

int task_classes(PretextTask task) {
  switch (task) {
    case PretextTask::kRotation: return 4;
    case PretextTask::kFlip: return 4;
    case PretextTask::kJigsaw: return 24;
    case PretextTask::kSorting: return 0;
  }
  return 0;
}

ImageTensor square_crop(const ImageTensor& image, CropMode mode,
                        RandomSource& rng, int* offset) {
  if (image.height() != kSquareSide) {
    throw InvalidArgument("pretext samples need height-64 images");
  }
  const ImageTensor padded = pad_right(image, kSquareSide);
  const int slack = padded.width() - kSquareSide;
  const int x = mode == CropMode::kRandom
                    ? static_cast<int>(rng.uniform_int(0, slack))
                    : slack / 2;
  if (offset) *offset = x;
  return crop_columns(padded, x, kSquareSide);
}

PretextSample make_rotation_sample(const ImageTensor& image, RandomSource& rng,
                                   CropMode mode) {
  PretextSample s;
  s.task = PretextTask::kRotation;
  const ImageTensor square = square_crop(image, mode, rng, &s.crop_offset);
  s.class_label = static_cast<int>(rng.uniform_int(0, 3));
  s.image = rotate_quarter_turns(square, s.class_label);
  return s;
}

ImageTensor apply_flip(const ImageTensor& image, Flip flip) {
  switch (flip) {
    case Flip::kNone: return image;
    case Flip::kHorizontal: return flip_horizontal(image);
    case Flip::kVertical: return flip_vertical(image);
    case Flip::kBoth: return flip_vertical(flip_horizontal(image));
  }
  return image;
}

PretextSample make_flip_sample(const ImageTensor& image, RandomSource& rng,
                               CropMode mode) {
  PretextSample s;
  s.task = PretextTask::kFlip;
  const ImageTensor square = square_crop(image, mode, rng, &s.crop_offset);
  s.class_label = static_cast<int>(rng.uniform_int(0, 3));
  s.image = apply_flip(square, static_cast<Flip>(s.class_label));
  return s;
}

std::vector<ImageTensor> jigsaw_tiles(const ImageTensor& square) {
  const ImageTensor canvas =
      resize_bilinear(square, kJigsawCanvas, kJigsawCanvas);
  std::vector<ImageTensor> tiles;
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 2; ++col) {
      tiles.push_back(crop(canvas, row * kJigsawTile, col * kJigsawTile,
                           kJigsawTile, kJigsawTile));
    }
  }
  return tiles;
}

PretextSample make_jigsaw_sample(const ImageTensor& image, RandomSource& rng,
                                 CropMode mode) {
  PretextSample s;
  s.task = PretextTask::kJigsaw;
  const ImageTensor square = square_crop(image, mode, rng, &s.crop_offset);
  const auto tiles = jigsaw_tiles(square);
  const auto rank = rng.uniform_int(0, factorial(kJigsawPieces) - 1);
  s.permutation = perm_unrank(kJigsawPieces, rank);
  s.class_label = static_cast<int>(rank);
  constexpr int kSlack = kJigsawTile - kJigsawPatch;
  for (int slot = 0; slot < kJigsawPieces; ++slot) {
    int y = kSlack / 2;
    int x = kSlack / 2;
    if (mode == CropMode::kRandom) {
      y = static_cast<int>(rng.uniform_int(0, kSlack));
      x = static_cast<int>(rng.uniform_int(0, kSlack));
    }
    s.sub_crop_offsets.emplace_back(y, x);
    s.patches.push_back(
        crop(tiles[s.permutation[slot]], y, x, kJigsawPatch, kJigsawPatch));
  }
  return s;
}

PretextSample make_sorting_sample_with(const ImageTensor& image,
                                       const Permutation& permutation) {
  const int pieces = static_cast<int>(permutation.size());
  if (!is_permutation_of_iota(permutation)) {
    throw InvalidArgument("sorting shuffle is not a permutation");
  }
  const int patch_width = image.width() / pieces;
  if (patch_width < kMinSortingPatchWidth) {
    throw InvalidArgument("image too narrow for the requested patch count");
  }
  std::vector<ImageTensor> shuffled;
  for (int slot = 0; slot < pieces; ++slot) {
    shuffled.push_back(
        crop_columns(image, permutation[slot] * patch_width, patch_width));
  }
  PretextSample s;
  s.task = PretextTask::kSorting;
  s.pieces = pieces;
  s.permutation = permutation;
  s.order_target = permutation;
  s.image = concat_columns(shuffled);
  return s;
}

std::optional<PretextSample> make_sorting_sample(const ImageTensor& image,
                                                 RandomSource& rng,
                                                 int pieces) {
  if (pieces < 2 || pieces > 4) {
    throw InvalidArgument("sorting uses 2, 3 or 4 patches");
  }
  const auto rank = rng.uniform_int(0, factorial(pieces) - 1);
  if (image.width() < kMinSortingPatchWidth * pieces) return std::nullopt;
  return make_sorting_sample_with(image, perm_unrank(pieces, rank));
}

std::optional<PretextSample> make_pretext_sample(PretextTask task,
                                                 const ImageTensor& image,
                                                 RandomSource& rng,
                                                 CropMode mode, int pieces) {
  switch (task) {
    case PretextTask::kRotation:
      return make_rotation_sample(image, rng, mode);
    case PretextTask::kFlip:
      return make_flip_sample(image, rng, mode);
    case PretextTask::kJigsaw:
      return make_jigsaw_sample(image, rng, mode);
    case PretextTask::kSorting: {
      const int m = pieces > 0 ? pieces : static_cast<int>(rng.uniform_int(2, 4));
      return make_sorting_sample(image, rng, m);
    }
  }
  return std::nullopt;
}

std::string pretext_label_line(const PretextSample& sample) {
  std::string line = task_name(sample.task) + "\t";
  if (sample.task == PretextTask::kSorting) {
    for (std::size_t i = 0; i < sample.order_target.size(); ++i) {
      if (i) line += ' ';
      line += std::to_string(sample.order_target[i]);
    }
  } else {
    line += std::to_string(sample.class_label);
  }
  return line;
}

ImageTensor pretext_preview(const PretextSample& sample) {
  if (sample.task == PretextTask::kJigsaw) return concat_columns(sample.patches);
  return sample.image;
}

}  // namespace scribe
