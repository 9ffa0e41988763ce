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

#include <gtest/gtest.h>

#include "scribe/errors.hpp"
#include "scribe/pretext.hpp"
#include "scribe/synth.hpp"

namespace scribe {
namespace {

ImageTensor word(const char* text = "vortex") {
  return normalize_image(synth_word(text, 5).raster);
}

TEST(Pretext, TaskNames) {
  for (auto t : {PretextTask::kRotation, PretextTask::kFlip, PretextTask::kJigsaw,
                 PretextTask::kSorting}) {
    EXPECT_EQ(parse_task(task_name(t)), t);
  }
  EXPECT_THROW(parse_task("colorize"), InvalidArgument);
  EXPECT_EQ(task_classes(PretextTask::kJigsaw), 24);
}

TEST(Pretext, RotationInvertsToTheCrop) {
  const auto img = word();
  for (std::uint64_t s = 0; s < 20; ++s) {
    RandomSource rng(s), replay(s);
    const auto sample = make_rotation_sample(img, rng);
    const auto square = square_crop(img, CropMode::kRandom, replay);
    EXPECT_EQ(sample.image.height(), kSquareSide);
    EXPECT_EQ(rotate_quarter_turns(sample.image, 4 - sample.class_label), square);
  }
}

TEST(Pretext, FlipInvertsToTheCrop) {
  const auto img = word();
  for (std::uint64_t s = 0; s < 20; ++s) {
    RandomSource rng(s), replay(s);
    const auto sample = make_flip_sample(img, rng);
    const auto square = square_crop(img, CropMode::kRandom, replay);
    EXPECT_EQ(apply_flip(sample.image, static_cast<Flip>(sample.class_label)), square);
  }
}

TEST(Pretext, NarrowImagesArePaddedForSquareCrops) {
  const ImageTensor narrow(64, 20, 0.0f);
  RandomSource rng(1);
  const auto sample = make_rotation_sample(narrow, rng);
  EXPECT_EQ(sample.image.width(), kSquareSide);
}

TEST(Pretext, JigsawPatchesFollowThePermutation) {
  const auto img = word();
  RandomSource rng(3);
  const auto sample = make_jigsaw_sample(img, rng, CropMode::kCentred);
  ASSERT_EQ(sample.patches.size(), 4u);
  EXPECT_EQ(perm_rank(sample.permutation), sample.class_label);
  RandomSource replay(3);
  const auto tiles = jigsaw_tiles(square_crop(img, CropMode::kCentred, replay));
  for (int j = 0; j < 4; ++j) {
    const auto& tile = tiles[static_cast<std::size_t>(sample.permutation[j])];
    const int off = (kJigsawTile - kJigsawPatch) / 2;
    EXPECT_EQ(sample.patches[j], crop(tile, off, off, kJigsawPatch, kJigsawPatch));
  }
}

TEST(Pretext, SortingTargetNamesTheSourcePiece) {
  const auto img = word();
  const Permutation perm = {2, 0, 1};
  const auto sample = make_sorting_sample_with(img, perm);
  EXPECT_EQ(sample.order_target, (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(sample.image.width(), img.width() / 3 * 3);
  const int w = img.width() / 3;
  EXPECT_EQ(crop_columns(sample.image, 0, w), crop_columns(img, 2 * w, w));
}

TEST(Pretext, SortingRejectsNarrowImages) {
  const ImageTensor narrow(64, 100);
  RandomSource rng(1);
  EXPECT_FALSE(make_sorting_sample(narrow, rng, 4).has_value());
  EXPECT_TRUE(make_sorting_sample(narrow, rng, 3).has_value());
}

TEST(Pretext, LabelLines) {
  const auto img = word();
  const auto s = make_sorting_sample_with(img, {1, 0});
  EXPECT_EQ(pretext_label_line(s), "sorting\t1 0");
}

}  // namespace
}  // namespace scribe
