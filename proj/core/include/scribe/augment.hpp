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

#include <array>
#include <string>
#include <vector>

#include "scribe/image.hpp"
#include "scribe/random.hpp"

namespace scribe {

// Candidate transforms, in the fixed order they are applied.
enum class Transform {
  kScaleX,
  kScaleY,
  kTranslateX,
  kTranslateY,
  kRotate,
  kShearX,
  kPiecewiseAffine,
  kSharpen,
  kLinearContrast,
  kMotionBlur,
  kGaussianBlur,
  kAdditiveGaussianNoise,
};
inline constexpr int kTransformCount = 12;

std::string transform_name(Transform t);
bool is_photometric(Transform t);

enum class Morphology { kNone, kErode, kDilate };

enum class AugmentStage { kPretrain, kSupervised };

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct AugmentConfig {
  AugmentStage stage = AugmentStage::kPretrain;
  Range scale_x{0.75, 1.0};
  Range scale_y{0.75, 1.25};
  Range translate_x{-0.10, 0.10};  // fraction of width
  Range translate_y{-0.15, 0.15};  // fraction of height
  Range rotate_deg{-5.0, 5.0};
  Range shear_x_deg{-25.0, 25.0};
  Range piecewise_scale{0.02, 0.04};
  Range sharpen_alpha{0.1, 0.5};
  Range sharpen_lightness{0.75, 1.25};
  Range contrast{0.5, 1.5};
  std::array<int, 2> motion_kernel{5, 7};
  Range gaussian_sigma{1.0, 2.0};
  Range noise_std{1.0, 25.0};  // on the 0-255 scale
  double erode_probability = 0.33;
  double dilate_probability = 0.66;  // conditional on not eroding
  int max_transforms = 8;
  float fill = kBackground;

  static AugmentConfig pretrain();
  static AugmentConfig supervised();

  // Transforms eligible for selection at this stage, in application order.
  std::vector<Transform> candidates() const;

  // Throws InvalidArgument on an empty or inverted range.
  void validate() const;
};

// What one call to augment() did.
struct AugmentTrace {
  Morphology morphology = Morphology::kNone;
  std::vector<Transform> applied;
};

// Morphology first (erode with probability erode_probability, otherwise dilate
// with probability dilate_probability), then k ~ U{1..min(max, |candidates|)}
// distinct candidates applied in their listed order. Output keeps the input
// shape and is clamped to [0,1].
ImageTensor augment(const ImageTensor& image, const AugmentConfig& config,
                    RandomSource& rng, AugmentTrace* trace = nullptr);

ImageTensor augment_pretrain(const ImageTensor& image, RandomSource& rng,
                             AugmentTrace* trace = nullptr);
ImageTensor augment_supervised(const ImageTensor& image, RandomSource& rng,
                               AugmentTrace* trace = nullptr);

// Individual pieces, exposed for testing and for building custom pipelines.
ImageTensor apply_transform(const ImageTensor& image, Transform t,
                            const AugmentConfig& config, RandomSource& rng);
ImageTensor erode3x3(const ImageTensor& image);
ImageTensor dilate3x3(const ImageTensor& image);

}  // namespace scribe
