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
#include <vector>

#include <torch/torch.h>

#include "scribe/batch.hpp"
#include "scribe/image.hpp"
#include "scribe/model_spec.hpp"

namespace scribe {

// Total horizontal (and vertical) downsampling of the visual encoder.
inline constexpr int kEncoderStride = 32;

// Feature-map columns for an input of the given width.
inline std::int64_t encoder_frames(std::int64_t width) {
  return width / kEncoderStride;
}

// 3x3 convolution (same padding, no bias) + batch norm + ReLU.
class ConvBnReluImpl : public torch::nn::Module {
 public:
  ConvBnReluImpl(int in, int out);
  torch::Tensor forward(const torch::Tensor& x);

  torch::nn::Conv2d conv{nullptr};
  torch::nn::BatchNorm2d bn{nullptr};
};
TORCH_MODULE(ConvBnRelu);

// Two 3x3 convolutions with an identity skip, or a 1x1 projection when the
// channel count changes at block entry.
class ResidualBlockImpl : public torch::nn::Module {
 public:
  ResidualBlockImpl(int in, int out);
  torch::Tensor forward(const torch::Tensor& x);

  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr}, project{nullptr};
  torch::nn::BatchNorm2d bn1{nullptr}, bn2{nullptr}, project_bn{nullptr};
};
TORCH_MODULE(ResidualBlock);

// ResNet-29 style feature extractor: [B, 1, 64, W] -> [B, c', 2, W / 32].
//
//   conv 3x3/32, conv 3x3/64, pool
//   1 block @128, pool
//   2 blocks @256, pool
//   5 blocks @512, conv 3x3/512, pool
//   3 blocks @512, pool
//   conv 3x3/512
class VisualEncoderImpl : public torch::nn::Module {
 public:
  explicit VisualEncoderImpl(const ModelSpec& spec);
  torch::Tensor forward(const torch::Tensor& x);

  int out_channels() const { return out_channels_; }
  torch::nn::Sequential layers{nullptr};

 private:
  int out_channels_ = 0;
};
TORCH_MODULE(VisualEncoder);

// Stacked bidirectional LSTM over frames; output dim 2 * hidden.
class SequenceEncoderImpl : public torch::nn::Module {
 public:
  explicit SequenceEncoderImpl(const ModelSpec& spec);

  // frames: [T, B, D]; lengths: valid frames per sample (<= T).
  // Returns [T, B, 2 * hidden]; positions past a sample's length are zero.
  torch::Tensor forward(const torch::Tensor& frames,
                        const std::vector<std::int64_t>& lengths);

  torch::nn::LSTM lstm{nullptr};
};
TORCH_MODULE(SequenceEncoder);

// [B, C, H, W] -> [W, B, C * H]; frame i flattens column i channel-major.
torch::Tensor map_to_sequence(const torch::Tensor& features);
// Inverse of map_to_sequence for a known channel count.
torch::Tensor sequence_to_map(const torch::Tensor& frames, std::int64_t channels);

// Everything between pixels and the representation S.
struct Representation {
  torch::Tensor features;  // [B, c', H', W']
  torch::Tensor frames;    // [W', B, d_S]
  std::vector<std::int64_t> lengths;
};

class EncoderImpl : public torch::nn::Module {
 public:
  explicit EncoderImpl(const ModelSpec& spec);

  // input: [B, 1, 64, W] network input (see to_input). Throws InvalidArgument
  // when W < 32.
  torch::Tensor encode_visual(const torch::Tensor& input);
  torch::Tensor encode_sequence(const torch::Tensor& frames,
                                const std::vector<std::int64_t>& lengths);
  Representation forward(const torch::Tensor& input,
                         const std::vector<int>& widths);

  VisualEncoder cnn{nullptr};
  SequenceEncoder rnn{nullptr};
};
TORCH_MODULE(Encoder);

// Network input for a batch: [B, 1, H, W] holding 1 - pixel, so ink is
// positive and padding / background is zero.
torch::Tensor to_input(const Batch& batch);
torch::Tensor to_input(const ImageTensor& image);
torch::Tensor to_input(std::span<const ImageTensor> images);  // equal shapes

std::vector<std::int64_t> frame_lengths(const std::vector<int>& widths);

}  // namespace scribe
