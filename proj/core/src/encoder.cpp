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

#include "scribe/encoder.hpp"

#include "scribe/errors.hpp"

namespace scribe {
namespace nn = torch::nn;

ConvBnReluImpl::ConvBnReluImpl(int in, int out) {
  conv = register_module(
      "conv", nn::Conv2d(nn::Conv2dOptions(in, out, 3).padding(1).bias(false)));
  bn = register_module("bn", nn::BatchNorm2d(out));
}

torch::Tensor ConvBnReluImpl::forward(const torch::Tensor& x) {
  return torch::relu(bn(conv(x)));
}

ResidualBlockImpl::ResidualBlockImpl(int in, int out) {
  conv1 = register_module(
      "conv1", nn::Conv2d(nn::Conv2dOptions(in, out, 3).padding(1).bias(false)));
  bn1 = register_module("bn1", nn::BatchNorm2d(out));
  conv2 = register_module(
      "conv2", nn::Conv2d(nn::Conv2dOptions(out, out, 3).padding(1).bias(false)));
  bn2 = register_module("bn2", nn::BatchNorm2d(out));
  if (in != out) {
    project = register_module(
        "project", nn::Conv2d(nn::Conv2dOptions(in, out, 1).bias(false)));
    project_bn = register_module("project_bn", nn::BatchNorm2d(out));
  }
}

torch::Tensor ResidualBlockImpl::forward(const torch::Tensor& x) {
  auto y = torch::relu(bn1(conv1(x)));
  y = bn2(conv2(y));
  auto skip = project ? project_bn(project(x)) : x;
  return torch::relu(y + skip);
}

VisualEncoderImpl::VisualEncoderImpl(const ModelSpec& spec) {
  const int c32 = spec.conv_channels(32);
  const int c64 = spec.conv_channels(64);
  const int c128 = spec.conv_channels(128);
  const int c256 = spec.conv_channels(256);
  const int c512 = spec.conv_channels(512);
  auto pool = [] { return nn::MaxPool2d(nn::MaxPool2dOptions(2).stride(2)); };

  nn::Sequential seq;
  seq->push_back(ConvBnRelu(1, c32));
  seq->push_back(ConvBnRelu(c32, c64));
  seq->push_back(pool());
  seq->push_back(ResidualBlock(c64, c128));
  seq->push_back(pool());
  seq->push_back(ResidualBlock(c128, c256));
  seq->push_back(ResidualBlock(c256, c256));
  seq->push_back(pool());
  seq->push_back(ResidualBlock(c256, c512));
  for (int i = 0; i < 4; ++i) seq->push_back(ResidualBlock(c512, c512));
  seq->push_back(ConvBnRelu(c512, c512));
  seq->push_back(pool());
  for (int i = 0; i < 3; ++i) seq->push_back(ResidualBlock(c512, c512));
  seq->push_back(pool());
  seq->push_back(ConvBnRelu(c512, c512));
  layers = register_module("layers", seq);
  out_channels_ = c512;
}

torch::Tensor VisualEncoderImpl::forward(const torch::Tensor& x) {
  return layers->forward(x);
}

SequenceEncoderImpl::SequenceEncoderImpl(const ModelSpec& spec) {
  lstm = register_module(
      "lstm", nn::LSTM(nn::LSTMOptions(spec.frame_dim(), spec.rnn_hidden)
                           .num_layers(spec.rnn_layers)
                           .bidirectional(true)));
}

torch::Tensor SequenceEncoderImpl::forward(
    const torch::Tensor& frames, const std::vector<std::int64_t>& lengths) {
  const auto total = frames.size(0);
  bool full = true;
  for (auto l : lengths) full = full && l == total;
  if (full) return std::get<0>(lstm->forward(frames));
  auto len = torch::tensor(lengths, torch::kLong);
  auto packed = nn::utils::rnn::pack_padded_sequence(frames, len,
                                                     /*batch_first=*/false,
                                                     /*enforce_sorted=*/false);
  auto out = std::get<0>(lstm->forward_with_packed_input(packed));
  return std::get<0>(nn::utils::rnn::pad_packed_sequence(
      out, /*batch_first=*/false, /*padding_value=*/0.0, total));
}

torch::Tensor map_to_sequence(const torch::Tensor& features) {
  const auto b = features.size(0);
  const auto c = features.size(1);
  const auto h = features.size(2);
  const auto w = features.size(3);
  return features.permute({3, 0, 1, 2}).reshape({w, b, c * h});
}

torch::Tensor sequence_to_map(const torch::Tensor& frames,
                              std::int64_t channels) {
  const auto w = frames.size(0);
  const auto b = frames.size(1);
  const auto h = frames.size(2) / channels;
  return frames.reshape({w, b, channels, h}).permute({1, 2, 3, 0});
}

EncoderImpl::EncoderImpl(const ModelSpec& spec) {
  spec.validate();
  cnn = register_module("cnn", VisualEncoder(spec));
  rnn = register_module("rnn", SequenceEncoder(spec));
}

torch::Tensor EncoderImpl::encode_visual(const torch::Tensor& input) {
  if (input.dim() != 4 || input.size(1) != 1) {
    throw InvalidArgument("encoder input must be [B, 1, H, W]");
  }
  if (input.size(3) < kEncoderStride || input.size(2) < kEncoderStride) {
    throw InvalidArgument("encoder input of width " +
                          std::to_string(input.size(3)) +
                          " is narrower than 32 columns");
  }
  return cnn(input);
}

torch::Tensor EncoderImpl::encode_sequence(
    const torch::Tensor& frames, const std::vector<std::int64_t>& lengths) {
  if (frames.size(0) < 1) throw InvalidArgument("no frames to encode");
  return rnn(frames, lengths);
}

Representation EncoderImpl::forward(const torch::Tensor& input,
                                    const std::vector<int>& widths) {
  Representation r;
  r.features = encode_visual(input);
  r.lengths = frame_lengths(widths);
  for (auto& l : r.lengths) {
    if (l < 1) throw InvalidArgument("sample narrower than 32 columns");
    l = std::min<std::int64_t>(l, r.features.size(3));
  }
  r.frames = encode_sequence(map_to_sequence(r.features), r.lengths);
  return r;
}

torch::Tensor to_input(const Batch& batch) {
  auto t = torch::from_blob(const_cast<float*>(batch.pixels.data()),
                            {batch.size, 1, batch.height, batch.max_width},
                            torch::kFloat)
               .clone();
  return 1.0 - t;
}

torch::Tensor to_input(const ImageTensor& image) {
  auto t = torch::from_blob(const_cast<float*>(image.values().data()),
                            {1, 1, image.height(), image.width()}, torch::kFloat)
               .clone();
  return 1.0 - t;
}

torch::Tensor to_input(std::span<const ImageTensor> images) {
  if (images.empty()) throw InvalidArgument("no images");
  std::vector<torch::Tensor> parts;
  parts.reserve(images.size());
  for (const auto& img : images) {
    if (img.height() != images.front().height() ||
        img.width() != images.front().width()) {
      throw InvalidArgument("stacked images must share a shape");
    }
    parts.push_back(to_input(img));
  }
  return torch::cat(parts, 0);
}

std::vector<std::int64_t> frame_lengths(const std::vector<int>& widths) {
  std::vector<std::int64_t> out;
  out.reserve(widths.size());
  for (int w : widths) out.push_back(encoder_frames(w));
  return out;
}

}  // namespace scribe
