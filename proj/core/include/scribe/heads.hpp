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

#include <torch/torch.h>

#include "scribe/alphabet.hpp"
#include "scribe/batch.hpp"
#include "scribe/encoder.hpp"
#include "scribe/model_spec.hpp"
#include "scribe/pretext.hpp"
#include "scribe/transformer_decoder.hpp"

namespace scribe {

// Global average pool over the cnn output followed by one linear layer.
class ClassifierHeadImpl : public torch::nn::Module {
 public:
  ClassifierHeadImpl(int channels, int classes);
  torch::Tensor forward(const torch::Tensor& features);  // [B, C, H, W]

  torch::nn::Linear linear{nullptr};
};
TORCH_MODULE(ClassifierHead);

// Per-patch pooled cnn features, concatenated in slot order, then an MLP.
class JigsawHeadImpl : public torch::nn::Module {
 public:
  JigsawHeadImpl(int channels, int hidden, int classes, int pieces);
  // features: [B * pieces, C, H, W] with the pieces of one sample adjacent.
  torch::Tensor forward(const torch::Tensor& features);

  int input_dim() const { return input_dim_; }
  torch::nn::Linear fc1{nullptr}, fc2{nullptr};

 private:
  int pieces_;
  int input_dim_;
};
TORCH_MODULE(JigsawHead);

// Which part of the encoder a pretext task trains.
enum class EncoderScope { kNone, kCnn, kCnnRnn };
std::string scope_name(EncoderScope scope);
EncoderScope parse_scope(std::string_view name);
EncoderScope pretrained_scope(PretextTask task);

// Token layout of the sorting decoder: content 0..3, then SOS, EOS, PAD.
TokenLayout sorting_layout();
inline constexpr int kMaxSortingPieces = 4;

struct StepResult {
  torch::Tensor loss;        // mean over samples (classification, ctc) or tokens
  std::int64_t correct = 0;  // exact class / exact order matches
  std::int64_t count = 0;
};

class PretextModelImpl : public torch::nn::Module {
 public:
  PretextModelImpl(const ModelSpec& spec, PretextTask task);

  StepResult forward(std::span<const PretextSample> samples);
  // Raw logits: [B, classes] for classification tasks, [B, L, V] for sorting.
  torch::Tensor logits(std::span<const PretextSample> samples);

  PretextTask task() const { return task_; }

  Encoder encoder{nullptr};
  ClassifierHead classifier{nullptr};
  JigsawHead jigsaw{nullptr};
  TransformerDecoder sorter{nullptr};

 private:
  PretextTask task_;
};
TORCH_MODULE(PretextModel);

// Encoder plus a CTC or TD decoder.
class RecognizerImpl : public torch::nn::Module {
 public:
  RecognizerImpl(const ModelSpec& spec, Alphabet alphabet);

  // Mean loss: CTC negative log-likelihood per sample (infeasible samples
  // excluded) or TD cross-entropy per token.
  StepResult forward(const Batch& batch);
  std::vector<std::string> predict(const Batch& batch, int max_len = 32);

  // CTC frame logits [T, B, C] for an already encoded batch.
  torch::Tensor ctc_logits(const Representation& rep);

  const ModelSpec& spec() const { return spec_; }
  const Alphabet& alphabet() const { return alphabet_; }
  TokenLayout td_layout() const;

  Encoder encoder{nullptr};
  torch::nn::Linear ctc{nullptr};
  TransformerDecoder td{nullptr};

 private:
  ModelSpec spec_;
  Alphabet alphabet_;
};
TORCH_MODULE(Recognizer);

std::int64_t count_parameters(torch::nn::Module& module);

}  // namespace scribe
