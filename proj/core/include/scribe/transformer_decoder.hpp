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

namespace scribe {

// Token ids a decoder works with. Content tokens are [0, sos).
struct TokenLayout {
  std::int64_t vocabulary = 0;  // embedding rows and output classes
  std::int64_t sos = 0;
  std::int64_t eos = 0;
  std::int64_t pad = 0;         // input filler; ignored by the loss
};

class MultiHeadAttentionImpl : public torch::nn::Module {
 public:
  MultiHeadAttentionImpl(int dim, int heads);

  // query [B, Lq, D], memory [B, Lk, D]; `blocked` broadcastable to
  // [B, Lq, Lk], true where attention is not allowed (may be undefined).
  torch::Tensor forward(const torch::Tensor& query, const torch::Tensor& memory,
                        const torch::Tensor& blocked);

  torch::nn::Linear q{nullptr}, k{nullptr}, v{nullptr}, out{nullptr};

 private:
  int heads_;
};
TORCH_MODULE(MultiHeadAttention);

// Single post-norm transformer decoder layer with learned positions:
// causal self-attention, cross-attention over the representation S, and a
// ReLU feed-forward block, followed by the output projection.
class TransformerDecoderImpl : public torch::nn::Module {
 public:
  TransformerDecoderImpl(TokenLayout layout, int memory_dim, int hidden,
                         int heads, int ffn, int max_len);

  // memory: [T, B, memory_dim] frames with memory_lengths valid per sample;
  // tokens: [B, L] teacher-forced input (SOS first). Returns [B, L, V].
  torch::Tensor forward(const torch::Tensor& memory,
                        const std::vector<std::int64_t>& memory_lengths,
                        const torch::Tensor& tokens);

  const TokenLayout& layout() const { return layout_; }
  int max_len() const { return max_len_; }

  torch::nn::Embedding embed{nullptr}, position{nullptr};
  torch::nn::Linear memory_proj{nullptr};  // only when memory_dim != hidden
  MultiHeadAttention self_attn{nullptr}, cross_attn{nullptr};
  torch::nn::LayerNorm norm1{nullptr}, norm2{nullptr}, norm3{nullptr};
  torch::nn::Linear ff1{nullptr}, ff2{nullptr}, classifier{nullptr};

 private:
  TokenLayout layout_;
  int max_len_;
};
TORCH_MODULE(TransformerDecoder);

// Teacher-forcing tensors for a batch of token sequences (content ids):
// input  = SOS s1 .. sn PAD..., target = s1 .. sn EOS PAD...
struct TeacherForcing {
  torch::Tensor input;   // [B, L] long
  torch::Tensor target;  // [B, L] long
};
TeacherForcing teacher_forcing(const std::vector<std::vector<std::int64_t>>& sequences,
                               const TokenLayout& layout);

// Token-level cross-entropy, PAD targets masked out. Mean over real tokens
// (kMean) or their sum (kSum).
enum class TokenReduction { kMean, kSum };
torch::Tensor token_cross_entropy(const torch::Tensor& logits,
                                  const torch::Tensor& target,
                                  const TokenLayout& layout,
                                  TokenReduction reduction = TokenReduction::kMean);

// Greedy autoregressive decoding from SOS; stops at EOS or after max_len
// tokens. Returned sequences exclude SOS and EOS.
std::vector<std::vector<std::int64_t>> td_generate(
    TransformerDecoder& decoder, const torch::Tensor& memory,
    const std::vector<std::int64_t>& memory_lengths, int max_len);

}  // namespace scribe
