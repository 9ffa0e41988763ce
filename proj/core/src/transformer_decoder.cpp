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

#include "scribe/transformer_decoder.hpp"

#include <cmath>

#include "scribe/errors.hpp"

namespace scribe {
namespace nn = torch::nn;

MultiHeadAttentionImpl::MultiHeadAttentionImpl(int dim, int heads)
    : heads_(heads) {
  if (dim % heads != 0) {
    throw InvalidArgument("attention width must be divisible by the head count");
  }
  q = register_module("q", nn::Linear(dim, dim));
  k = register_module("k", nn::Linear(dim, dim));
  v = register_module("v", nn::Linear(dim, dim));
  out = register_module("out", nn::Linear(dim, dim));
}

torch::Tensor MultiHeadAttentionImpl::forward(const torch::Tensor& query,
                                              const torch::Tensor& memory,
                                              const torch::Tensor& blocked) {
  const auto b = query.size(0);
  const auto lq = query.size(1);
  const auto lk = memory.size(1);
  const auto dim = query.size(2);
  const auto head_dim = dim / heads_;
  auto split = [&](const torch::Tensor& x, std::int64_t len) {
    return x.view({b, len, heads_, head_dim}).transpose(1, 2);
  };
  auto qh = split(q(query), lq);
  auto kh = split(k(memory), lk);
  auto vh = split(v(memory), lk);
  auto scores = torch::matmul(qh, kh.transpose(-2, -1)) /
                std::sqrt(static_cast<double>(head_dim));
  if (blocked.defined()) {
    scores = scores.masked_fill(blocked.unsqueeze(1),
                                -std::numeric_limits<double>::infinity());
  }
  auto weights = torch::softmax(scores, -1);
  auto mixed = torch::matmul(weights, vh).transpose(1, 2).reshape({b, lq, dim});
  return out(mixed);
}

TransformerDecoderImpl::TransformerDecoderImpl(TokenLayout layout,
                                               int memory_dim, int hidden,
                                               int heads, int ffn, int max_len)
    : layout_(layout), max_len_(max_len) {
  embed = register_module("embed", nn::Embedding(layout.vocabulary, hidden));
  position = register_module("position", nn::Embedding(max_len, hidden));
  if (memory_dim != hidden) {
    memory_proj = register_module("memory_proj", nn::Linear(memory_dim, hidden));
  }
  self_attn = register_module("self_attn", MultiHeadAttention(hidden, heads));
  cross_attn = register_module("cross_attn", MultiHeadAttention(hidden, heads));
  norm1 = register_module("norm1", nn::LayerNorm(nn::LayerNormOptions({hidden})));
  norm2 = register_module("norm2", nn::LayerNorm(nn::LayerNormOptions({hidden})));
  norm3 = register_module("norm3", nn::LayerNorm(nn::LayerNormOptions({hidden})));
  ff1 = register_module("ff1", nn::Linear(hidden, ffn));
  ff2 = register_module("ff2", nn::Linear(ffn, hidden));
  classifier = register_module("classifier", nn::Linear(hidden, layout.vocabulary));
}

torch::Tensor TransformerDecoderImpl::forward(
    const torch::Tensor& memory, const std::vector<std::int64_t>& memory_lengths,
    const torch::Tensor& tokens) {
  if (memory.size(0) < 1) throw InvalidArgument("empty representation");
  const auto b = tokens.size(0);
  const auto len = tokens.size(1);
  if (len > max_len_) {
    throw InvalidArgument("token sequence longer than the positional table");
  }
  auto mem = memory.transpose(0, 1);  // [B, T, D]
  if (memory_proj) mem = memory_proj(mem);
  const auto frames = mem.size(1);

  auto positions = torch::arange(len, torch::TensorOptions().dtype(torch::kLong));
  auto x = embed(tokens) + position(positions).unsqueeze(0);

  auto causal = torch::ones({len, len}, torch::kBool).triu(1).unsqueeze(0);
  x = norm1(x + self_attn(x, x, causal));

  auto frame_idx = torch::arange(frames, torch::kLong).unsqueeze(0);
  auto valid = torch::tensor(memory_lengths, torch::kLong).unsqueeze(1);
  auto memory_blocked = (frame_idx >= valid).unsqueeze(1);  // [B, 1, T]
  x = norm2(x + cross_attn(x, mem, memory_blocked));

  x = norm3(x + ff2(torch::relu(ff1(x))));
  (void)b;
  return classifier(x);
}

TeacherForcing teacher_forcing(
    const std::vector<std::vector<std::int64_t>>& sequences,
    const TokenLayout& layout) {
  std::size_t longest = 0;
  for (const auto& s : sequences) longest = std::max(longest, s.size());
  const auto b = static_cast<std::int64_t>(sequences.size());
  const auto len = static_cast<std::int64_t>(longest + 1);
  auto input = torch::full({b, len}, layout.pad, torch::kLong);
  auto target = torch::full({b, len}, layout.pad, torch::kLong);
  auto in_acc = input.accessor<std::int64_t, 2>();
  auto tg_acc = target.accessor<std::int64_t, 2>();
  for (std::int64_t i = 0; i < b; ++i) {
    const auto& s = sequences[static_cast<std::size_t>(i)];
    in_acc[i][0] = layout.sos;
    for (std::size_t j = 0; j < s.size(); ++j) {
      in_acc[i][static_cast<std::int64_t>(j) + 1] = s[j];
      tg_acc[i][static_cast<std::int64_t>(j)] = s[j];
    }
    tg_acc[i][static_cast<std::int64_t>(s.size())] = layout.eos;
  }
  return {input, target};
}

torch::Tensor token_cross_entropy(const torch::Tensor& logits,
                                  const torch::Tensor& target,
                                  const TokenLayout& layout,
                                  TokenReduction reduction) {
  auto flat = logits.reshape({-1, logits.size(-1)});
  auto opts = nn::functional::CrossEntropyFuncOptions().ignore_index(layout.pad);
  if (reduction == TokenReduction::kMean) {
    opts = opts.reduction(torch::kMean);
  } else {
    opts = opts.reduction(torch::kSum);
  }
  return nn::functional::cross_entropy(flat, target.reshape({-1}), opts);
}

std::vector<std::vector<std::int64_t>> td_generate(
    TransformerDecoder& decoder, const torch::Tensor& memory,
    const std::vector<std::int64_t>& memory_lengths, int max_len) {
  if (max_len < 1) throw InvalidArgument("max_len must be at least 1");
  const auto& layout = decoder->layout();
  const auto b = memory.size(1);
  max_len = std::min(max_len, decoder->max_len() - 1);
  torch::NoGradGuard no_grad;
  auto tokens = torch::full({b, 1}, layout.sos, torch::kLong);
  std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(b));
  std::vector<bool> done(static_cast<std::size_t>(b), false);
  for (int step = 0; step < max_len; ++step) {
    auto logits = decoder->forward(memory, memory_lengths, tokens);
    auto next = logits.select(1, logits.size(1) - 1).argmax(-1).to(torch::kLong);
    auto acc = next.accessor<std::int64_t, 1>();
    bool all_done = true;
    for (std::int64_t i = 0; i < b; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (done[idx]) continue;
      if (acc[i] == layout.eos) {
        done[idx] = true;
      } else {
        out[idx].push_back(acc[i]);
      }
      all_done = all_done && done[idx];
    }
    if (all_done) break;
    tokens = torch::cat({tokens, next.unsqueeze(1)}, 1);
  }
  return out;
}

}  // namespace scribe
