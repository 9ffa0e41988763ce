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

#include "scribe/accounting.hpp"
#include "scribe/encoder.hpp"
#include "scribe/errors.hpp"
#include "scribe/heads.hpp"
#include "scribe/transformer_decoder.hpp"

namespace scribe {
namespace {

ModelSpec tiny(DecoderKind decoder = DecoderKind::kCtc, int alphabet = 5) {
  ModelSpec s = desk_model(decoder, alphabet);
  s.width_divisor = 16;
  s.rnn_hidden = 8;
  s.td_hidden = 16;
  s.td_heads = 2;
  s.td_ffn = 32;
  s.jigsaw_hidden = 16;
  return s;
}

TEST(Encoder, ShapeLaw) {
  torch::NoGradGuard no_grad;
  Encoder enc(tiny());
  enc->eval();
  for (int w : {32, 64, 96, 256}) {
    auto f = enc->encode_visual(torch::zeros({2, 1, 64, w}));
    EXPECT_EQ(f.size(2), 2);
    EXPECT_EQ(f.size(3), w / 32);
    EXPECT_EQ(f.size(1), tiny().feature_channels());
  }
  EXPECT_THROW(enc->encode_visual(torch::zeros({1, 1, 64, 31})), InvalidArgument);
}

TEST(Encoder, MapToSequenceRoundTrip) {
  auto f = torch::randn({3, 8, 2, 5});
  auto seq = map_to_sequence(f);
  EXPECT_EQ(seq.sizes(), (torch::IntArrayRef{5, 3, 16}));
  EXPECT_TRUE(torch::equal(sequence_to_map(seq, 8), f));
}

TEST(Encoder, PaddedFramesAreIgnored) {
  torch::NoGradGuard no_grad;
  Encoder enc(tiny());
  enc->eval();
  auto wide = torch::zeros({1, 1, 64, 160});
  wide.slice(3, 0, 96).copy_(torch::rand({1, 1, 64, 96}));
  auto rw = enc->forward(wide, {96});
  EXPECT_EQ(rw.lengths[0], 3);
  EXPECT_EQ(rw.frames.slice(0, 3).abs().sum().item<float>(), 0.0f);

  // The recurrent part never reads frames past the valid length.
  auto frames = map_to_sequence(enc->encode_visual(wide));
  auto changed = frames.clone();
  changed.slice(0, 3) = torch::randn_like(changed.slice(0, 3));
  auto a = enc->encode_sequence(frames, {3});
  auto b = enc->encode_sequence(changed, {3});
  EXPECT_TRUE(torch::allclose(a.slice(0, 0, 3), b.slice(0, 0, 3), 1e-6, 1e-6));
}

TEST(Decoder, TeacherForcingLayout) {
  const TokenLayout layout{7, 4, 5, 6};
  auto tf = teacher_forcing({{2, 0, 1}, {3}}, layout);
  EXPECT_TRUE(torch::equal(tf.input, torch::tensor({{4, 2, 0, 1}, {4, 3, 6, 6}}, torch::kLong)));
  EXPECT_TRUE(torch::equal(tf.target, torch::tensor({{2, 0, 1, 5}, {3, 5, 6, 6}}, torch::kLong)));
}

TEST(Decoder, CausalMaskBlocksTheFuture) {
  torch::NoGradGuard no_grad;
  const TokenLayout layout{7, 4, 5, 6};
  TransformerDecoder td(layout, 8, 16, 2, 32, 16);
  td->eval();
  auto memory = torch::randn({3, 1, 8});
  const std::vector<std::int64_t> len{3};
  auto a = td(memory, len, torch::tensor({{4, 1, 2}}, torch::kLong));
  auto b = td(memory, len, torch::tensor({{4, 1, 3}}, torch::kLong));
  EXPECT_TRUE(torch::allclose(a.slice(1, 0, 2), b.slice(1, 0, 2), 1e-6, 1e-6));
}

TEST(Decoder, MemoryPastLengthIsIgnored) {
  torch::NoGradGuard no_grad;
  const TokenLayout layout{7, 4, 5, 6};
  TransformerDecoder td(layout, 8, 16, 2, 32, 16);
  td->eval();
  auto memory = torch::randn({4, 1, 8});
  auto changed = memory.clone();
  changed[3] = torch::randn({1, 8});
  auto tokens = torch::tensor({{4, 1}}, torch::kLong);
  const std::vector<std::int64_t> len{3};
  EXPECT_TRUE(torch::allclose(td(memory, len, tokens), td(changed, len, tokens)));
}

TEST(Decoder, GenerationStopsAtEos) {
  torch::NoGradGuard no_grad;
  const TokenLayout layout{7, 4, 5, 6};
  TransformerDecoder td(layout, 8, 16, 2, 32, 16);
  td->eval();
  auto out = td_generate(td, torch::randn({3, 2, 8}), {3, 2}, 5);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& seq : out) {
    EXPECT_LE(seq.size(), 5u);
    for (auto id : seq) EXPECT_NE(id, layout.eos);
  }
}

TEST(Heads, PretextOutputs) {
  torch::manual_seed(0);
  for (auto task : {PretextTask::kRotation, PretextTask::kJigsaw}) {
    PretextModel model(tiny(), task);
    std::vector<PretextSample> samples(2);
    for (auto& s : samples) {
      s.task = task;
      s.image = ImageTensor(64, 64, 0.5f);
      s.patches.assign(4, ImageTensor(64, 64, 0.5f));
      s.class_label = 1;
    }
    auto logits = model->logits(samples);
    EXPECT_EQ(logits.size(0), 2);
    EXPECT_EQ(logits.size(1), task_classes(task));
    auto r = model->forward(samples);
    EXPECT_TRUE(std::isfinite(r.loss.item<double>()));
  }
}

TEST(Heads, ScopesAndLayouts) {
  EXPECT_EQ(pretrained_scope(PretextTask::kSorting), EncoderScope::kCnnRnn);
  EXPECT_EQ(pretrained_scope(PretextTask::kFlip), EncoderScope::kCnn);
  EXPECT_EQ(parse_scope("cnn+rnn"), EncoderScope::kCnnRnn);
  EXPECT_THROW(parse_scope("all"), InvalidArgument);
  const auto l = sorting_layout();
  EXPECT_EQ(l.vocabulary, 7);
  EXPECT_NE(l.pad, l.eos);
}

TEST(Accounting, MatchesInstantiatedModels) {
  for (auto d : {DecoderKind::kCtc, DecoderKind::kTd}) {
    const auto spec = tiny(d, 9);
    Recognizer model(spec, Alphabet::from_utf8("abcdefghi"));
    EXPECT_EQ(count_params_flops(spec, 128).params(), count_parameters(*model))
        << decoder_name(d);
  }
}

TEST(Accounting, ConvolutionCostIsLinearInWidth) {
  const auto spec = full_model(DecoderKind::kCtc, 78);
  const auto a = count_params_flops(spec, 256);
  const auto b = count_params_flops(spec, 128);
  EXPECT_EQ(a.macs(CostGroup::kConv), 2 * b.macs(CostGroup::kConv));
}

}  // namespace
}  // namespace scribe
