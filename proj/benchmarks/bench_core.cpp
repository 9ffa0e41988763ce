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

// Micro benchmarks for the hot paths: CTC loss, augmentation, pretext sample
// construction and the encoder forward pass.

#include <benchmark/benchmark.h>

#include "scribe/augment.hpp"
#include "scribe/ctc.hpp"
#include "scribe/encoder.hpp"
#include "scribe/pretext.hpp"
#include "scribe/synth.hpp"

namespace {
using namespace scribe;

void BM_CtcLoss(benchmark::State& state) {
  torch::set_num_threads(1);
  const auto frames = state.range(0);
  const std::int64_t batch = 16, classes = 80;
  auto logits = torch::randn({frames, batch, classes}).requires_grad_(true);
  std::vector<std::vector<std::int64_t>> targets(batch, std::vector<std::int64_t>{3, 5, 5, 9});
  std::vector<std::int64_t> lengths(batch, frames);
  for (auto _ : state) {
    auto loss = ctc_loss(logits, targets, lengths);
    loss.backward();
    benchmark::DoNotOptimize(loss);
  }
}
BENCHMARK(BM_CtcLoss)->Arg(8)->Arg(32);

void BM_AugmentPretrain(benchmark::State& state) {
  const auto img = normalize_image(synth_word("benchmark", 3).raster);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomSource rng(i++);
    benchmark::DoNotOptimize(augment_pretrain(img, rng));
  }
}
BENCHMARK(BM_AugmentPretrain);

void BM_JigsawSample(benchmark::State& state) {
  const auto img = normalize_image(synth_word("benchmark", 3).raster);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomSource rng(i++);
    benchmark::DoNotOptimize(make_jigsaw_sample(img, rng));
  }
}
BENCHMARK(BM_JigsawSample);

void BM_EncoderForward(benchmark::State& state) {
  torch::set_num_threads(1);
  torch::NoGradGuard no_grad;
  Encoder encoder(desk_model(DecoderKind::kCtc, 26));
  encoder->eval();
  const auto width = state.range(0);
  auto input = torch::rand({8, 1, 64, width});
  const std::vector<int> widths(8, static_cast<int>(width));
  for (auto _ : state) {
    benchmark::DoNotOptimize(encoder->forward(input, widths));
  }
}
BENCHMARK(BM_EncoderForward)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
