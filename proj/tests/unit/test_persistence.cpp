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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "scribe/checkpoint.hpp"
#include "scribe/config.hpp"
#include "scribe/errors.hpp"
#include "scribe/heatmap.hpp"
#include "scribe/metrics.hpp"
#include "scribe/synth.hpp"

namespace scribe {
namespace {

namespace fs = std::filesystem;

ModelSpec tiny(DecoderKind decoder = DecoderKind::kCtc, int alphabet = 3) {
  ModelSpec s = desk_model(decoder, alphabet);
  s.width_divisor = 16;
  s.rnn_hidden = 8;
  s.td_hidden = 16;
  s.td_heads = 2;
  s.td_ffn = 32;
  s.jigsaw_hidden = 16;
  return s;
}

TEST(Metrics, WordAccuracy) {
  EXPECT_DOUBLE_EQ(word_accuracy({"the", "cat"}, {"the", "cap"}), 50.0);
  EXPECT_DOUBLE_EQ(word_accuracy({"a", "b"}, {"a", "b"}), 100.0);
  EXPECT_DOUBLE_EQ(word_accuracy({"x", "y"}, {"a", "b"}), 0.0);
  EXPECT_THROW(word_accuracy({"a"}, {"a", "b"}), InvalidArgument);
}

TEST(Metrics, LinesHaveStableFieldOrder) {
  MetricsRecord r;
  r.stage = "finetune";
  r.epoch = 3;
  r.split = "val";
  r.loss = 1.5;
  r.wacc = 25.0;
  r.seconds = 2.0;
  r.tags["decoder"] = "ctc";
  r.tags["fraction"] = 10.0;
  const auto line = to_line(r);
  EXPECT_EQ(line,
            R"({"stage":"finetune","epoch":3,"split":"val","loss":1.5,"wacc":25.0,)"
            R"("seconds":2.0,"decoder":"ctc","fraction":10.0})");
  EXPECT_EQ(parse_metrics_line(line), r);
  r.wacc.reset();
  EXPECT_EQ(parse_metrics_line(to_line(r)), r);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  torch::manual_seed(4);
  const auto spec = tiny();
  Recognizer model(spec, Alphabet::from_utf8("abc"));
  {
    // Make the batch-norm buffers non-trivial.
    model->train();
    torch::NoGradGuard no_grad;
    model->encoder->encode_visual(torch::rand({2, 1, 64, 64}));
  }
  Checkpoint ck;
  ck.kind = "recognizer";
  ck.task = PretextTask::kSorting;
  ck.pretrained = EncoderScope::kCnnRnn;
  ck.model = spec;
  ck.alphabet = Alphabet::from_utf8("abc");
  ck.config = {{"seed", 3}};
  ck.epoch = 17;
  ck.val_loss = 0.1234567890123;
  ck.tensors = module_state(*model);
  ck.tensors.emplace_back("extra.double", torch::randn({3}, torch::kDouble));
  ck.tensors.emplace_back("extra.long", torch::arange(5));

  const auto path = fs::temp_directory_path() / "scribe_ckpt_test" / "a.ckpt";
  save_checkpoint(ck, path);
  const auto back = load_checkpoint(path);
  EXPECT_EQ(back.kind, ck.kind);
  EXPECT_EQ(back.task, ck.task);
  EXPECT_EQ(back.pretrained, ck.pretrained);
  EXPECT_EQ(back.model, ck.model);
  EXPECT_EQ(back.alphabet, ck.alphabet);
  EXPECT_EQ(back.epoch, 17);
  EXPECT_EQ(back.val_loss, ck.val_loss);
  EXPECT_EQ(back.config, ck.config);
  ASSERT_EQ(back.tensors.size(), ck.tensors.size());
  for (std::size_t i = 0; i < ck.tensors.size(); ++i) {
    EXPECT_EQ(back.tensors[i].first, ck.tensors[i].first);
    EXPECT_EQ(back.tensors[i].second.scalar_type(), ck.tensors[i].second.scalar_type());
    EXPECT_TRUE(torch::equal(back.tensors[i].second, ck.tensors[i].second));
  }
  Recognizer other(spec, ck.alphabet);
  load_module_state(*other, back.tensors);
  EXPECT_EQ(state_checksum(*other), state_checksum(*model));
}

TEST(Checkpoint, RejectsForeignFiles) {
  const auto dir = fs::temp_directory_path() / "scribe_ckpt_test";
  fs::create_directories(dir);
  std::ofstream(dir / "junk.ckpt") << "definitely not a checkpoint";
  EXPECT_THROW(load_checkpoint(dir / "junk.ckpt"), DataError);
  EXPECT_THROW(load_checkpoint(dir / "absent.ckpt"), DataError);
}

TEST(Config, DefaultsResolvePerStage) {
  const auto pre = RunConfig().resolved("pretrain");
  EXPECT_DOUBLE_EQ(pre.get("train.learning_rate").get<double>(), 3e-4);
  const auto fin = RunConfig().resolved("finetune");
  EXPECT_DOUBLE_EQ(fin.get("train.learning_rate").get<double>(), 1e-4);
  EXPECT_EQ(fin.get("train.patience").get<int>(), 50);
  RunConfig small;
  small.set("train.fraction", "10");
  EXPECT_EQ(small.resolved("finetune").get("train.patience").get<int>(), 200);
  EXPECT_EQ(fin.train_config("finetune").batch_size, 64);
  EXPECT_DOUBLE_EQ(fin.train_config("finetune").clip_norm, 5.0);
  EXPECT_EQ(fin.get("model.width_divisor").get<int>(), 8);
}

TEST(Config, UnknownKeysAndBadTypesAreRejected) {
  EXPECT_THROW(RunConfig::from_json({{"trian", {{"max_epochs", 3}}}}), InvalidArgument);
  EXPECT_THROW(RunConfig::from_json({{"train", {{"max_epoch", 3}}}}), InvalidArgument);
  EXPECT_THROW(RunConfig::from_json({{"train", {{"max_epochs", "many"}}}}), InvalidArgument);
  RunConfig cfg;
  EXPECT_THROW(cfg.set("model.depth", "3"), InvalidArgument);
  EXPECT_THROW(cfg.set("train.batch_size", "lots"), InvalidArgument);
  cfg.set("model.decoder", "transformer");
  EXPECT_THROW(cfg.resolved("finetune"), InvalidArgument);
}

TEST(Config, SeedFallsBackToEnvironment) {
  ::setenv("SCRIBE_SEED", "42", 1);
  EXPECT_EQ(RunConfig().resolved("pretrain").seed(), 42u);
  RunConfig explicit_seed;
  explicit_seed.set("seed", "7");
  EXPECT_EQ(explicit_seed.resolved("pretrain").seed(), 7u);
  ::setenv("SCRIBE_SEED", "abc", 1);
  EXPECT_THROW(RunConfig().resolved("pretrain"), InvalidArgument);
  ::unsetenv("SCRIBE_SEED");
  EXPECT_EQ(RunConfig().resolved("pretrain").seed(), 0u);
}

TEST(Config, RunDirectoriesAreUnique) {
  const auto root = fs::temp_directory_path() / "scribe_rundir_test";
  fs::remove_all(root);
  const auto a = make_run_directory(root, "x");
  const auto b = make_run_directory(root, "x");
  EXPECT_NE(a, b);
  EXPECT_TRUE(fs::is_directory(a));
}

TEST(Heatmap, ShapeRangeAndBlankInput) {
  torch::manual_seed(1);
  Checkpoint ck;
  ck.kind = "pretext";
  ck.model = tiny();
  PretextModel model(ck.model, PretextTask::kFlip);
  ck.tensors = module_state(*model);
  const auto img = normalize_image(synth_word("ink", 2).raster);
  const auto heat = export_feature_heatmap(ck, img);
  EXPECT_EQ(heat.height(), img.height());
  EXPECT_EQ(heat.width(), img.width());
  float lo = 1, hi = 0;
  for (float v : heat.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GE(lo, 0.0f);
  EXPECT_LE(hi, 1.0f);
  EXPECT_GT(hi - lo, 0.5f);

  const auto blank = export_feature_heatmap(ck, ImageTensor(64, 150));
  lo = 1, hi = 0;
  for (float v : blank.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(hi - lo, 0.1f);

  const auto narrow = export_feature_heatmap(ck, ImageTensor(64, 20, 0.0f));
  EXPECT_EQ(narrow.width(), 20);
}

}  // namespace
}  // namespace scribe
