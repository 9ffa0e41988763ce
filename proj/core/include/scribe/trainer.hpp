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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

#include "scribe/checkpoint.hpp"
#include "scribe/heads.hpp"
#include "scribe/manifest.hpp"
#include "scribe/metrics.hpp"
#include "scribe/model_spec.hpp"
#include "scribe/pretext.hpp"

namespace scribe {

struct TrainConfig {
  std::string stage = "pretrain";  // pretrain | finetune | probe
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int max_epochs = 1000;
  std::optional<int> patience;  // unset: 50, or 200 below 100% labeled data
  int batch_size = 64;
  double clip_norm = 5.0;       // global gradient norm; <= 0 disables
  std::uint64_t seed = 0;
  double fraction = 100.0;      // labeled percentage for finetuning
  bool augment = true;
  bool train_wacc = false;      // decode the clean training set every epoch
  bool val_wacc = true;         // decode the validation set every epoch
  int max_decode_len = 32;
  // Stop once the measured training WAcc reaches this value (needs train_wacc).
  std::optional<double> target_train_wacc;
  int threads = 1;              // intra-op threads; <= 0 keeps the default

  static TrainConfig pretraining();
  static TrainConfig finetuning();

  int effective_patience() const;
  void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& config);

using RecordSink = std::function<void(const MetricsRecord&)>;

struct TrainResult {
  Checkpoint checkpoint;  // best validation epoch
  std::vector<MetricsRecord> records;
  int best_epoch = 0;
  int epochs_run = 0;
  double best_val_loss = 0.0;
  EncoderScope frozen = EncoderScope::kNone;
  std::uint64_t frozen_checksum_before = 0;
  std::uint64_t frozen_checksum_after = 0;
  std::optional<double> test_wacc;
};

// Early-stopping bookkeeping: strict improvement resets the counter, ties
// keep the earlier epoch.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Returns true when `epoch` became the new best.
  bool update(int epoch, double val_loss);
  bool should_stop(int epoch) const { return epoch - best_epoch_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }
  int patience() const { return patience_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  double best_loss_ = 0.0;
  bool seen_ = false;
};

struct PretrainOptions {
  PretextTask task = PretextTask::kFlip;
  ModelSpec model;
  TrainConfig train = TrainConfig::pretraining();
  int sorting_pieces = 0;  // 0 draws M from {2, 3, 4} per sample
  nlohmann::json snapshot = nlohmann::json::object();
};

TrainResult pretrain(const Manifest& train, const Manifest& val,
                     const PretrainOptions& options, const RecordSink& sink = {});

// Pretext loss and accuracy (percent) on a fixed, seeded, unaugmented view.
std::pair<double, double> evaluate_pretext(PretextModel& model, const Manifest& data,
                                           PretextTask task, int sorting_pieces,
                                           std::uint64_t seed, int batch_size);

struct FinetuneOptions {
  ModelSpec model;  // decoder and alphabet size are set from the manifest
  TrainConfig train = TrainConfig::finetuning();
  // Probe only: override of the frozen sub-network (default: pretrained one).
  std::optional<EncoderScope> freeze;
  nlohmann::json snapshot = nlohmann::json::object();
};

// Trains every layer on split_fraction(train, fraction). `init` supplies the
// encoder weights it was pretrained on; without it the run is the random-init
// control. Throws DataError on an alphabet mismatch.
TrainResult finetune(const std::optional<Checkpoint>& init, const Manifest& train,
                     const Manifest& val, const FinetuneOptions& options,
                     const Manifest* test = nullptr, const RecordSink& sink = {});

// Freezes the pretrained sub-network of `init` and trains the rest on the
// whole training manifest; reports test WAcc.
TrainResult probe(const Checkpoint& init, const Manifest& train, const Manifest& val,
                  const Manifest& test, const FinetuneOptions& options,
                  const RecordSink& sink = {});

struct EvalResult {
  double loss = 0.0;
  double wacc = 0.0;
  std::vector<std::string> predictions;
};

Recognizer recognizer_from_checkpoint(const Checkpoint& checkpoint);
EvalResult evaluate_recognizer(Recognizer& model, const Manifest& data, int batch_size,
                               int max_decode_len = 32, bool decode = true);

// Validates that `data` fits the alphabet stored in `checkpoint`.
void check_alphabet(const Checkpoint& checkpoint, const Manifest& data);

// Prefix of the encoder parameters covered by a scope ("" for none).
std::vector<std::string> scope_prefixes(EncoderScope scope);

}  // namespace scribe
