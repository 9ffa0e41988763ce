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

#include "scribe/trainer.hpp"

#include <chrono>
#include <cmath>

#include "scribe/augment.hpp"
#include "scribe/batch.hpp"
#include "scribe/errors.hpp"
#include "scribe/random.hpp"

namespace scribe {
namespace {

constexpr std::uint64_t kShuffleStream = 0x5eed0001;
constexpr std::uint64_t kSampleStream = 0x5eed0002;
constexpr std::uint64_t kValStream = 0x5eed0003;

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void setup_runtime(const TrainConfig& config) {
  if (config.threads > 0) torch::set_num_threads(config.threads);
  torch::manual_seed(config.seed);
}

std::vector<torch::Tensor> trainable(torch::nn::Module& module) {
  std::vector<torch::Tensor> out;
  for (auto& p : module.parameters()) {
    if (p.requires_grad()) out.push_back(p);
  }
  return out;
}

torch::optim::Adam make_optimizer(std::vector<torch::Tensor> params,
                                  const TrainConfig& c) {
  return torch::optim::Adam(
      std::move(params),
      torch::optim::AdamOptions(c.learning_rate).betas({c.beta1, c.beta2}).eps(c.eps));
}

void step(torch::optim::Adam& optimizer, const std::vector<torch::Tensor>& params,
          const torch::Tensor& loss, double clip_norm) {
  optimizer.zero_grad();
  loss.backward();
  if (clip_norm > 0) torch::nn::utils::clip_grad_norm_(params, clip_norm);
  optimizer.step();
}

std::vector<std::size_t> slice(const std::vector<std::size_t>& order, std::size_t start,
                               std::size_t count) {
  const auto end = std::min(order.size(), start + count);
  return {order.begin() + static_cast<std::ptrdiff_t>(start),
          order.begin() + static_cast<std::ptrdiff_t>(end)};
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

MetricsRecord record(const std::string& stage, int epoch, const std::string& split,
                     double loss, std::optional<double> wacc, const Clock& clock,
                     const nlohmann::ordered_json& tags) {
  MetricsRecord r;
  r.stage = stage;
  r.epoch = epoch;
  r.split = split;
  r.loss = loss;
  r.wacc = wacc;
  r.seconds = clock.seconds();
  r.tags = tags;
  return r;
}

void emit(TrainResult& result, const RecordSink& sink, MetricsRecord r) {
  if (sink) sink(r);
  result.records.push_back(std::move(r));
}

std::vector<PretextSample> pretext_batch(const ImageStore& store,
                                         const std::vector<std::size_t>& indices,
                                         PretextTask task, int pieces,
                                         std::uint64_t seed, bool augment) {
  std::vector<PretextSample> out;
  for (auto i : indices) {
    RandomSource rng(derive_seed(seed, i));
    const ImageTensor image =
        augment ? augment_pretrain(store.image(i), rng) : store.image(i);
    auto sample = make_pretext_sample(task, image, rng, CropMode::kRandom, pieces);
    if (sample) out.push_back(std::move(*sample));
  }
  return out;
}

std::pair<double, double> pretext_eval(PretextModel& model, const ImageStore& store,
                                       PretextTask task, int pieces,
                                       std::uint64_t seed, int batch_size) {
  torch::NoGradGuard no_grad;
  const bool was_training = model->is_training();
  model->eval();
  const auto order = iota_indices(store.size());
  double loss = 0.0;
  std::int64_t correct = 0, count = 0;
  const auto eval_seed = derive_seed(seed, kValStream);
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    auto samples = pretext_batch(store, slice(order, start, batch_size), task, pieces,
                                 eval_seed, false);
    if (samples.empty()) continue;
    auto r = model->forward(samples);
    loss += r.loss.item<double>() * static_cast<double>(r.count);
    correct += r.correct;
    count += r.count;
  }
  model->train(was_training);
  if (count == 0) throw DataError("no usable pretext samples in the evaluation set");
  return {loss / static_cast<double>(count),
          100.0 * static_cast<double>(correct) / static_cast<double>(count)};
}

EvalResult recognizer_eval(Recognizer& model, const ImageStore& store, int batch_size,
                           int max_len, bool decode) {
  torch::NoGradGuard no_grad;
  const bool was_training = model->is_training();
  model->eval();
  EvalResult out;
  std::vector<std::string> references;
  const auto order = iota_indices(store.size());
  double loss = 0.0;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    auto batch = store.batch(slice(order, start, batch_size));
    loss += model->forward(batch).loss.item<double>() * batch.size;
    if (decode) {
      auto pred = model->predict(batch, max_len);
      out.predictions.insert(out.predictions.end(), pred.begin(), pred.end());
      references.insert(references.end(), batch.transcripts.begin(),
                        batch.transcripts.end());
    }
  }
  model->train(was_training);
  out.loss = store.size() ? loss / static_cast<double>(store.size()) : 0.0;
  if (decode) out.wacc = word_accuracy(out.predictions, references);
  return out;
}

void set_frozen_mode(Recognizer& model, EncoderScope scope) {
  if (scope == EncoderScope::kNone) return;
  model->encoder->cnn->eval();
  if (scope == EncoderScope::kCnnRnn) model->encoder->rnn->eval();
}

std::uint64_t scope_checksum(const Recognizer& model, EncoderScope scope) {
  std::uint64_t h = 0;
  for (const auto& prefix : scope_prefixes(scope)) {
    h = mix_seed(h ^ state_checksum(*model, prefix));
  }
  return h;
}

nlohmann::json snapshot_of(const TrainConfig& train, const nlohmann::json& extra) {
  nlohmann::json j;
  j["train"] = train;
  j["run"] = extra;
  return j;
}

struct RecognizerRun {
  std::string stage;
  std::optional<Checkpoint> init;
  EncoderScope freeze = EncoderScope::kNone;
  nlohmann::ordered_json tags;
};

TrainResult run_recognizer(const RecognizerRun& run, const Manifest& train,
                           const Manifest& val, const Manifest* test,
                           const FinetuneOptions& options, const RecordSink& sink) {
  if (train.empty()) throw DataError("training manifest is empty");
  if (val.empty()) throw DataError("validation manifest is empty");
  const TrainConfig& cfg = options.train;
  cfg.validate();

  ModelSpec spec = options.model;
  spec.alphabet_size = static_cast<int>(train.alphabet().size());
  if (run.init) {
    check_alphabet(*run.init, train);
    spec.width_divisor = run.init->model.width_divisor;
    spec.rnn_hidden = run.init->model.rnn_hidden;
    spec.rnn_layers = run.init->model.rnn_layers;
  }
  spec.validate();
  const Manifest val_m = val.with_alphabet(train.alphabet());
  const ImageStore train_store(train);
  const ImageStore val_store(val_m);

  setup_runtime(cfg);
  Recognizer model(spec, train.alphabet());
  if (run.init) {
    const auto scope = run.init->kind == "recognizer" ? EncoderScope::kCnnRnn
                                                      : run.init->pretrained;
    std::size_t loaded = 0;
    for (const auto& prefix : scope_prefixes(scope)) {
      loaded += load_module_state(*model, run.init->tensors, prefix, prefix);
    }
    if (loaded == 0) throw DataError("checkpoint holds no encoder weights");
  }

  TrainResult result;
  result.frozen = run.freeze;
  for (const auto& prefix : scope_prefixes(run.freeze)) {
    for (auto& p : model->named_parameters(true)) {
      if (p.key().rfind(prefix, 0) == 0) p.value().set_requires_grad(false);
    }
  }
  result.frozen_checksum_before = scope_checksum(model, run.freeze);

  auto params = trainable(*model);
  auto optimizer = make_optimizer(params, cfg);
  EarlyStopping stopper(cfg.effective_patience());
  NamedTensors best_state;
  const Clock clock;
  const auto& alphabet = train.alphabet();

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    model->train();
    set_frozen_mode(model, run.freeze);
    const auto order =
        seeded_permutation(train_store.size(), derive_seed(cfg.seed, kShuffleStream, epoch));
    const auto sample_seed = derive_seed(cfg.seed, kSampleStream, epoch);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::vector<ImageTensor> images;
      std::vector<std::string> transcripts;
      for (auto i : slice(order, start, cfg.batch_size)) {
        RandomSource rng(derive_seed(sample_seed, i));
        images.push_back(cfg.augment ? augment_supervised(train_store.image(i), rng)
                                     : train_store.image(i));
        transcripts.push_back(train_store.transcript(i));
      }
      auto batch = make_batch(images, transcripts, alphabet);
      auto r = model->forward(batch);
      step(optimizer, params, r.loss, cfg.clip_norm);
      loss_sum += r.loss.item<double>() * batch.size;
    }
    std::optional<double> train_wacc;
    if (cfg.train_wacc) {
      train_wacc =
          recognizer_eval(model, train_store, cfg.batch_size, cfg.max_decode_len, true).wacc;
    }
    emit(result, sink,
         record(run.stage, epoch, "train", loss_sum / static_cast<double>(order.size()),
                train_wacc, clock, run.tags));

    auto v = recognizer_eval(model, val_store, cfg.batch_size, cfg.max_decode_len,
                             cfg.val_wacc);
    emit(result, sink,
         record(run.stage, epoch, "val", v.loss,
                cfg.val_wacc ? std::optional<double>(v.wacc) : std::nullopt, clock,
                run.tags));
    result.epochs_run = epoch;
    if (stopper.update(epoch, v.loss)) best_state = module_state(*model);
    if (stopper.should_stop(epoch)) break;
    if (cfg.target_train_wacc && train_wacc && *train_wacc >= *cfg.target_train_wacc) break;
  }
  result.frozen_checksum_after = scope_checksum(model, run.freeze);

  load_module_state(*model, best_state);
  result.best_epoch = stopper.best_epoch();
  result.best_val_loss = stopper.best_loss();

  if (test != nullptr) {
    const ImageStore test_store(test->with_alphabet(alphabet));
    auto t = recognizer_eval(model, test_store, cfg.batch_size, cfg.max_decode_len, true);
    result.test_wacc = t.wacc;
    emit(result, sink, record(run.stage, result.best_epoch, "test", t.loss, t.wacc,
                              clock, run.tags));
  }

  Checkpoint& ck = result.checkpoint;
  ck.kind = "recognizer";
  if (run.init) ck.task = run.init->task;
  ck.pretrained = EncoderScope::kCnnRnn;
  ck.model = spec;
  ck.alphabet = alphabet;
  ck.config = snapshot_of(cfg, options.snapshot);
  ck.epoch = result.best_epoch;
  ck.val_loss = result.best_val_loss;
  ck.tensors = std::move(best_state);
  return result;
}

}  // namespace

TrainConfig TrainConfig::pretraining() {
  TrainConfig c;
  c.stage = "pretrain";
  c.learning_rate = 3e-4;
  return c;
}

TrainConfig TrainConfig::finetuning() {
  TrainConfig c;
  c.stage = "finetune";
  c.learning_rate = 1e-4;
  return c;
}

int TrainConfig::effective_patience() const {
  if (patience) return *patience;
  return fraction < 100.0 ? 200 : 50;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw InvalidArgument("learning rate must be positive");
  if (max_epochs < 1) throw InvalidArgument("max epochs must be at least 1");
  if (patience && *patience < 1) throw InvalidArgument("patience must be at least 1");
  if (batch_size < 1) throw InvalidArgument("batch size must be at least 1");
  if (!(fraction > 0.0 && fraction <= 100.0)) {
    throw InvalidArgument("labeled fraction must lie in (0, 100]");
  }
  if (target_train_wacc && !train_wacc) {
    throw InvalidArgument("a training WAcc target needs train_wacc enabled");
  }
  if (max_decode_len < 1) throw InvalidArgument("max decode length must be positive");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && eps > 0)) {
    throw InvalidArgument("invalid Adam hyper-parameters");
  }
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"stage", c.stage},
                     {"learning_rate", c.learning_rate},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"eps", c.eps},
                     {"max_epochs", c.max_epochs},
                     {"patience", c.effective_patience()},
                     {"batch_size", c.batch_size},
                     {"clip_norm", c.clip_norm},
                     {"seed", c.seed},
                     {"fraction", c.fraction},
                     {"augment", c.augment},
                     {"train_wacc", c.train_wacc},
                     {"val_wacc", c.val_wacc},
                     {"max_decode_len", c.max_decode_len},
                     {"target_train_wacc", c.target_train_wacc ? nlohmann::json(*c.target_train_wacc)
                                                               : nlohmann::json()},
                     {"threads", c.threads}};
}

bool EarlyStopping::update(int epoch, double val_loss) {
  if (!seen_ || val_loss < best_loss_) {
    seen_ = true;
    best_epoch_ = epoch;
    best_loss_ = val_loss;
    return true;
  }
  return false;
}

std::vector<std::string> scope_prefixes(EncoderScope scope) {
  switch (scope) {
    case EncoderScope::kNone: return {};
    case EncoderScope::kCnn: return {"encoder.cnn."};
    case EncoderScope::kCnnRnn: return {"encoder.cnn.", "encoder.rnn."};
  }
  return {};
}

void check_alphabet(const Checkpoint& checkpoint, const Manifest& data) {
  if (checkpoint.alphabet.size() == 0) return;
  if (!(checkpoint.alphabet == data.alphabet())) {
    throw DataError("alphabet mismatch: checkpoint has '" +
                    checkpoint.alphabet.to_utf8() + "', data has '" +
                    data.alphabet().to_utf8() + "'");
  }
}

std::pair<double, double> evaluate_pretext(PretextModel& model, const Manifest& data,
                                           PretextTask task, int sorting_pieces,
                                           std::uint64_t seed, int batch_size) {
  const ImageStore store(data);
  return pretext_eval(model, store, task, sorting_pieces, seed, batch_size);
}

TrainResult pretrain(const Manifest& train, const Manifest& val,
                     const PretrainOptions& options, const RecordSink& sink) {
  if (train.empty()) throw DataError("training manifest is empty");
  if (val.empty()) throw DataError("validation manifest is empty");
  const TrainConfig& cfg = options.train;
  cfg.validate();
  options.model.validate();
  if (options.sorting_pieces != 0 &&
      (options.sorting_pieces < 2 || options.sorting_pieces > kMaxSortingPieces)) {
    throw InvalidArgument("sorting pieces must be 0 or in [2, 4]");
  }
  const ImageStore train_store(train);
  const ImageStore val_store(val);

  setup_runtime(cfg);
  PretextModel model(options.model, options.task);
  auto params = trainable(*model);
  auto optimizer = make_optimizer(params, cfg);
  EarlyStopping stopper(cfg.effective_patience());
  NamedTensors best_state;
  TrainResult result;
  const Clock clock;
  nlohmann::ordered_json tags;
  tags["task"] = task_name(options.task);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    model->train();
    const auto order =
        seeded_permutation(train_store.size(), derive_seed(cfg.seed, kShuffleStream, epoch));
    const auto sample_seed = derive_seed(cfg.seed, kSampleStream, epoch);
    double loss_sum = 0.0;
    std::int64_t correct = 0, count = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      auto samples = pretext_batch(train_store, slice(order, start, cfg.batch_size),
                                   options.task, options.sorting_pieces, sample_seed,
                                   cfg.augment);
      if (samples.empty()) continue;
      auto r = model->forward(samples);
      step(optimizer, params, r.loss, cfg.clip_norm);
      loss_sum += r.loss.item<double>() * static_cast<double>(r.count);
      correct += r.correct;
      count += r.count;
    }
    if (count == 0) throw DataError("no usable pretext samples in the training set");
    emit(result, sink,
         record("pretrain", epoch, "train", loss_sum / static_cast<double>(count),
                100.0 * static_cast<double>(correct) / static_cast<double>(count), clock,
                tags));
    const auto [val_loss, val_acc] = pretext_eval(model, val_store, options.task,
                                                  options.sorting_pieces, cfg.seed,
                                                  cfg.batch_size);
    emit(result, sink, record("pretrain", epoch, "val", val_loss, val_acc, clock, tags));
    result.epochs_run = epoch;
    if (stopper.update(epoch, val_loss)) best_state = module_state(*model);
    if (stopper.should_stop(epoch)) break;
  }

  result.best_epoch = stopper.best_epoch();
  result.best_val_loss = stopper.best_loss();
  Checkpoint& ck = result.checkpoint;
  ck.kind = "pretext";
  ck.task = options.task;
  ck.pretrained = pretrained_scope(options.task);
  ck.model = options.model;
  ck.alphabet = train.alphabet();
  ck.config = snapshot_of(cfg, options.snapshot);
  ck.epoch = result.best_epoch;
  ck.val_loss = result.best_val_loss;
  ck.tensors = std::move(best_state);
  return result;
}

TrainResult finetune(const std::optional<Checkpoint>& init, const Manifest& train,
                     const Manifest& val, const FinetuneOptions& options,
                     const Manifest* test, const RecordSink& sink) {
  options.train.validate();
  RecognizerRun run;
  run.stage = "finetune";
  run.init = init;
  run.tags["decoder"] = decoder_name(options.model.decoder);
  run.tags["fraction"] = options.train.fraction;
  run.tags["init"] = init && init->task ? task_name(*init->task)
                     : init             ? std::string("checkpoint")
                                        : std::string("random");
  const Manifest subset =
      split_fraction(train, SplitSpec{options.train.fraction, options.train.seed});
  return run_recognizer(run, subset, val, test, options, sink);
}

TrainResult probe(const Checkpoint& init, const Manifest& train, const Manifest& val,
                  const Manifest& test, const FinetuneOptions& options,
                  const RecordSink& sink) {
  RecognizerRun run;
  run.stage = "probe";
  run.init = init;
  run.freeze = options.freeze.value_or(init.pretrained);
  run.tags["decoder"] = decoder_name(options.model.decoder);
  run.tags["freeze"] = scope_name(run.freeze);
  run.tags["init"] = init.task ? task_name(*init.task) : std::string("checkpoint");
  FinetuneOptions full = options;
  full.train.fraction = 100.0;
  return run_recognizer(run, train, val, &test, full, sink);
}

Recognizer recognizer_from_checkpoint(const Checkpoint& checkpoint) {
  if (checkpoint.kind != "recognizer") {
    throw DataError("checkpoint is a " + checkpoint.kind +
                    " checkpoint, not a recognizer");
  }
  Recognizer model(checkpoint.model, checkpoint.alphabet);
  load_module_state(*model, checkpoint.tensors);
  model->eval();
  return model;
}

EvalResult evaluate_recognizer(Recognizer& model, const Manifest& data, int batch_size,
                               int max_decode_len, bool decode) {
  if (data.empty()) throw DataError("evaluation manifest is empty");
  const ImageStore store(data.with_alphabet(model->alphabet()));
  return recognizer_eval(model, store, batch_size, max_decode_len, decode);
}

}  // namespace scribe
