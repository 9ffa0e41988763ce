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

#include "scribe/heads.hpp"

#include <algorithm>
#include <cmath>

#include "scribe/ctc.hpp"
#include "scribe/errors.hpp"

namespace scribe {
namespace nn = torch::nn;

ClassifierHeadImpl::ClassifierHeadImpl(int channels, int classes) {
  linear = register_module("linear", nn::Linear(channels, classes));
}

torch::Tensor ClassifierHeadImpl::forward(const torch::Tensor& features) {
  return linear(features.mean({2, 3}));
}

JigsawHeadImpl::JigsawHeadImpl(int channels, int hidden, int classes, int pieces)
    : pieces_(pieces), input_dim_(channels * pieces) {
  fc1 = register_module("fc1", nn::Linear(input_dim_, hidden));
  fc2 = register_module("fc2", nn::Linear(hidden, classes));
}

torch::Tensor JigsawHeadImpl::forward(const torch::Tensor& features) {
  auto pooled = features.mean({2, 3});  // [B * pieces, C]
  auto joined = pooled.reshape({-1, input_dim_});
  return fc2(torch::relu(fc1(joined)));
}

std::string scope_name(EncoderScope scope) {
  switch (scope) {
    case EncoderScope::kNone: return "none";
    case EncoderScope::kCnn: return "cnn";
    case EncoderScope::kCnnRnn: return "cnn+rnn";
  }
  return "?";
}

EncoderScope parse_scope(std::string_view name) {
  if (name == "none") return EncoderScope::kNone;
  if (name == "cnn") return EncoderScope::kCnn;
  if (name == "cnn+rnn") return EncoderScope::kCnnRnn;
  throw InvalidArgument("unknown freeze scope '" + std::string(name) +
                        "' (expected none, cnn or cnn+rnn)");
}

EncoderScope pretrained_scope(PretextTask task) {
  return task == PretextTask::kSorting ? EncoderScope::kCnnRnn
                                       : EncoderScope::kCnn;
}

TokenLayout sorting_layout() {
  return TokenLayout{kMaxSortingPieces + 3, kMaxSortingPieces,
                     kMaxSortingPieces + 1, kMaxSortingPieces + 2};
}

PretextModelImpl::PretextModelImpl(const ModelSpec& spec, PretextTask task)
    : task_(task) {
  encoder = register_module("encoder", Encoder(spec));
  const int channels = spec.feature_channels();
  switch (task) {
    case PretextTask::kRotation:
    case PretextTask::kFlip:
      classifier = register_module(
          "classifier", ClassifierHead(channels, task_classes(task)));
      break;
    case PretextTask::kJigsaw:
      jigsaw = register_module(
          "jigsaw", JigsawHead(channels, spec.jigsaw_hidden,
                               task_classes(task), kJigsawPieces));
      break;
    case PretextTask::kSorting:
      sorter = register_module(
          "sorter", TransformerDecoder(sorting_layout(), spec.sequence_dim(),
                                       spec.td_hidden, spec.td_heads,
                                       spec.td_ffn, spec.td_max_len));
      break;
  }
}

namespace {

void check_task(std::span<const PretextSample> samples, PretextTask task) {
  if (samples.empty()) throw InvalidArgument("empty pretext batch");
  for (const auto& s : samples) {
    if (s.task != task) {
      throw InvalidArgument("pretext sample for task " + task_name(s.task) +
                            " fed to a " + task_name(task) + " head");
    }
  }
}

struct SortingBatch {
  torch::Tensor input;
  std::vector<int> widths;
  TeacherForcing tf;
};

SortingBatch sorting_batch(std::span<const PretextSample> samples) {
  std::vector<ImageTensor> images;
  std::vector<std::string> dummy(samples.size());
  std::vector<std::vector<std::int64_t>> targets;
  for (const auto& s : samples) {
    images.push_back(s.image);
    targets.emplace_back(s.order_target.begin(), s.order_target.end());
  }
  Alphabet none;
  Batch b;
  b.size = static_cast<int>(images.size());
  b.height = images.front().height();
  for (const auto& img : images) b.max_width = std::max(b.max_width, img.width());
  const std::size_t plane = static_cast<std::size_t>(b.height) * b.max_width;
  b.pixels.assign(plane * images.size(), kBackground);
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (int r = 0; r < images[i].height(); ++r) {
      for (int c = 0; c < images[i].width(); ++c) {
        b.pixels[i * plane + static_cast<std::size_t>(r) * b.max_width + c] =
            images[i].at(r, c);
      }
    }
    b.widths.push_back(images[i].width());
  }
  return {to_input(b), b.widths, teacher_forcing(targets, sorting_layout())};
}

}  // namespace

torch::Tensor PretextModelImpl::logits(std::span<const PretextSample> samples) {
  check_task(samples, task_);
  switch (task_) {
    case PretextTask::kRotation:
    case PretextTask::kFlip: {
      std::vector<ImageTensor> images;
      for (const auto& s : samples) images.push_back(s.image);
      return classifier(encoder->encode_visual(to_input(images)));
    }
    case PretextTask::kJigsaw: {
      std::vector<ImageTensor> patches;
      for (const auto& s : samples) {
        patches.insert(patches.end(), s.patches.begin(), s.patches.end());
      }
      return jigsaw(encoder->encode_visual(to_input(patches)));
    }
    case PretextTask::kSorting: {
      auto sb = sorting_batch(samples);
      auto rep = encoder->forward(sb.input, sb.widths);
      return sorter(rep.frames, rep.lengths, sb.tf.input);
    }
  }
  throw InvalidArgument("unknown pretext task");
}

StepResult PretextModelImpl::forward(std::span<const PretextSample> samples) {
  StepResult result;
  result.count = static_cast<std::int64_t>(samples.size());
  if (task_ == PretextTask::kSorting) {
    check_task(samples, task_);
    auto sb = sorting_batch(samples);
    auto rep = encoder->forward(sb.input, sb.widths);
    auto out = sorter(rep.frames, rep.lengths, sb.tf.input);
    const auto layout = sorting_layout();
    result.loss = token_cross_entropy(out, sb.tf.target, layout);
    // A sample counts as solved when every teacher-forced step is right.
    auto pred = out.argmax(-1);
    auto ok = (pred == sb.tf.target) | (sb.tf.target == layout.pad);
    result.correct = ok.all(1).sum().item<std::int64_t>();
    return result;
  }
  auto out = logits(samples);
  std::vector<std::int64_t> labels;
  for (const auto& s : samples) labels.push_back(s.class_label);
  auto target = torch::tensor(labels, torch::kLong);
  result.loss = nn::functional::cross_entropy(out, target);
  result.correct = (out.argmax(1) == target).sum().item<std::int64_t>();
  return result;
}

RecognizerImpl::RecognizerImpl(const ModelSpec& spec, Alphabet alphabet)
    : spec_(spec), alphabet_(std::move(alphabet)) {
  if (static_cast<std::size_t>(spec.alphabet_size) != alphabet_.size()) {
    throw InvalidArgument("model alphabet size does not match the alphabet");
  }
  encoder = register_module("encoder", Encoder(spec));
  if (spec.decoder == DecoderKind::kCtc) {
    ctc = register_module("ctc", nn::Linear(spec.sequence_dim(), spec.ctc_classes()));
  } else {
    td = register_module("td", TransformerDecoder(td_layout(), spec.sequence_dim(),
                                                  spec.td_hidden, spec.td_heads,
                                                  spec.td_ffn, spec.td_max_len));
  }
}

TokenLayout RecognizerImpl::td_layout() const {
  return TokenLayout{alphabet_.token_vocabulary(), alphabet_.sos(),
                     alphabet_.eos(), alphabet_.pad()};
}

torch::Tensor RecognizerImpl::ctc_logits(const Representation& rep) {
  return ctc(rep.frames);
}

StepResult RecognizerImpl::forward(const Batch& batch) {
  StepResult result;
  result.count = batch.size;
  auto rep = encoder(to_input(batch), batch.widths);
  if (spec_.decoder == DecoderKind::kCtc) {
    std::vector<std::vector<std::int64_t>> targets;
    for (const auto& t : batch.targets) {
      std::vector<std::int64_t> classes;
      for (auto id : t) classes.push_back(Alphabet::ctc_class(id));
      targets.push_back(std::move(classes));
    }
    auto losses = ctc_loss(ctc_logits(rep), targets, rep.lengths, CtcReduction::kNone);
    auto finite = torch::isfinite(losses);
    const auto n = finite.sum().item<std::int64_t>();
    result.loss = n > 0 ? losses.masked_select(finite).sum() / static_cast<double>(n)
                        : (losses * 0).nan_to_num(0.0, 0.0, 0.0).sum();
    return result;
  }
  auto tf = teacher_forcing(batch.targets, td_layout());
  auto logits = td(rep.frames, rep.lengths, tf.input);
  result.loss = token_cross_entropy(logits, tf.target, td_layout());
  return result;
}

std::vector<std::string> RecognizerImpl::predict(const Batch& batch, int max_len) {
  torch::NoGradGuard no_grad;
  auto rep = encoder(to_input(batch), batch.widths);
  std::vector<std::string> out;
  if (spec_.decoder == DecoderKind::kCtc) {
    auto logits = ctc_logits(rep);
    for (int b = 0; b < batch.size; ++b) {
      auto classes = ctc_greedy_decode(logits.select(1, b), rep.lengths[b]);
      std::vector<std::int64_t> ids;
      for (auto c : classes) ids.push_back(Alphabet::ctc_char(c));
      out.push_back(alphabet_.decode(ids));
    }
    return out;
  }
  auto seqs = td_generate(td, rep.frames, rep.lengths, max_len);
  for (auto& s : seqs) {
    std::vector<std::int64_t> ids;
    for (auto id : s) {
      if (id >= 0 && id < static_cast<std::int64_t>(alphabet_.size())) ids.push_back(id);
    }
    out.push_back(alphabet_.decode(ids));
  }
  return out;
}

std::int64_t count_parameters(torch::nn::Module& module) {
  std::int64_t n = 0;
  for (const auto& p : module.parameters()) n += p.numel();
  return n;
}

}  // namespace scribe
