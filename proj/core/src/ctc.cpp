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

#include "scribe/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scribe/errors.hpp"

namespace scribe {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

class CtcFunction : public torch::autograd::Function<CtcFunction> {
 public:
  static torch::Tensor forward(
      torch::autograd::AutogradContext* ctx, torch::Tensor log_probs,
      const std::vector<std::vector<std::int64_t>>& targets,
      const std::vector<std::int64_t>& input_lengths) {
    const auto frames = log_probs.size(0);
    const auto batch = log_probs.size(1);
    const auto classes = log_probs.size(2);
    // [B, T, C] contiguous double copy for the recursions.
    auto lp = log_probs.detach().to(torch::kDouble).permute({1, 0, 2}).contiguous();
    auto grad = torch::zeros({batch, frames, classes}, lp.options());
    auto losses = torch::zeros({batch}, lp.options());
    const double* lp_data = lp.data_ptr<double>();
    double* grad_data = grad.data_ptr<double>();
    std::vector<double> g;
    for (std::int64_t b = 0; b < batch; ++b) {
      const std::int64_t t_b = input_lengths[b];
      std::span<const double> rows(lp_data + b * frames * classes,
                                   static_cast<std::size_t>(t_b * classes));
      losses[b] = ctc_sequence_loss(rows, t_b, classes, targets[b], &g);
      std::copy(g.begin(), g.end(), grad_data + b * frames * classes);
    }
    ctx->save_for_backward({grad.permute({1, 0, 2}).to(log_probs.scalar_type())});
    return losses.to(log_probs.scalar_type());
  }

  static torch::autograd::variable_list backward(
      torch::autograd::AutogradContext* ctx,
      torch::autograd::variable_list grad_outputs) {
    auto grad = ctx->get_saved_variables()[0];
    // grad_outputs[0]: [B]; broadcast over frames and classes.
    auto scale = grad_outputs[0].view({1, -1, 1});
    return {grad * scale, torch::Tensor(), torch::Tensor()};
  }
};

}  // namespace

std::int64_t ctc_min_frames(std::span<const std::int64_t> target) {
  std::int64_t need = static_cast<std::int64_t>(target.size());
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++need;
  }
  return need;
}

double ctc_sequence_loss(std::span<const double> log_probs, std::int64_t frames,
                         std::int64_t classes,
                         std::span<const std::int64_t> target,
                         std::vector<double>* grad) {
  if (static_cast<std::int64_t>(log_probs.size()) != frames * classes) {
    throw InvalidArgument("ctc log-prob buffer does not match frames x classes");
  }
  for (auto c : target) {
    if (c <= 0 || c >= classes) {
      throw InvalidArgument("ctc target class out of range (blank or too large)");
    }
  }
  if (grad) grad->assign(static_cast<std::size_t>(frames * classes), 0.0);
  const auto len = static_cast<std::int64_t>(target.size());
  if (frames < 1 || ctc_min_frames(target) > frames) {
    return std::numeric_limits<double>::infinity();
  }

  // Blank-extended label sequence: blank, l1, blank, l2, ..., blank.
  const std::int64_t states = 2 * len + 1;
  auto label = [&](std::int64_t s) { return s % 2 == 0 ? 0 : target[s / 2]; };
  auto can_skip = [&](std::int64_t s) {
    return s >= 2 && label(s) != 0 && label(s) != label(s - 2);
  };
  auto y = [&](std::int64_t t, std::int64_t c) { return log_probs[t * classes + c]; };

  std::vector<double> alpha(static_cast<std::size_t>(frames * states), kNegInf);
  auto A = [&](std::int64_t t, std::int64_t s) -> double& {
    return alpha[static_cast<std::size_t>(t * states + s)];
  };
  A(0, 0) = y(0, 0);
  if (states > 1) A(0, 1) = y(0, label(1));
  for (std::int64_t t = 1; t < frames; ++t) {
    for (std::int64_t s = 0; s < states; ++s) {
      double acc = A(t - 1, s);
      if (s >= 1) acc = log_add(acc, A(t - 1, s - 1));
      if (can_skip(s)) acc = log_add(acc, A(t - 1, s - 2));
      if (acc != kNegInf) A(t, s) = acc + y(t, label(s));
    }
  }
  double log_p = A(frames - 1, states - 1);
  if (states > 1) log_p = log_add(log_p, A(frames - 1, states - 2));
  if (log_p == kNegInf) return std::numeric_limits<double>::infinity();
  if (!grad) return -log_p;

  // beta(t, s): log-probability of completing the target after time t given
  // state s at t (emission at t excluded).
  std::vector<double> beta(static_cast<std::size_t>(frames * states), kNegInf);
  auto B = [&](std::int64_t t, std::int64_t s) -> double& {
    return beta[static_cast<std::size_t>(t * states + s)];
  };
  B(frames - 1, states - 1) = 0.0;
  if (states > 1) B(frames - 1, states - 2) = 0.0;
  for (std::int64_t t = frames - 2; t >= 0; --t) {
    for (std::int64_t s = 0; s < states; ++s) {
      double acc = B(t + 1, s) + y(t + 1, label(s));
      if (s + 1 < states) acc = log_add(acc, B(t + 1, s + 1) + y(t + 1, label(s + 1)));
      if (s + 2 < states && can_skip(s + 2)) {
        acc = log_add(acc, B(t + 1, s + 2) + y(t + 1, label(s + 2)));
      }
      B(t, s) = acc;
    }
  }

  // d(-log P)/d(log y_t(k)) = -sum_{s: label(s)=k} alpha_t(s) beta_t(s) / P
  std::vector<double> occupancy(static_cast<std::size_t>(classes));
  for (std::int64_t t = 0; t < frames; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), kNegInf);
    for (std::int64_t s = 0; s < states; ++s) {
      const auto k = static_cast<std::size_t>(label(s));
      occupancy[k] = log_add(occupancy[k], A(t, s) + B(t, s));
    }
    for (std::int64_t k = 0; k < classes; ++k) {
      const double o = occupancy[static_cast<std::size_t>(k)];
      (*grad)[static_cast<std::size_t>(t * classes + k)] =
          o == kNegInf ? 0.0 : -std::exp(o - log_p);
    }
  }
  return -log_p;
}

torch::Tensor ctc_loss(const torch::Tensor& logits,
                       const std::vector<std::vector<std::int64_t>>& targets,
                       const std::vector<std::int64_t>& input_lengths,
                       CtcReduction reduction) {
  if (logits.dim() != 3) throw InvalidArgument("ctc logits must be [T, B, C]");
  const auto frames = logits.size(0);
  const auto batch = logits.size(1);
  if (static_cast<std::int64_t>(targets.size()) != batch ||
      static_cast<std::int64_t>(input_lengths.size()) != batch) {
    throw InvalidArgument("ctc targets / lengths do not match the batch size");
  }
  for (auto t : input_lengths) {
    if (t < 0 || t > frames) throw InvalidArgument("ctc input length out of range");
  }
  auto log_probs = torch::log_softmax(logits, 2);
  auto losses = CtcFunction::apply(log_probs, targets, input_lengths);
  return reduction == CtcReduction::kSum ? losses.sum() : losses;
}

std::vector<std::int64_t> ctc_collapse(std::span<const std::int64_t> frame_classes) {
  std::vector<std::int64_t> out;
  std::int64_t prev = -1;
  for (auto c : frame_classes) {
    if (c != prev && c != 0) out.push_back(c);
    prev = c;
  }
  return out;
}

std::vector<std::int64_t> ctc_greedy_decode(const torch::Tensor& logits,
                                            std::int64_t length) {
  if (logits.dim() != 2) throw InvalidArgument("greedy decode expects [T, C]");
  length = std::min<std::int64_t>(length, logits.size(0));
  if (length <= 0) return {};
  auto best = logits.slice(0, 0, length).argmax(1).to(torch::kLong).contiguous();
  std::span<const std::int64_t> frames(best.data_ptr<std::int64_t>(),
                                       static_cast<std::size_t>(length));
  return ctc_collapse(frames);
}

}  // namespace scribe
