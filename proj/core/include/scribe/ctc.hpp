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
#include <vector>

#include <torch/torch.h>

namespace scribe {

// Connectionist temporal classification over class space {0 = blank, 1..C-1}.

// -log P(target | log_probs) for one sequence by the forward recursion in log
// space. `log_probs` is row-major frames x classes, already log-normalized.
// Returns +infinity when no alignment of `target` fits in the frames.
// When `grad` is non-null it receives d(-log P)/d(log_probs), same layout
// (all zeros for an infeasible target).
double ctc_sequence_loss(std::span<const double> log_probs, std::int64_t frames,
                         std::int64_t classes,
                         std::span<const std::int64_t> target,
                         std::vector<double>* grad = nullptr);

// Frames an alignment of `target` needs: its length plus one blank between
// every pair of equal neighbours.
std::int64_t ctc_min_frames(std::span<const std::int64_t> target);

enum class CtcReduction { kSum, kNone };

// logits: [T, B, C] unnormalized scores. Targets are class ids (no blanks).
// input_lengths[b] <= T frames of sample b take part; later frames receive no
// gradient. Result is the batch sum (scalar) or per-sample losses [B].
// Infeasible samples contribute +infinity and a zero gradient.
torch::Tensor ctc_loss(const torch::Tensor& logits,
                       const std::vector<std::vector<std::int64_t>>& targets,
                       const std::vector<std::int64_t>& input_lengths,
                       CtcReduction reduction = CtcReduction::kSum);

// Merge adjacent repeats, then drop blanks.
std::vector<std::int64_t> ctc_collapse(std::span<const std::int64_t> frame_classes);

// Per-frame argmax of logits [T, C] over the first `length` frames, collapsed.
std::vector<std::int64_t> ctc_greedy_decode(const torch::Tensor& logits,
                                            std::int64_t length);

}  // namespace scribe
