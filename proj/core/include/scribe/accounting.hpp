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
#include <string>
#include <vector>

#include "scribe/model_spec.hpp"

namespace scribe {

enum class CostGroup { kConv, kRnn, kDecoder };

struct LayerCost {
  std::string name;
  CostGroup group = CostGroup::kConv;
  std::int64_t params = 0;
  std::int64_t macs = 0;  // multiply-accumulates for one image
};

struct CostReport {
  int width = 0;
  std::vector<LayerCost> layers;

  std::int64_t params() const;
  std::int64_t macs(CostGroup group) const;
  std::int64_t total_macs() const;
  // FLOPs are counted as two per multiply-accumulate.
  std::int64_t flops(CostGroup group) const { return 2 * macs(group); }
  std::int64_t total_flops() const { return 2 * total_macs(); }
};

// Analytic parameter and multiply-accumulate counts of the recognizer for a
// 64 x width input. Only convolutions, recurrent and linear/attention products
// are costed; normalization, activations and pooling are ignored. The TD cost
// assumes `decoded_tokens` autoregressive steps.
CostReport count_params_flops(const ModelSpec& spec, int width,
                              int decoded_tokens = 10);

}  // namespace scribe
