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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

#include "scribe/alphabet.hpp"
#include "scribe/heads.hpp"
#include "scribe/model_spec.hpp"
#include "scribe/pretext.hpp"

namespace scribe {

using NamedTensors = std::vector<std::pair<std::string, torch::Tensor>>;

// Persisted model state.
//
// File layout, all integers little-endian:
//   8 bytes   magic "SCRIBECK"
//   u32       format version (1)
//   u64       header length, then that many bytes of UTF-8 JSON holding
//             kind, task, pretrained scope, model spec, alphabet, config
//             snapshot, epoch and validation loss
//   u64       tensor count, then per tensor:
//     u32 name length, name bytes, u8 dtype (0 f32, 1 f64, 2 i64),
//     u32 rank, rank x i64 dims, raw little-endian element data
struct Checkpoint {
  std::string kind;  // "pretext" or "recognizer"
  std::optional<PretextTask> task;
  EncoderScope pretrained = EncoderScope::kNone;
  ModelSpec model;
  Alphabet alphabet;
  nlohmann::json config = nlohmann::json::object();
  int epoch = 0;
  double val_loss = 0.0;
  NamedTensors tensors;  // parameters and buffers, module naming
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Deep copies of every parameter and buffer.
NamedTensors module_state(const torch::nn::Module& module);

// Copies tensors whose names start with `prefix` into the module (names are
// matched after stripping `prefix` and prepending `target_prefix`). Returns
// the number copied. Shape mismatches throw DataError.
std::size_t load_module_state(torch::nn::Module& module, const NamedTensors& state,
                              const std::string& prefix = "",
                              const std::string& target_prefix = "");

// Order-sensitive FNV-1a hash over raw bytes of the selected tensors.
std::uint64_t state_checksum(const torch::nn::Module& module,
                             const std::string& prefix = "");

}  // namespace scribe
