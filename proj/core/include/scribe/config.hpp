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
#include <string_view>

#include <json.hpp>

#include "scribe/heads.hpp"
#include "scribe/model_spec.hpp"
#include "scribe/trainer.hpp"

namespace scribe {

// Run configuration: a JSON document with the sections corpus, augment,
// model, task, train, eval, seed and output. Null entries mean "resolve from
// context" (stage, model scale, SCRIBE_SEED).
class RunConfig {
 public:
  using Json = nlohmann::ordered_json;

  RunConfig();  // all defaults

  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_json(const Json& document);

  // Merges `document` into the current values. Unknown keys and type
  // mismatches throw InvalidArgument naming the dotted key.
  void merge(const Json& document);
  // Sets a dotted key ("train.max_epochs") from a command-line string; the
  // text is parsed as JSON when possible, otherwise taken as a string.
  void set(std::string_view dotted_key, std::string_view text);
  void set(std::string_view dotted_key, const Json& value);
  void set(std::string_view dotted_key, const char* text) {
    set(dotted_key, std::string_view(text));
  }
  const Json& get(std::string_view dotted_key) const;

  // Fills every null with its effective value for `stage` (pretrain,
  // finetune, probe, eval, report) and validates the result.
  RunConfig resolved(std::string_view stage) const;

  const Json& values() const { return values_; }
  std::string dump() const { return values_.dump(2); }

  std::uint64_t seed() const;
  ModelSpec model_spec(int alphabet_size = 0) const;
  TrainConfig train_config(std::string_view stage) const;
  std::optional<EncoderScope> freeze_override() const;

 private:
  Json values_;
};

// SCRIBE_SEED if set and numeric; InvalidArgument if set but malformed.
std::optional<std::uint64_t> seed_from_environment();

// Creates <root>/<label>-<YYYYmmdd-HHMMSS>[-k] and returns it.
std::filesystem::path make_run_directory(const std::filesystem::path& root,
                                         std::string_view label);

}  // namespace scribe
