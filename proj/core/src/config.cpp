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

#include "scribe/config.hpp"

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "scribe/errors.hpp"
#include "scribe/pretext.hpp"

namespace scribe {
namespace {

using Json = nlohmann::ordered_json;

enum class Kind { kString, kNumber, kInteger, kBool };

struct Field {
  const char* key;
  Kind kind;
  bool nullable;
  Json value;
};

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      {"corpus.train", Kind::kString, false, ""},
      {"corpus.val", Kind::kString, false, ""},
      {"corpus.test", Kind::kString, false, ""},
      {"augment.enabled", Kind::kBool, false, true},
      {"model.scale", Kind::kString, false, "desk"},
      {"model.decoder", Kind::kString, false, "ctc"},
      {"model.width_divisor", Kind::kInteger, true, nullptr},
      {"model.rnn_hidden", Kind::kInteger, true, nullptr},
      {"model.rnn_layers", Kind::kInteger, true, nullptr},
      {"model.td_hidden", Kind::kInteger, true, nullptr},
      {"model.td_heads", Kind::kInteger, true, nullptr},
      {"model.td_ffn", Kind::kInteger, true, nullptr},
      {"model.td_max_len", Kind::kInteger, true, nullptr},
      {"model.jigsaw_hidden", Kind::kInteger, true, nullptr},
      {"task.name", Kind::kString, false, ""},
      {"task.sorting_pieces", Kind::kInteger, false, 0},
      {"train.learning_rate", Kind::kNumber, true, nullptr},
      {"train.max_epochs", Kind::kInteger, false, 1000},
      {"train.patience", Kind::kInteger, true, nullptr},
      {"train.batch_size", Kind::kInteger, false, 64},
      {"train.clip_norm", Kind::kNumber, false, 5.0},
      {"train.fraction", Kind::kNumber, false, 100.0},
      {"train.train_wacc", Kind::kBool, false, false},
      {"train.val_wacc", Kind::kBool, false, true},
      {"train.target_train_wacc", Kind::kNumber, true, nullptr},
      {"train.threads", Kind::kInteger, false, 1},
      {"eval.checkpoint", Kind::kString, false, ""},
      {"eval.freeze", Kind::kString, false, "auto"},
      {"eval.max_decode_len", Kind::kInteger, false, 32},
      {"seed", Kind::kInteger, true, nullptr},
      {"output", Kind::kString, false, "runs"},
  };
  return fields;
}

std::vector<std::string> split_key(std::string_view dotted) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    parts.emplace_back(dotted.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

const Field* find_field(std::string_view dotted) {
  for (const auto& f : schema()) {
    if (dotted == f.key) return &f;
  }
  return nullptr;
}

bool is_section(std::string_view dotted) {
  const std::string prefix = std::string(dotted) + ".";
  for (const auto& f : schema()) {
    if (std::string_view(f.key).substr(0, prefix.size()) == prefix) return true;
  }
  return false;
}

bool matches(const Field& f, const Json& v) {
  if (v.is_null()) return f.nullable;
  switch (f.kind) {
    case Kind::kString: return v.is_string();
    case Kind::kNumber: return v.is_number();
    case Kind::kInteger:
      return v.is_number_integer() ||
             (v.is_number_float() && v.get<double>() == static_cast<std::int64_t>(v.get<double>()));
    case Kind::kBool: return v.is_boolean();
  }
  return false;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::kString: return "a string";
    case Kind::kNumber: return "a number";
    case Kind::kInteger: return "an integer";
    case Kind::kBool: return "a boolean";
  }
  return "?";
}

Json* locate(Json& root, std::string_view dotted) {
  Json* node = &root;
  for (const auto& part : split_key(dotted)) node = &(*node)[part];
  return node;
}

const Json& lookup(const Json& root, std::string_view dotted) {
  const Json* node = &root;
  for (const auto& part : split_key(dotted)) {
    if (!node->is_object() || !node->contains(part)) {
      throw InvalidArgument("unknown config key '" + std::string(dotted) + "'");
    }
    node = &(*node)[part];
  }
  return *node;
}

void merge_into(Json& target, const Json& source, const std::string& prefix) {
  if (!source.is_object()) {
    throw InvalidArgument(prefix.empty() ? "config must be a JSON object"
                                         : "config section '" + prefix +
                                               "' must be an object");
  }
  for (const auto& [key, value] : source.items()) {
    const std::string dotted = prefix.empty() ? key : prefix + "." + key;
    if (const Field* f = find_field(dotted)) {
      if (!matches(*f, value)) {
        throw InvalidArgument("config key '" + dotted + "' must be " + kind_name(f->kind) +
                              (f->nullable ? " or null" : ""));
      }
      *locate(target, dotted) =
          f->kind == Kind::kInteger && value.is_number_float()
              ? Json(static_cast<std::int64_t>(value.get<double>()))
              : value;
    } else if (is_section(dotted)) {
      merge_into(target, value, dotted);
    } else {
      throw InvalidArgument("unknown config key '" + dotted + "'");
    }
  }
}



}  // namespace

RunConfig::RunConfig() {
  values_ = Json::object();
  for (const auto& f : schema()) *locate(values_, f.key) = f.value;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

RunConfig RunConfig::from_json(const Json& document) {
  RunConfig config;
  config.merge(document);
  return config;
}

void RunConfig::merge(const Json& document) { merge_into(values_, document, ""); }

void RunConfig::set(std::string_view dotted_key, const Json& value) {
  Json doc = Json::object();
  *locate(doc, dotted_key) = value;
  merge(doc);
}

void RunConfig::set(std::string_view dotted_key, std::string_view text) {
  const Field* f = find_field(dotted_key);
  if (f == nullptr) {
    throw InvalidArgument("unknown config key '" + std::string(dotted_key) + "'");
  }
  if (f->kind == Kind::kString) {
    set(dotted_key, Json(std::string(text)));
    return;
  }
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument("config key '" + std::string(dotted_key) + "' must be " +
                          kind_name(f->kind) + ", got '" + std::string(text) + "'");
  }
  set(dotted_key, value);
}

const RunConfig::Json& RunConfig::get(std::string_view dotted_key) const {
  return lookup(values_, dotted_key);
}

RunConfig RunConfig::resolved(std::string_view stage) const {
  RunConfig out = *this;
  Json& v = out.values_;
  const std::string s(stage);

  if (v["seed"].is_null()) {
    v["seed"] = seed_from_environment().value_or(0);
  }
  if (v["seed"].get<std::int64_t>() < 0) throw InvalidArgument("seed must be non-negative");

  const auto scale = v["model"]["scale"].get<std::string>();
  if (scale != "desk" && scale != "full") {
    throw InvalidArgument("model.scale must be 'desk' or 'full'");
  }
  const auto decoder = parse_decoder(v["model"]["decoder"].get<std::string>());
  const ModelSpec preset = scale == "desk" ? desk_model(decoder, 0) : full_model(decoder, 0);
  auto fill = [&](const char* key, int value) {
    if (v["model"][key].is_null()) v["model"][key] = value;
  };
  fill("width_divisor", preset.width_divisor);
  fill("rnn_hidden", preset.rnn_hidden);
  fill("rnn_layers", preset.rnn_layers);
  fill("td_hidden", preset.td_hidden);
  fill("td_heads", preset.td_heads);
  fill("td_ffn", preset.td_ffn);
  fill("td_max_len", preset.td_max_len);
  fill("jigsaw_hidden", preset.jigsaw_hidden);

  if (v["train"]["learning_rate"].is_null()) {
    v["train"]["learning_rate"] = s == "pretrain" ? TrainConfig::pretraining().learning_rate
                                                  : TrainConfig::finetuning().learning_rate;
  }
  const auto task = v["task"]["name"].get<std::string>();
  if (!task.empty()) parse_task(task);
  const auto pieces = v["task"]["sorting_pieces"].get<int>();
  if (pieces != 0 && (pieces < 2 || pieces > kMaxSortingPieces)) {
    throw InvalidArgument("task.sorting_pieces must be 0 (random) or in [2, 4]");
  }
  const auto freeze = v["eval"]["freeze"].get<std::string>();
  if (freeze != "auto") parse_scope(freeze);

  TrainConfig train = out.train_config(stage);
  if (v["train"]["patience"].is_null()) v["train"]["patience"] = train.effective_patience();
  train.validate();
  out.model_spec(1).validate();
  return out;
}

std::uint64_t RunConfig::seed() const {
  const auto& s = values_["seed"];
  if (s.is_null()) return seed_from_environment().value_or(0);
  return s.get<std::uint64_t>();
}

ModelSpec RunConfig::model_spec(int alphabet_size) const {
  const auto& m = values_["model"];
  const auto decoder = parse_decoder(m["decoder"].get<std::string>());
  ModelSpec spec = m["scale"].get<std::string>() == "full" ? full_model(decoder, alphabet_size)
                                                           : desk_model(decoder, alphabet_size);
  auto take = [&](const char* key, int& field) {
    if (!m[key].is_null()) field = m[key].get<int>();
  };
  take("width_divisor", spec.width_divisor);
  take("rnn_hidden", spec.rnn_hidden);
  take("rnn_layers", spec.rnn_layers);
  take("td_hidden", spec.td_hidden);
  take("td_heads", spec.td_heads);
  take("td_ffn", spec.td_ffn);
  take("td_max_len", spec.td_max_len);
  take("jigsaw_hidden", spec.jigsaw_hidden);
  return spec;
}

TrainConfig RunConfig::train_config(std::string_view stage) const {
  TrainConfig c = stage == "pretrain" ? TrainConfig::pretraining() : TrainConfig::finetuning();
  c.stage = std::string(stage);
  const auto& t = values_["train"];
  if (!t["learning_rate"].is_null()) c.learning_rate = t["learning_rate"].get<double>();
  c.max_epochs = t["max_epochs"].get<int>();
  if (!t["patience"].is_null()) c.patience = t["patience"].get<int>();
  c.batch_size = t["batch_size"].get<int>();
  c.clip_norm = t["clip_norm"].get<double>();
  c.fraction = t["fraction"].get<double>();
  c.train_wacc = t["train_wacc"].get<bool>();
  c.val_wacc = t["val_wacc"].get<bool>();
  c.threads = t["threads"].get<int>();
  if (!t["target_train_wacc"].is_null()) c.target_train_wacc = t["target_train_wacc"].get<double>();
  c.augment = values_["augment"]["enabled"].get<bool>();
  c.max_decode_len = values_["eval"]["max_decode_len"].get<int>();
  c.seed = seed();
  return c;
}

std::optional<EncoderScope> RunConfig::freeze_override() const {
  const auto freeze = values_["eval"]["freeze"].get<std::string>();
  if (freeze == "auto") return std::nullopt;
  return parse_scope(freeze);
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* text = std::getenv("SCRIBE_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const auto value = std::strtoull(text, &end, 10);
  if (errno != 0 || end == text || *end != '\0' || text[0] == '-') {
    throw InvalidArgument(std::string("SCRIBE_SEED must be a non-negative integer, got '") +
                          text + "'");
  }
  return value;
}

std::filesystem::path make_run_directory(const std::filesystem::path& root,
                                         std::string_view label) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << label << '-' << std::put_time(&tm, "%Y%m%d-%H%M%S");
  std::filesystem::create_directories(root);
  auto dir = root / stamp.str();
  for (int k = 1; std::filesystem::exists(dir); ++k) {
    dir = root / (stamp.str() + "-" + std::to_string(k));
  }
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace scribe
