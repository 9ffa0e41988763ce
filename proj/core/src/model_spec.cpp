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

#include "scribe/model_spec.hpp"

#include <algorithm>

#include "scribe/errors.hpp"

namespace scribe {

std::string decoder_name(DecoderKind kind) {
  return kind == DecoderKind::kCtc ? "ctc" : "td";
}

DecoderKind parse_decoder(std::string_view name) {
  if (name == "ctc") return DecoderKind::kCtc;
  if (name == "td") return DecoderKind::kTd;
  throw InvalidArgument("unknown decoder '" + std::string(name) +
                        "' (expected ctc or td)");
}

int ModelSpec::conv_channels(int full) const {
  return std::max(1, full / width_divisor);
}

void ModelSpec::validate() const {
  if (width_divisor < 1 || rnn_hidden < 1 || rnn_layers < 1 || td_hidden < 1 ||
      td_heads < 1 || td_ffn < 1 || td_max_len < 2 || jigsaw_hidden < 1 ||
      alphabet_size < 0) {
    throw InvalidArgument("model sizes must be positive");
  }
  if (td_hidden % td_heads != 0) {
    throw InvalidArgument("td_hidden must be divisible by td_heads");
  }
}

ModelSpec full_model(DecoderKind decoder, int alphabet_size) {
  ModelSpec spec;
  spec.decoder = decoder;
  spec.alphabet_size = alphabet_size;
  return spec;
}

ModelSpec desk_model(DecoderKind decoder, int alphabet_size) {
  ModelSpec spec;
  spec.width_divisor = 8;
  spec.rnn_hidden = 32;
  spec.td_hidden = 64;
  spec.td_heads = 8;
  spec.td_ffn = 256;
  spec.jigsaw_hidden = 128;
  spec.decoder = decoder;
  spec.alphabet_size = alphabet_size;
  return spec;
}

void to_json(nlohmann::json& j, const ModelSpec& spec) {
  j = nlohmann::json{{"width_divisor", spec.width_divisor},
                     {"rnn_hidden", spec.rnn_hidden},
                     {"rnn_layers", spec.rnn_layers},
                     {"decoder", decoder_name(spec.decoder)},
                     {"td_hidden", spec.td_hidden},
                     {"td_heads", spec.td_heads},
                     {"td_ffn", spec.td_ffn},
                     {"td_max_len", spec.td_max_len},
                     {"jigsaw_hidden", spec.jigsaw_hidden},
                     {"alphabet_size", spec.alphabet_size}};
}

void from_json(const nlohmann::json& j, ModelSpec& spec) {
  ModelSpec d;
  spec.width_divisor = j.value("width_divisor", d.width_divisor);
  spec.rnn_hidden = j.value("rnn_hidden", d.rnn_hidden);
  spec.rnn_layers = j.value("rnn_layers", d.rnn_layers);
  spec.decoder = parse_decoder(j.value("decoder", std::string("ctc")));
  spec.td_hidden = j.value("td_hidden", d.td_hidden);
  spec.td_heads = j.value("td_heads", d.td_heads);
  spec.td_ffn = j.value("td_ffn", d.td_ffn);
  spec.td_max_len = j.value("td_max_len", d.td_max_len);
  spec.jigsaw_hidden = j.value("jigsaw_hidden", d.jigsaw_hidden);
  spec.alphabet_size = j.value("alphabet_size", d.alphabet_size);
}

}  // namespace scribe
