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

#include "scribe/accounting.hpp"

#include "scribe/errors.hpp"

namespace scribe {

std::int64_t CostReport::params() const {
  std::int64_t n = 0;
  for (const auto& l : layers) n += l.params;
  return n;
}

std::int64_t CostReport::macs(CostGroup group) const {
  std::int64_t n = 0;
  for (const auto& l : layers) {
    if (l.group == group) n += l.macs;
  }
  return n;
}

std::int64_t CostReport::total_macs() const {
  std::int64_t n = 0;
  for (const auto& l : layers) n += l.macs;
  return n;
}

namespace {

struct Walker {
  std::vector<LayerCost>& out;
  std::int64_t h;
  std::int64_t w;
  int channels;

  // Convolution with batch norm (gamma, beta), no bias.
  void conv(const std::string& name, int in, int out_ch, int k) {
    const std::int64_t params = std::int64_t(in) * out_ch * k * k + 2 * out_ch;
    const std::int64_t macs = std::int64_t(in) * out_ch * k * k * h * w;
    out.push_back({name, CostGroup::kConv, params, macs});
  }
  void conv3(const std::string& name, int out_ch) {
    conv(name, channels, out_ch, 3);
    channels = out_ch;
  }
  void block(const std::string& name, int out_ch) {
    const int in = channels;
    conv(name + ".conv1", in, out_ch, 3);
    conv(name + ".conv2", out_ch, out_ch, 3);
    if (in != out_ch) conv(name + ".project", in, out_ch, 1);
    channels = out_ch;
  }
  void pool() {
    h /= 2;
    w /= 2;
  }
};

}  // namespace

CostReport count_params_flops(const ModelSpec& spec, int width,
                              int decoded_tokens) {
  spec.validate();
  if (width < 32) throw InvalidArgument("width must be at least 32");
  CostReport report;
  report.width = width;
  Walker walk{report.layers, 64, width, 1};
  const int c512 = spec.conv_channels(512);
  walk.conv3("cnn.conv32", spec.conv_channels(32));
  walk.conv3("cnn.conv64", spec.conv_channels(64));
  walk.pool();
  walk.block("cnn.block128", spec.conv_channels(128));
  walk.pool();
  walk.block("cnn.block256a", spec.conv_channels(256));
  walk.block("cnn.block256b", spec.conv_channels(256));
  walk.pool();
  for (int i = 0; i < 5; ++i) walk.block("cnn.block512_" + std::to_string(i), c512);
  walk.conv3("cnn.conv512a", c512);
  walk.pool();
  for (int i = 0; i < 3; ++i) walk.block("cnn.block512_" + std::to_string(5 + i), c512);
  walk.pool();
  walk.conv3("cnn.conv512b", c512);

  const std::int64_t frames = walk.w;
  std::int64_t in = std::int64_t(c512) * walk.h;
  const std::int64_t hid = spec.rnn_hidden;
  for (int layer = 0; layer < spec.rnn_layers; ++layer) {
    // Two directions, four gates, input and recurrent products, two biases.
    const std::int64_t params = 2 * (4 * hid * (in + hid) + 8 * hid);
    const std::int64_t macs = 2 * frames * 4 * hid * (in + hid);
    report.layers.push_back(
        {"rnn.layer" + std::to_string(layer), CostGroup::kRnn, params, macs});
    in = 2 * hid;
  }
  const std::int64_t d_s = 2 * hid;

  if (spec.decoder == DecoderKind::kCtc) {
    const std::int64_t classes = spec.ctc_classes();
    report.layers.push_back({"ctc.linear", CostGroup::kDecoder,
                             d_s * classes + classes, frames * d_s * classes});
    return report;
  }

  const std::int64_t d = spec.td_hidden;
  const std::int64_t v = spec.td_vocabulary();
  const std::int64_t f = spec.td_ffn;
  const std::int64_t l = decoded_tokens;
  auto add = [&](const std::string& name, std::int64_t params, std::int64_t macs) {
    report.layers.push_back({name, CostGroup::kDecoder, params, macs});
  };
  add("td.embed", v * d, 0);
  add("td.position", std::int64_t(spec.td_max_len) * d, 0);
  if (d_s != d) add("td.memory_proj", d_s * d + d, frames * d_s * d);
  // Self-attention over a causal prefix: projections plus score/mix products.
  add("td.self_attn", 4 * (d * d + d), l * 4 * d * d + l * (l + 1) * d);
  add("td.cross_attn", 4 * (d * d + d),
      l * 2 * d * d + frames * 2 * d * d + l * frames * 2 * d);
  add("td.norms", 3 * 2 * d, 0);
  add("td.ffn", d * f + f + f * d + d, l * 2 * d * f);
  add("td.classifier", d * v + v, l * d * v);
  return report;
}

}  // namespace scribe
