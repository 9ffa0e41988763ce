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

#include "scribe/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "scribe/errors.hpp"

namespace scribe {
namespace {

constexpr char kMagic[8] = {'S', 'C', 'R', 'I', 'B', 'E', 'C', 'K'};

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw DataError("truncated checkpoint");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::uint8_t dtype_code(torch::ScalarType t) {
  switch (t) {
    case torch::kFloat: return 0;
    case torch::kDouble: return 1;
    case torch::kLong: return 2;
    default: throw InvalidArgument("unsupported tensor dtype in checkpoint");
  }
}

torch::ScalarType dtype_from(std::uint8_t code) {
  switch (code) {
    case 0: return torch::kFloat;
    case 1: return torch::kDouble;
    case 2: return torch::kLong;
    default: throw DataError("unknown tensor dtype code in checkpoint");
  }
}

void write_bytes(std::ostream& out, const torch::Tensor& t) {
  auto c = t.contiguous().cpu();
  const auto elem = c.element_size();
  const auto* data = static_cast<const unsigned char*>(c.data_ptr());
  const auto n = static_cast<std::size_t>(c.numel());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(n * elem));
  } else {
    std::vector<unsigned char> buf(data, data + n * elem);
    for (std::size_t i = 0; i < n; ++i) {
      std::reverse(buf.begin() + i * elem, buf.begin() + (i + 1) * elem);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
}

void read_bytes(std::istream& in, torch::Tensor& t) {
  const auto elem = t.element_size();
  const auto n = static_cast<std::size_t>(t.numel());
  auto* data = static_cast<char*>(t.data_ptr());
  in.read(data, static_cast<std::streamsize>(n * elem));
  if (!in) throw DataError("truncated checkpoint tensor data");
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < n; ++i) std::reverse(data + i * elem, data + (i + 1) * elem);
  }
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  nlohmann::ordered_json header;
  header["kind"] = ck.kind;
  header["task"] = ck.task ? task_name(*ck.task) : std::string();
  header["pretrained"] = scope_name(ck.pretrained);
  nlohmann::json model = ck.model;
  header["model"] = model;
  header["alphabet"] = ck.alphabet.to_utf8();
  header["config"] = ck.config;
  header["epoch"] = ck.epoch;
  header["val_loss"] = ck.val_loss;
  const std::string text = header.dump();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    write_le<std::uint32_t>(out, kCheckpointVersion);
    write_le<std::uint64_t>(out, text.size());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    write_le<std::uint64_t>(out, ck.tensors.size());
    for (const auto& [name, tensor] : ck.tensors) {
      write_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
      out.write(name.data(), static_cast<std::streamsize>(name.size()));
      write_le<std::uint8_t>(out, dtype_code(tensor.scalar_type()));
      write_le<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.dim()));
      for (auto d : tensor.sizes()) write_le<std::int64_t>(out, d);
      write_bytes(out, tensor);
    }
    if (!out) throw DataError("failed writing checkpoint: " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + 8, kMagic)) {
    throw DataError("not a scribe checkpoint: " + path.string());
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = read_le<std::uint64_t>(in);
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw DataError("truncated checkpoint header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt checkpoint header: ") + e.what());
  }

  Checkpoint ck;
  ck.kind = header.at("kind").get<std::string>();
  const auto task = header.value("task", std::string());
  if (!task.empty()) ck.task = parse_task(task);
  ck.pretrained = parse_scope(header.value("pretrained", std::string("none")));
  ck.model = header.at("model").get<ModelSpec>();
  ck.alphabet = Alphabet::from_utf8(header.value("alphabet", std::string()));
  ck.config = header.value("config", nlohmann::json::object());
  ck.epoch = header.value("epoch", 0);
  ck.val_loss = header.value("val_loss", 0.0);

  const auto count = read_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = read_le<std::uint32_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto dtype = dtype_from(read_le<std::uint8_t>(in));
    const auto rank = read_le<std::uint32_t>(in);
    std::vector<std::int64_t> dims(rank);
    for (auto& d : dims) d = read_le<std::int64_t>(in);
    auto t = torch::empty(dims, torch::TensorOptions().dtype(dtype));
    read_bytes(in, t);
    ck.tensors.emplace_back(std::move(name), std::move(t));
  }
  return ck;
}

NamedTensors module_state(const torch::nn::Module& module) {
  NamedTensors out;
  for (const auto& p : module.named_parameters(true)) {
    out.emplace_back(p.key(), p.value().detach().clone());
  }
  for (const auto& b : module.named_buffers(true)) {
    out.emplace_back(b.key(), b.value().detach().clone());
  }
  return out;
}

std::size_t load_module_state(torch::nn::Module& module, const NamedTensors& state,
                              const std::string& prefix,
                              const std::string& target_prefix) {
  std::map<std::string, torch::Tensor> targets;
  for (const auto& p : module.named_parameters(true)) targets[p.key()] = p.value();
  for (const auto& b : module.named_buffers(true)) targets[b.key()] = b.value();
  torch::NoGradGuard no_grad;
  std::size_t copied = 0;
  for (const auto& [name, tensor] : state) {
    if (!starts_with(name, prefix)) continue;
    const std::string target = target_prefix + name.substr(prefix.size());
    auto it = targets.find(target);
    if (it == targets.end()) continue;
    if (it->second.sizes() != tensor.sizes()) {
      throw DataError("checkpoint tensor " + name + " has an incompatible shape");
    }
    it->second.copy_(tensor);
    ++copied;
  }
  return copied;
}

std::uint64_t state_checksum(const torch::nn::Module& module,
                             const std::string& prefix) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const torch::Tensor& t) {
    auto c = t.detach().contiguous().cpu();
    const auto* data = static_cast<const unsigned char*>(c.data_ptr());
    const auto n = static_cast<std::size_t>(c.numel() * c.element_size());
    for (std::size_t i = 0; i < n; ++i) h = (h ^ data[i]) * 1099511628211ULL;
  };
  for (const auto& p : module.named_parameters(true)) {
    if (starts_with(p.key(), prefix)) mix(p.value());
  }
  for (const auto& b : module.named_buffers(true)) {
    if (starts_with(b.key(), prefix)) mix(b.value());
  }
  return h;
}

}  // namespace scribe
