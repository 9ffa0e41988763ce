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

#include "scribe/metrics.hpp"

#include "scribe/errors.hpp"

namespace scribe {

std::string to_line(const MetricsRecord& r) {
  nlohmann::ordered_json j;
  j["stage"] = r.stage;
  j["epoch"] = r.epoch;
  j["split"] = r.split;
  j["loss"] = r.loss;
  j["wacc"] = r.wacc ? nlohmann::ordered_json(*r.wacc) : nlohmann::ordered_json();
  j["seconds"] = r.seconds;
  for (const auto& [key, value] : r.tags.items()) j[key] = value;
  return j.dump();
}

MetricsRecord parse_metrics_line(const std::string& line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad metrics line: ") + e.what());
  }
  MetricsRecord r;
  for (const auto& [key, value] : j.items()) {
    if (key == "stage") r.stage = value.get<std::string>();
    else if (key == "epoch") r.epoch = value.get<int>();
    else if (key == "split") r.split = value.get<std::string>();
    else if (key == "loss") r.loss = value.is_null() ? 0.0 : value.get<double>();
    else if (key == "wacc") {
      if (!value.is_null()) r.wacc = value.get<double>();
    }
    else if (key == "seconds") r.seconds = value.get<double>();
    else r.tags[key] = value;
  }
  return r;
}

std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open metrics file: " + path.string());
  std::vector<MetricsRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_metrics_line(line));
  }
  return out;
}

MetricsRecord without_timing(MetricsRecord record) {
  record.seconds = 0.0;
  return record;
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app);
  if (!out_) throw DataError("cannot open metrics file: " + path.string());
}

void MetricsWriter::write(const MetricsRecord& record) {
  if (!out_.is_open()) return;
  out_ << to_line(record) << '\n';
  out_.flush();
}

double word_accuracy(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& references) {
  if (predictions.size() != references.size()) {
    throw InvalidArgument("word_accuracy: " + std::to_string(predictions.size()) +
                          " predictions vs " + std::to_string(references.size()) +
                          " references");
  }
  if (predictions.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    hits += predictions[i] == references[i];
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace scribe
