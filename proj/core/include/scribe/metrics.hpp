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
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace scribe {

// One evaluation record. Serialized as a single JSON object per line with
// the fixed key order: stage, epoch, split, loss, wacc, seconds, then any
// tags in insertion order.
struct MetricsRecord {
  std::string stage;  // pretrain | finetune | probe | eval
  int epoch = 0;
  std::string split;  // train | val | test
  double loss = 0.0;
  // Percent. Pretext accuracy for the pretrain stage; null when not measured.
  std::optional<double> wacc;
  double seconds = 0.0;
  nlohmann::ordered_json tags = nlohmann::ordered_json::object();

  bool operator==(const MetricsRecord&) const = default;
};

std::string to_line(const MetricsRecord& record);
MetricsRecord parse_metrics_line(const std::string& line);
std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path);

// Same record with wall-clock time zeroed, for run-to-run comparison.
MetricsRecord without_timing(MetricsRecord record);

class MetricsWriter {
 public:
  MetricsWriter() = default;
  explicit MetricsWriter(const std::filesystem::path& path);

  void write(const MetricsRecord& record);
  bool is_open() const { return out_.is_open(); }

 private:
  std::ofstream out_;
};

// 100 * exact matches / n. Throws InvalidArgument on length mismatch; an
// empty pair of lists scores 0.
double word_accuracy(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& references);

}  // namespace scribe
