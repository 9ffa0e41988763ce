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

#include "scribe/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "scribe/errors.hpp"
#include "scribe/random.hpp"

namespace scribe {
namespace {

constexpr const char* kManifestMagic = "#scribe-manifest";
constexpr int kManifestVersion = 1;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::optional<int> parse_tag(const std::string& field, const std::string& what,
                             std::size_t line_no) {
  if (field.empty() || field == "-") return std::nullopt;
  try {
    std::size_t used = 0;
    const int value = std::stoi(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": invalid " + what +
                    " '" + field + "'");
  }
}

std::string tag_text(const std::optional<int>& tag) {
  return tag ? std::to_string(*tag) : std::string("-");
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

Alphabet infer_alphabet(const std::vector<SampleRef>& samples) {
  std::set<char32_t> chars;
  for (const auto& s : samples) {
    for (char32_t c : utf8_decode(s.transcript)) chars.insert(c);
  }
  return Alphabet(std::u32string(chars.begin(), chars.end()));
}

void check_unique(const std::vector<SampleRef>& samples) {
  std::unordered_set<std::string> seen;
  for (const auto& s : samples) {
    if (!seen.insert(s.path).second) {
      throw DataError("duplicate sample path: " + s.path);
    }
  }
}

}  // namespace

Manifest::Manifest(std::filesystem::path root, std::string split,
                   Alphabet alphabet, std::vector<SampleRef> samples)
    : root_(std::move(root)),
      split_(std::move(split)),
      alphabet_(std::move(alphabet)),
      samples_(std::move(samples)) {
  check_unique(samples_);
  for (const auto& s : samples_) {
    if (s.transcript.empty()) {
      throw DataError("empty transcript for " + s.path);
    }
    for (char32_t c : utf8_decode(s.transcript)) {
      if (!alphabet_.contains(c)) {
        throw DataError("transcript of " + s.path + " uses '" +
                        utf8_encode(c) + "' which is not in the alphabet");
      }
    }
  }
}

std::filesystem::path Manifest::image_path(std::size_t index) const {
  const std::filesystem::path p(samples_.at(index).path);
  return p.is_absolute() ? p : root_ / p;
}

Manifest Manifest::subset(const std::vector<std::size_t>& indices,
                          std::string split) const {
  std::vector<SampleRef> picked;
  picked.reserve(indices.size());
  for (auto i : indices) {
    if (i >= samples_.size()) throw InvalidArgument("sample index out of range");
    picked.push_back(samples_[i]);
  }
  return Manifest(root_, std::move(split), alphabet_, std::move(picked));
}

Manifest Manifest::with_alphabet(Alphabet alphabet) const {
  return Manifest(root_, split_, std::move(alphabet), samples_);
}

bool Manifest::operator==(const Manifest& other) const {
  return root_ == other.root_ && split_ == other.split_ &&
         alphabet_ == other.alphabet_ && samples_ == other.samples_;
}

Manifest build_manifest(const std::filesystem::path& root,
                        const std::filesystem::path& label_file,
                        std::string split) {
  std::ifstream in(label_file, std::ios::binary);
  if (!in) throw DataError("cannot open label file: " + label_file.string());
  std::vector<SampleRef> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 2 || fields[0].empty()) {
      throw DataError(label_file.string() + ":" + std::to_string(line_no) +
                      ": expected 'path<TAB>transcript'");
    }
    SampleRef ref{fields[0], fields[1], std::nullopt, std::nullopt};
    if (fields.size() > 2) ref.block = parse_tag(fields[2], "block id", line_no);
    if (fields.size() > 3) ref.writer = parse_tag(fields[3], "writer id", line_no);
    samples.push_back(std::move(ref));
  }
  if (samples.empty()) {
    throw DataError("label file has no samples: " + label_file.string());
  }
  check_unique(samples);
  const auto abs_root = std::filesystem::absolute(root).lexically_normal();
  for (const auto& s : samples) {
    const std::filesystem::path p(s.path);
    const auto full = p.is_absolute() ? p : abs_root / p;
    if (!std::filesystem::is_regular_file(full)) {
      throw DataError("missing image file: " + full.string());
    }
  }
  Alphabet alphabet = infer_alphabet(samples);
  return Manifest(abs_root, std::move(split), std::move(alphabet),
                  std::move(samples));
}

void save_manifest(const Manifest& manifest,
                   const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest: " + path.string());
  nlohmann::ordered_json header;
  header["version"] = kManifestVersion;
  header["split"] = manifest.split();
  header["root"] = manifest.root().string();
  header["alphabet"] = manifest.alphabet().to_utf8();
  out << kManifestMagic << '\t' << header.dump() << '\n';
  for (const auto& s : manifest.samples()) {
    out << s.path << '\t' << s.transcript << '\t' << tag_text(s.block) << '\t'
        << tag_text(s.writer) << '\n';
  }
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty manifest file: " + path.string());
  }
  strip_cr(line);
  const auto head = split_tabs(line);
  if (head.size() != 2 || head[0] != kManifestMagic) {
    throw DataError("not a scribe manifest: " + path.string());
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(head[1]);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt manifest header in " + path.string() + ": " +
                    e.what());
  }
  if (header.value("version", 0) != kManifestVersion) {
    throw DataError("unsupported manifest version in " + path.string());
  }
  std::filesystem::path root = header.at("root").get<std::string>();
  if (root.is_relative()) root = path.parent_path() / root;
  std::vector<SampleRef> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 4 tab-separated fields");
    }
    samples.push_back({fields[0], fields[1],
                       parse_tag(fields[2], "block id", line_no),
                       parse_tag(fields[3], "writer id", line_no)});
  }
  return Manifest(root, header.at("split").get<std::string>(),
                  Alphabet::from_utf8(header.at("alphabet").get<std::string>()),
                  std::move(samples));
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  RandomSource rng(derive_seed(seed, 0xf7ac));
  // Fisher-Yates, high to low.
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::size_t fraction_count(std::size_t n, double fraction) {
  if (!(fraction > 0.0) || fraction > 100.0) {
    throw InvalidArgument("fraction must be in (0, 100], got " +
                          std::to_string(fraction));
  }
  // The epsilon keeps exact products such as 100 * 5 / 100 from rounding up.
  const double exact = static_cast<double>(n) * fraction / 100.0;
  return std::min(n, static_cast<std::size_t>(std::ceil(exact - 1e-9)));
}

Manifest split_fraction(const Manifest& manifest, const SplitSpec& spec) {
  const std::size_t count = fraction_count(manifest.size(), spec.fraction);
  if (count == manifest.size()) return manifest;
  auto order = seeded_permutation(manifest.size(), spec.seed);
  order.resize(count);
  std::sort(order.begin(), order.end());
  return manifest.subset(order, manifest.split());
}

BlockSplit split_blocks(const Manifest& manifest, BlockRange train,
                        BlockRange val, BlockRange test) {
  const BlockRange ranges[] = {train, val, test};
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (ranges[a].empty() || ranges[b].empty()) continue;
      if (ranges[a].first <= ranges[b].last &&
          ranges[b].first <= ranges[a].last) {
        throw InvalidArgument("block ranges overlap");
      }
    }
  }
  std::vector<std::size_t> picked[3];
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& block = manifest.samples()[i].block;
    if (!block) {
      throw DataError("sample " + manifest.samples()[i].path +
                      " has no block id");
    }
    for (int r = 0; r < 3; ++r) {
      if (ranges[r].contains(*block)) {
        picked[r].push_back(i);
        break;
      }
    }
  }
  return {manifest.subset(picked[0], "train"), manifest.subset(picked[1], "val"),
          manifest.subset(picked[2], "test")};
}

}  // namespace scribe
