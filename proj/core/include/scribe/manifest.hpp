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
#include <vector>

#include "scribe/alphabet.hpp"

namespace scribe {

struct SampleRef {
  std::string path;        // relative to Manifest::root unless absolute
  std::string transcript;  // UTF-8, non-empty
  std::optional<int> block;
  std::optional<int> writer;

  bool operator==(const SampleRef&) const = default;
};

// Ordered list of labelled samples plus the alphabet they are encoded with.
// Immutable once built; derived manifests are new values.
class Manifest {
 public:
  Manifest() = default;
  Manifest(std::filesystem::path root, std::string split, Alphabet alphabet,
           std::vector<SampleRef> samples);

  const std::filesystem::path& root() const { return root_; }
  const std::string& split() const { return split_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<SampleRef>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  std::filesystem::path image_path(std::size_t index) const;

  // Same root and alphabet, a subset of the samples (in the given order).
  Manifest subset(const std::vector<std::size_t>& indices,
                  std::string split) const;
  Manifest with_alphabet(Alphabet alphabet) const;

  bool operator==(const Manifest& other) const;

 private:
  std::filesystem::path root_;
  std::string split_;
  Alphabet alphabet_;
  std::vector<SampleRef> samples_;
};

// Reads `label_file` (UTF-8, one `relative_path<TAB>transcript` per line,
// optionally followed by `<TAB>block<TAB>writer`). Every image must exist
// under `root`. The alphabet is the sorted set of transcript characters.
Manifest build_manifest(const std::filesystem::path& root,
                        const std::filesystem::path& label_file,
                        std::string split = "train");

// Line-oriented text: a header line `#scribe-manifest<TAB>{json}` carrying
// version, split, root and alphabet, then `path<TAB>transcript<TAB>block
// <TAB>writer` per sample with '-' for absent tags.
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

struct SplitSpec {
  double fraction = 100.0;  // percent, in (0, 100]
  std::uint64_t seed = 0;
};

// ceil(n * fraction / 100) samples: the prefix of one seeded Fisher-Yates
// shuffle of [0, n), returned in original manifest order. Prefixes of the
// same shuffle make selections nested across fractions for a fixed seed.
Manifest split_fraction(const Manifest& manifest, const SplitSpec& spec);

// The shuffled order used by split_fraction.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);
std::size_t fraction_count(std::size_t n, double fraction);

// Inclusive block range; empty when last < first.
struct BlockRange {
  int first = 1;
  int last = 0;

  bool empty() const { return last < first; }
  bool contains(int block) const { return block >= first && block <= last; }
};

struct BlockSplit {
  Manifest train;
  Manifest val;
  Manifest test;
};

// Partitions by block id. Samples outside every range are dropped.
BlockSplit split_blocks(const Manifest& manifest, BlockRange train,
                        BlockRange val, BlockRange test);

}  // namespace scribe
