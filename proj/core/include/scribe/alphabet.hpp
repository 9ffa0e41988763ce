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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scribe {

// UTF-8 <-> code point helpers. Malformed input raises InvalidArgument.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);
std::string utf8_encode(char32_t c);

// Ordered character set with reserved token ids.
//
// Id layout for an alphabet of n characters:
//   0 .. n-1   characters, in the order given (build_manifest sorts them)
//   n          SOS
//   n + 1      EOS
//   n + 2      PAD
// The CTC head works in a separate class space where class 0 is the blank
// and character id k is class k + 1 (see ctc_class / ctc_char).
class Alphabet {
 public:
  Alphabet() = default;
  // Duplicate characters are rejected.
  explicit Alphabet(std::u32string characters);
  static Alphabet from_utf8(std::string_view characters);

  std::size_t size() const { return chars_.size(); }
  bool empty() const { return chars_.empty(); }
  const std::u32string& characters() const { return chars_; }
  std::string to_utf8() const { return utf8_encode(chars_); }

  bool contains(char32_t c) const { return lookup(c).has_value(); }
  std::optional<std::int64_t> lookup(char32_t c) const;
  std::int64_t id(char32_t c) const;  // throws InvalidArgument when absent
  char32_t character(std::int64_t id) const;

  std::int64_t sos() const { return static_cast<std::int64_t>(size()); }
  std::int64_t eos() const { return sos() + 1; }
  std::int64_t pad() const { return sos() + 2; }
  // Characters plus SOS, EOS and PAD.
  std::int64_t token_vocabulary() const { return sos() + 3; }

  static constexpr std::int64_t kCtcBlank = 0;
  std::int64_t ctc_classes() const { return static_cast<std::int64_t>(size()) + 1; }
  static std::int64_t ctc_class(std::int64_t id) { return id + 1; }
  static std::int64_t ctc_char(std::int64_t cls) { return cls - 1; }

  std::vector<std::int64_t> encode(std::string_view utf8) const;
  std::string decode(const std::vector<std::int64_t>& ids) const;

  bool operator==(const Alphabet& other) const { return chars_ == other.chars_; }

 private:
  std::u32string chars_;
  std::vector<std::pair<char32_t, std::int64_t>> sorted_;  // for lookup
};

}  // namespace scribe
