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

#include "scribe/alphabet.hpp"

#include <algorithm>

#include "scribe/errors.hpp"

namespace scribe {

std::u32string utf8_decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const auto lead = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      cp = lead & 0x1F;
      extra = 1;
    } else if ((lead & 0xF0) == 0xE0) {
      cp = lead & 0x0F;
      extra = 2;
    } else if ((lead & 0xF8) == 0xF0) {
      cp = lead & 0x07;
      extra = 3;
    } else {
      throw InvalidArgument("malformed UTF-8 lead byte");
    }
    if (extra > 0 && i + extra >= text.size()) {
      throw InvalidArgument("truncated UTF-8 sequence");
    }
    for (int k = 1; k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) {
        throw InvalidArgument("malformed UTF-8 continuation byte");
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string utf8_encode(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

std::string utf8_encode(std::u32string_view text) {
  std::string out;
  for (char32_t c : text) out += utf8_encode(c);
  return out;
}

Alphabet::Alphabet(std::u32string characters) : chars_(std::move(characters)) {
  sorted_.reserve(chars_.size());
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    sorted_.emplace_back(chars_[i], static_cast<std::int64_t>(i));
  }
  std::sort(sorted_.begin(), sorted_.end());
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (sorted_[i].first == sorted_[i - 1].first) {
      throw InvalidArgument("duplicate alphabet character '" +
                            utf8_encode(sorted_[i].first) + "'");
    }
  }
}

Alphabet Alphabet::from_utf8(std::string_view characters) {
  return Alphabet(utf8_decode(characters));
}

std::optional<std::int64_t> Alphabet::lookup(char32_t c) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), c,
      [](const auto& entry, char32_t key) { return entry.first < key; });
  if (it == sorted_.end() || it->first != c) return std::nullopt;
  return it->second;
}

std::int64_t Alphabet::id(char32_t c) const {
  if (auto found = lookup(c)) return *found;
  throw InvalidArgument("character '" + utf8_encode(c) +
                        "' is not in the alphabet");
}

char32_t Alphabet::character(std::int64_t id) const {
  if (id < 0 || id >= static_cast<std::int64_t>(chars_.size())) {
    throw InvalidArgument("token id " + std::to_string(id) +
                          " is not a character id");
  }
  return chars_[static_cast<std::size_t>(id)];
}

std::vector<std::int64_t> Alphabet::encode(std::string_view utf8) const {
  std::vector<std::int64_t> ids;
  for (char32_t c : utf8_decode(utf8)) ids.push_back(id(c));
  return ids;
}

std::string Alphabet::decode(const std::vector<std::int64_t>& ids) const {
  std::u32string text;
  for (auto id : ids) text.push_back(character(id));
  return utf8_encode(text);
}

}  // namespace scribe
