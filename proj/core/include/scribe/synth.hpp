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
#include <string>
#include <string_view>
#include <vector>

#include "scribe/image.hpp"

namespace scribe {

// Characters the built-in stroke renderer can draw.
enum class GlyphSet { kLowercase, kLetters, kLettersDigits };

std::u32string glyph_characters(GlyphSet set);
bool has_glyph(char32_t c);

struct SynthWord {
  Raster raster;  // height 64, 255 background
  std::string transcript;
};

// Writer style derived from a seed. Exposed for inspection and tests.
struct WritingStyle {
  double slant_deg = 0.0;       // [-15, 15]
  int thickness = 2;            // [1, 3] px
  double letter_gap = 10.0;     // extra px between glyph cells
  double width_scale = 1.0;
  double baseline_jitter = 3.0; // max |offset| in px per letter
  double wobble = 0.15;         // control-point noise in glyph units
};

WritingStyle style_from_seed(std::uint64_t style_seed);

// Renders `word` in the style selected by `style_seed`. Deterministic in both
// arguments. Throws InvalidArgument listing every unsupported character.
SynthWord synth_word(std::string_view word, std::uint64_t style_seed);

// Distinct pseudo-words over `charset` with lengths in [min_len, max_len] and
// no immediately repeated characters.
std::vector<std::string> generate_lexicon(std::size_t count, int min_len,
                                          int max_len, GlyphSet charset,
                                          std::uint64_t seed);

struct SynthCorpusOptions {
  std::size_t words = 500;
  int styles = 5;
  int min_len = 3;
  int max_len = 6;
  GlyphSet charset = GlyphSet::kLowercase;
  std::uint64_t seed = 1;
  // Samples are tagged with block = 1 + (word index * blocks / words).
  int blocks = 1;
};

// Writes <dir>/img/<word-index>_<style>.png and <dir>/labels.tsv. Returns the
// label file path. The writer tag of a sample is its style index.
std::filesystem::path write_synth_corpus(const std::filesystem::path& dir,
                                         const SynthCorpusOptions& options);

}  // namespace scribe
