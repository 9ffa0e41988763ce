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

#include "scribe/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

#include <opencv2/imgproc.hpp>

#include "scribe/alphabet.hpp"
#include "scribe/errors.hpp"
#include "scribe/random.hpp"

namespace scribe {
namespace {

// Glyph outlines in font units: x grows right, y grows down. Ascender and cap
// line at y=0, x-height at 3, baseline at 7, descender at 10.
//
// Stroke syntax: strokes separated by ';'. Inside a stroke, "x,y" is a point
// and "a(cx,cy,rx,ry,a0,a1)" appends an elliptical arc swept linearly from
// angle a0 to a1 (degrees, y-down so negative angles are above the centre).
// "o(cx,cy,rx,ry)" is a closed ellipse.
struct GlyphDef {
  char32_t ch;
  double width;
  const char* strokes;
};

constexpr GlyphDef kGlyphs[] = {
    {U'a', 4, "o(2,5,2,2); 4,3 4,7"},
    {U'b', 4, "0,0 0,7; o(2,5,2,2)"},
    {U'c', 4, "a(2,5,2,2,-40,-320)"},
    {U'd', 4, "o(2,5,2,2); 4,0 4,7"},
    {U'e', 4, "0,5 4,5 a(2,5,2,2,0,-320)"},
    {U'f', 4, "a(3.5,1.5,1.5,1.5,-30,-180) 2,7; 0.5,3 3.5,3"},
    {U'g', 4, "o(2,5,2,2); 4,3 4,8.5 a(2,8.5,2,1.5,0,180)"},
    {U'h', 4, "0,0 0,7; 0,5 a(2,5,2,2,180,360) 4,7"},
    {U'i', 2, "1,3 1,7; 1,1.4 1,1.8"},
    {U'j', 3, "2,3 2,8.5 a(1,8.5,1,1.5,0,150); 2,1.4 2,1.8"},
    {U'k', 4, "0,0 0,7; 3.5,3 0,5.5; 1.2,4.6 3.8,7"},
    {U'l', 2, "1,0 1,7"},
    {U'm', 6, "0,3 0,7; 0,4.5 a(1.5,4.5,1.5,1.5,180,360) 3,7; 3,4.5 a(4.5,4.5,1.5,1.5,180,360) 6,7"},
    {U'n', 4, "0,3 0,7; 0,5 a(2,5,2,2,180,360) 4,7"},
    {U'o', 4, "o(2,5,2,2)"},
    {U'p', 4, "0,3 0,10; o(2,5,2,2)"},
    {U'q', 4, "o(2,5,2,2); 4,3 4,10 5,9"},
    {U'r', 3.5, "0,3 0,7; 0,5.5 a(2.5,5.5,2.5,2.5,180,290)"},
    {U's', 4, "a(2,4,1.8,1,-30,-270) a(2,6,1.8,1,-90,150)"},
    {U't', 3, "1.5,1 1.5,7 3,7; 0,3 3,3"},
    {U'u', 4, "0,3 0,5 a(2,5,2,2,180,0); 4,3 4,7"},
    {U'v', 4, "0,3 2,7 4,3"},
    {U'w', 6, "0,3 1.5,7 3,4 4.5,7 6,3"},
    {U'x', 4, "0,3 4,7; 4,3 0,7"},
    {U'y', 4, "0,3 2,7; 4,3 1,10"},
    {U'z', 4, "0,3 4,3 0,7 4,7"},

    {U'A', 4, "0,7 2,0 4,7; 1,4.5 3,4.5"},
    {U'B', 4, "0,0 0,7; 0,0 2.5,0 a(2.5,1.75,1.5,1.75,-90,90) 0,3.5; 0,3.5 2.4,3.5 a(2.4,5.25,1.6,1.75,-90,90) 0,7"},
    {U'C', 4, "a(2,3.5,2,3.5,-40,-320)"},
    {U'D', 4, "0,0 0,7; 0,0 1.5,0 a(1.5,3.5,2.5,3.5,-90,90) 0,7"},
    {U'E', 4, "4,0 0,0 0,7 4,7; 0,3.5 3,3.5"},
    {U'F', 4, "4,0 0,0 0,7; 0,3.5 3,3.5"},
    {U'G', 4, "a(2,3.5,2,3.5,-40,-360) 2.5,3.5"},
    {U'H', 4, "0,0 0,7; 4,0 4,7; 0,3.5 4,3.5"},
    {U'I', 2, "1,0 1,7; 0,0 2,0; 0,7 2,7"},
    {U'J', 3, "3,0 3,5 a(1.5,5,1.5,2,0,180)"},
    {U'K', 4, "0,0 0,7; 4,0 0,4.5; 1.5,3.2 4,7"},
    {U'L', 4, "0,0 0,7 4,7"},
    {U'M', 5, "0,7 0,0 2.5,5 5,0 5,7"},
    {U'N', 4, "0,7 0,0 4,7 4,0"},
    {U'O', 4, "o(2,3.5,2,3.5)"},
    {U'P', 4, "0,7 0,0 2.5,0 a(2.5,1.75,1.5,1.75,-90,90) 0,3.5"},
    {U'Q', 4, "o(2,3.5,2,3.5); 2.5,5 4.3,7.3"},
    {U'R', 4, "0,7 0,0 2.5,0 a(2.5,1.75,1.5,1.75,-90,90) 0,3.5; 1.5,3.5 4,7"},
    {U'S', 4, "a(2,1.75,2,1.75,-30,-270) a(2,5.25,2,1.75,-90,150)"},
    {U'T', 4, "0,0 4,0; 2,0 2,7"},
    {U'U', 4, "0,0 0,5 a(2,5,2,2,180,0) 4,0"},
    {U'V', 4, "0,0 2,7 4,0"},
    {U'W', 6, "0,0 1.5,7 3,2 4.5,7 6,0"},
    {U'X', 4, "0,0 4,7; 4,0 0,7"},
    {U'Y', 4, "0,0 2,3.5 4,0; 2,3.5 2,7"},
    {U'Z', 4, "0,0 4,0 0,7 4,7"},

    {U'0', 4, "o(2,3.5,2,3.5); 0.8,5.5 3.2,1.5"},
    {U'1', 3.5, "0.5,1.5 2,0 2,7; 0.5,7 3.5,7"},
    {U'2', 4, "a(2,2,2,2,-170,10) 0,7 4,7"},
    {U'3', 4, "a(2,1.75,2,1.75,-160,90) a(2,5.25,2,1.75,-90,160)"},
    {U'4', 4, "3,7 3,0 0,5 4,5"},
    {U'5', 4, "4,0 0.5,0 0,3 a(2,4.75,2,2.25,-130,150)"},
    {U'6', 4, "a(2.5,3.5,2.5,3.5,-70,-180) 0,5; o(2,5,2,2)"},
    {U'7', 4, "0,0 4,0 1.5,7"},
    {U'8', 4, "o(2,1.75,1.7,1.75); o(2,5.25,2,1.75)"},
    {U'9', 4, "o(2,2,2,2); 4,2 3.5,7"},
};

using Point = cv::Point2d;
using Stroke = std::vector<Point>;

struct Glyph {
  double width = 0;
  std::vector<Stroke> strokes;
};

void append_arc(Stroke& stroke, double cx, double cy, double rx, double ry,
                double a0, double a1) {
  const double sweep = std::abs(a1 - a0);
  const int steps = std::max(4, static_cast<int>(std::ceil(sweep / 15.0)));
  for (int i = 0; i <= steps; ++i) {
    const double a = (a0 + (a1 - a0) * i / steps) * std::numbers::pi / 180.0;
    stroke.emplace_back(cx + rx * std::cos(a), cy + ry * std::sin(a));
  }
}

std::vector<double> parse_args(std::string_view body) {
  std::vector<double> args;
  std::string token;
  std::istringstream in{std::string(body)};
  while (std::getline(in, token, ',')) args.push_back(std::stod(token));
  return args;
}

Glyph parse_glyph(const GlyphDef& def) {
  Glyph glyph{def.width, {}};
  std::string_view text(def.strokes);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = text.substr(start, end - start);
    Stroke stroke;
    std::size_t i = 0;
    while (i < part.size()) {
      if (part[i] == ' ') {
        ++i;
        continue;
      }
      if (part[i] == 'a' || part[i] == 'o') {
        const char kind = part[i];
        const std::size_t close = part.find(')', i);
        auto args = parse_args(part.substr(i + 2, close - i - 2));
        if (kind == 'a') {
          append_arc(stroke, args[0], args[1], args[2], args[3], args[4],
                     args[5]);
        } else {
          append_arc(stroke, args[0], args[1], args[2], args[3], 0, 360);
        }
        i = close + 1;
        continue;
      }
      std::size_t next = part.find(' ', i);
      if (next == std::string_view::npos) next = part.size();
      auto args = parse_args(part.substr(i, next - i));
      stroke.emplace_back(args[0], args[1]);
      i = next;
    }
    if (!stroke.empty()) glyph.strokes.push_back(std::move(stroke));
    start = end + 1;
  }
  return glyph;
}

const std::map<char32_t, Glyph>& glyph_table() {
  static const std::map<char32_t, Glyph> table = [] {
    std::map<char32_t, Glyph> t;
    for (const auto& def : kGlyphs) t.emplace(def.ch, parse_glyph(def));
    return t;
  }();
  return table;
}

// Pixel geometry of the canvas.
constexpr double kUnitX = 6.5;
constexpr double kUnitY = 5.0;
constexpr double kTopMargin = 6.0;
constexpr double kSideMargin = 12.0;
constexpr double kMinAdvance = 40.0;
constexpr double kBaselineUnits = 7.0;

std::uint64_t hash_text(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace

std::u32string glyph_characters(GlyphSet set) {
  std::u32string out;
  for (char32_t c = U'a'; c <= U'z'; ++c) out.push_back(c);
  if (set == GlyphSet::kLowercase) return out;
  for (char32_t c = U'A'; c <= U'Z'; ++c) out.push_back(c);
  if (set == GlyphSet::kLetters) return out;
  for (char32_t c = U'0'; c <= U'9'; ++c) out.push_back(c);
  return out;
}

bool has_glyph(char32_t c) { return glyph_table().contains(c); }

WritingStyle style_from_seed(std::uint64_t style_seed) {
  RandomSource rng(derive_seed(style_seed, 0x5719e));
  WritingStyle style;
  style.slant_deg = rng.uniform(-15.0, 15.0);
  style.thickness = static_cast<int>(rng.uniform_int(1, 3));
  style.letter_gap = rng.uniform(4.0, 14.0);
  style.width_scale = rng.uniform(0.85, 1.15);
  style.baseline_jitter = 3.0;
  style.wobble = rng.uniform(0.05, 0.25);
  return style;
}

SynthWord synth_word(std::string_view word, std::uint64_t style_seed) {
  const std::u32string chars = utf8_decode(word);
  if (chars.empty()) throw InvalidArgument("cannot render an empty word");
  std::set<char32_t> unsupported;
  for (char32_t c : chars) {
    if (!has_glyph(c)) unsupported.insert(c);
  }
  if (!unsupported.empty()) {
    std::string list;
    for (char32_t c : unsupported) {
      if (!list.empty()) list += ", ";
      list += "'" + utf8_encode(c) + "'";
    }
    throw InvalidArgument("no glyph for character(s): " + list);
  }

  const WritingStyle style = style_from_seed(style_seed);
  RandomSource rng(derive_seed(style_seed, hash_text(word)));
  const double shear = std::tan(style.slant_deg * std::numbers::pi / 180.0);
  const double baseline_px = kTopMargin + kBaselineUnits * kUnitY;

  // Lay out glyph cells left to right; every cell is at least kMinAdvance
  // wide so that each character owns more than one 32-column encoder frame.
  struct Placed {
    const Glyph* glyph;
    double x0;
    double dy;
  };
  std::vector<Placed> placed;
  const double below = kNormalizedHeight - baseline_px;
  const double left_slack = shear > 0 ? shear * below : -shear * baseline_px;
  const double right_slack = shear > 0 ? shear * baseline_px : -shear * below;
  double cursor = kSideMargin + left_slack;
  for (char32_t c : chars) {
    const Glyph& g = glyph_table().at(c);
    const double glyph_px = g.width * kUnitX * style.width_scale;
    const double advance = std::max(kMinAdvance, glyph_px + style.letter_gap +
                                                      rng.uniform(-2.0, 2.0));
    const double x0 = cursor + (advance - glyph_px) / 2.0;
    const double dy = rng.uniform(-style.baseline_jitter, style.baseline_jitter);
    placed.push_back({&g, x0, dy});
    cursor += advance;
  }
  const int width =
      static_cast<int>(std::ceil(cursor + kSideMargin + right_slack));

  // Supersampled drawing keeps thin anti-aliased strokes deterministic and
  // smooth once averaged back down.
  constexpr int kShift = 4;
  constexpr double kScale = 1 << kShift;
  cv::Mat canvas(kNormalizedHeight, width, CV_8UC1, cv::Scalar(255));
  for (const auto& p : placed) {
    for (const auto& stroke : p.glyph->strokes) {
      std::vector<cv::Point> pts;
      pts.reserve(stroke.size());
      for (const auto& q : stroke) {
        const double ux = q.x + rng.normal(0.0, style.wobble);
        const double uy = q.y + rng.normal(0.0, style.wobble);
        const double y = kTopMargin + uy * kUnitY + p.dy;
        const double x =
            p.x0 + ux * kUnitX * style.width_scale + shear * (baseline_px - y);
        pts.emplace_back(static_cast<int>(std::lround(x * kScale)),
                         static_cast<int>(std::lround(y * kScale)));
      }
      if (pts.size() == 1) pts.push_back(pts.front());
      for (std::size_t i = 1; i < pts.size(); ++i) {
        cv::line(canvas, pts[i - 1], pts[i], cv::Scalar(0), style.thickness,
                 cv::LINE_AA, kShift);
      }
    }
  }

  SynthWord out;
  out.transcript = std::string(word);
  out.raster.height = canvas.rows;
  out.raster.width = canvas.cols;
  out.raster.pixels.assign(canvas.data, canvas.data + canvas.total());
  return out;
}

std::vector<std::string> generate_lexicon(std::size_t count, int min_len,
                                          int max_len, GlyphSet charset,
                                          std::uint64_t seed) {
  if (min_len < 1 || max_len < min_len) {
    throw InvalidArgument("invalid word length range");
  }
  const std::u32string chars = glyph_characters(charset);
  // Capacity check: distinct words without adjacent repeats.
  double capacity = 0.0;
  for (int len = min_len; len <= max_len; ++len) {
    capacity += chars.size() * std::pow(chars.size() - 1.0, len - 1);
  }
  if (static_cast<double>(count) > capacity) {
    throw InvalidArgument("lexicon too small for requested word count");
  }
  RandomSource rng(derive_seed(seed, 0x1e81c0));
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  while (words.size() < count) {
    const int len = static_cast<int>(rng.uniform_int(min_len, max_len));
    std::u32string w;
    while (static_cast<int>(w.size()) < len) {
      const char32_t c =
          chars[static_cast<std::size_t>(rng.uniform_int(0, chars.size() - 1))];
      if (!w.empty() && w.back() == c) continue;
      w.push_back(c);
    }
    std::string utf8 = utf8_encode(w);
    if (seen.insert(utf8).second) words.push_back(std::move(utf8));
  }
  return words;
}

std::filesystem::path write_synth_corpus(const std::filesystem::path& dir,
                                         const SynthCorpusOptions& options) {
  if (options.words == 0 || options.styles < 1 || options.blocks < 1) {
    throw InvalidArgument("synthetic corpus needs words, styles and blocks >= 1");
  }
  const auto words =
      generate_lexicon(options.words, options.min_len, options.max_len,
                       options.charset, options.seed);
  std::filesystem::create_directories(dir / "img");
  const auto labels_path = dir / "labels.tsv";
  std::ofstream labels(labels_path, std::ios::binary);
  if (!labels) throw DataError("cannot write " + labels_path.string());
  for (std::size_t w = 0; w < words.size(); ++w) {
    const int block = 1 + static_cast<int>(w * options.blocks / words.size());
    for (int s = 0; s < options.styles; ++s) {
      const std::uint64_t style_seed =
          derive_seed(options.seed, 0x57e1, static_cast<std::uint64_t>(s));
      const auto rendered = synth_word(words[w], style_seed);
      const std::string rel =
          "img/" + std::to_string(w) + "_" + std::to_string(s) + ".png";
      write_png(dir / rel, rendered.raster);
      labels << rel << '\t' << rendered.transcript << '\t' << block << '\t' << s
             << '\n';
    }
  }
  return labels_path;
}

}  // namespace scribe
