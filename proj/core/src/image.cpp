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

#include "scribe/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "scribe/errors.hpp"

namespace scribe {
namespace {

cv::Mat as_mat(const ImageTensor& image) {
  // OpenCV only reads through this header; callers clone before writing.
  return cv::Mat(image.height(), image.width(), CV_32FC1,
                 const_cast<float*>(image.values().data()));
}

ImageTensor from_mat(const cv::Mat& mat) {
  cv::Mat m = mat.isContinuous() ? mat : mat.clone();
  std::vector<float> values(m.ptr<float>(), m.ptr<float>() + m.total());
  return ImageTensor(m.rows, m.cols, std::move(values));
}

}  // namespace

ImageTensor::ImageTensor(int height, int width, float fill)
    : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw InvalidArgument("image dimensions must be positive, got " +
                          std::to_string(height) + "x" + std::to_string(width));
  }
  values_.assign(static_cast<std::size_t>(height) * width, fill);
}

ImageTensor::ImageTensor(int height, int width, std::vector<float> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (height < 1 || width < 1) {
    throw InvalidArgument("image dimensions must be positive, got " +
                          std::to_string(height) + "x" + std::to_string(width));
  }
  if (values_.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidArgument("image value count does not match its shape");
  }
}

double ImageTensor::ink_mass() const {
  double sum = 0.0;
  for (float v : values_) sum += 1.0 - v;
  return sum;
}

int normalized_width(int height, int width) {
  if (height < 1 || width < 1) {
    throw InvalidArgument("cannot normalize an empty raster");
  }
  // round-half-up of width * 64 / height in integer arithmetic
  const long long num = 2LL * width * kNormalizedHeight + height;
  return std::max(1, static_cast<int>(num / (2LL * height)));
}

ImageTensor normalize_image(const Raster& raw) {
  if (raw.empty() ||
      raw.pixels.size() != static_cast<std::size_t>(raw.height) * raw.width) {
    throw InvalidArgument("cannot normalize an empty raster");
  }
  std::vector<float> values(raw.pixels.size());
  std::transform(raw.pixels.begin(), raw.pixels.end(), values.begin(),
                 [](std::uint8_t p) { return static_cast<float>(p) / 255.0f; });
  return normalize_image(ImageTensor(raw.height, raw.width, std::move(values)));
}

ImageTensor normalize_image(const ImageTensor& image) {
  if (image.empty()) throw InvalidArgument("cannot normalize an empty image");
  const int width = normalized_width(image.height(), image.width());
  if (image.height() == kNormalizedHeight && width == image.width()) {
    return image;
  }
  ImageTensor out = resize_bilinear(image, kNormalizedHeight, width);
  for (float& v : out.values()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

ImageTensor resize_bilinear(const ImageTensor& image, int height, int width) {
  if (height < 1 || width < 1) {
    throw InvalidArgument("resize target must be positive");
  }
  if (height == image.height() && width == image.width()) return image;
  cv::Mat out;
  cv::resize(as_mat(image), out, cv::Size(width, height), 0, 0,
             cv::INTER_LINEAR);
  return from_mat(out);
}

ImageTensor crop(const ImageTensor& image, int y, int x, int height,
                 int width) {
  if (y < 0 || x < 0 || height < 1 || width < 1 ||
      y + height > image.height() || x + width > image.width()) {
    throw InvalidArgument("crop window out of bounds");
  }
  ImageTensor out(height, width);
  for (int r = 0; r < height; ++r) {
    const float* src = image.values().data() +
                       static_cast<std::size_t>(y + r) * image.width() + x;
    std::copy(src, src + width, out.values().data() +
                                    static_cast<std::size_t>(r) * width);
  }
  return out;
}

ImageTensor crop_columns(const ImageTensor& image, int x, int width) {
  return crop(image, 0, x, image.height(), width);
}

ImageTensor pad_right(const ImageTensor& image, int min_width) {
  if (image.width() >= min_width) return image;
  ImageTensor out(image.height(), min_width, kBackground);
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) out.at(r, c) = image.at(r, c);
  }
  return out;
}

ImageTensor concat_columns(std::span<const ImageTensor> parts) {
  if (parts.empty()) throw InvalidArgument("nothing to concatenate");
  const int height = parts.front().height();
  int width = 0;
  for (const auto& p : parts) {
    if (p.height() != height) {
      throw InvalidArgument("concatenated parts must share a height");
    }
    width += p.width();
  }
  ImageTensor out(height, width);
  int offset = 0;
  for (const auto& p : parts) {
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < p.width(); ++c) out.at(r, offset + c) = p.at(r, c);
    }
    offset += p.width();
  }
  return out;
}

ImageTensor rotate_quarter_turns(const ImageTensor& image, int quarter_turns) {
  const int turns = ((quarter_turns % 4) + 4) % 4;
  const int h = image.height();
  const int w = image.width();
  switch (turns) {
    case 0:
      return image;
    case 1: {  // 90 ccw: out(r, c) = in(c, w - 1 - r)
      ImageTensor out(w, h);
      for (int r = 0; r < w; ++r)
        for (int c = 0; c < h; ++c) out.at(r, c) = image.at(c, w - 1 - r);
      return out;
    }
    case 2: {
      ImageTensor out(h, w);
      for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) out.at(r, c) = image.at(h - 1 - r, w - 1 - c);
      return out;
    }
    default: {  // 270 ccw: out(r, c) = in(h - 1 - c, r)
      ImageTensor out(w, h);
      for (int r = 0; r < w; ++r)
        for (int c = 0; c < h; ++c) out.at(r, c) = image.at(h - 1 - c, r);
      return out;
    }
  }
}

ImageTensor flip_horizontal(const ImageTensor& image) {
  ImageTensor out(image.height(), image.width());
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c)
      out.at(r, c) = image.at(r, image.width() - 1 - c);
  return out;
}

ImageTensor flip_vertical(const ImageTensor& image) {
  ImageTensor out(image.height(), image.width());
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c)
      out.at(r, c) = image.at(image.height() - 1 - r, c);
  return out;
}

Raster to_raster(const ImageTensor& image) {
  Raster raster{image.height(), image.width(), {}};
  raster.pixels.reserve(image.values().size());
  for (float v : image.values()) {
    raster.pixels.push_back(static_cast<std::uint8_t>(
        std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f)));
  }
  return raster;
}

Raster read_png(const std::filesystem::path& path) {
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (mat.empty()) throw DataError("cannot read image: " + path.string());
  if (!mat.isContinuous()) mat = mat.clone();
  Raster raster{mat.rows, mat.cols, {}};
  raster.pixels.assign(mat.data, mat.data + mat.total());
  return raster;
}

void write_png(const std::filesystem::path& path, const Raster& raster) {
  if (raster.empty()) throw InvalidArgument("cannot write an empty raster");
  cv::Mat mat(raster.height, raster.width, CV_8UC1,
              const_cast<std::uint8_t*>(raster.pixels.data()));
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  if (!cv::imwrite(path.string(), mat)) {
    throw DataError("cannot write image: " + path.string());
  }
}

}  // namespace scribe
