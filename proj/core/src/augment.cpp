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

#include "scribe/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <opencv2/imgproc.hpp>

#include "scribe/errors.hpp"

namespace scribe {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

cv::Mat to_mat(const ImageTensor& image) {
  cv::Mat m(image.height(), image.width(), CV_32FC1);
  std::copy(image.values().begin(), image.values().end(), m.ptr<float>());
  return m;
}

ImageTensor to_image(const cv::Mat& mat) {
  std::vector<float> values(mat.total());
  if (mat.isContinuous()) {
    std::copy(mat.ptr<float>(), mat.ptr<float>() + mat.total(), values.begin());
  } else {
    for (int r = 0; r < mat.rows; ++r) {
      std::copy(mat.ptr<float>(r), mat.ptr<float>(r) + mat.cols,
                values.begin() + static_cast<std::size_t>(r) * mat.cols);
    }
  }
  for (float& v : values) v = std::clamp(v, 0.0f, 1.0f);
  return ImageTensor(mat.rows, mat.cols, std::move(values));
}

double draw(RandomSource& rng, Range r) { return rng.uniform(r.lo, r.hi); }

// Inverse-mapped affine warp about the image centre with background fill.
ImageTensor warp(const ImageTensor& image, const cv::Matx23d& forward,
                 float fill) {
  cv::Mat out;
  cv::warpAffine(to_mat(image), out, cv::Mat(forward),
                 cv::Size(image.width(), image.height()), cv::INTER_LINEAR,
                 cv::BORDER_CONSTANT, cv::Scalar(fill));
  return to_image(out);
}

cv::Matx23d about_centre(const ImageTensor& image, double a, double b,
                         double c, double d) {
  // Maps p -> A (p - centre) + centre with A = [[a, b], [c, d]].
  const double cx = (image.width() - 1) / 2.0;
  const double cy = (image.height() - 1) / 2.0;
  return {a, b, cx - a * cx - b * cy, c, d, cy - c * cx - d * cy};
}

ImageTensor piecewise_affine(const ImageTensor& image, double scale,
                             RandomSource& rng, float fill) {
  // 4x4 control grid spanning the image, each point displaced by
  // N(0, scale * height); displacements are interpolated linearly over the
  // two triangles of each grid cell.
  constexpr int kGrid = 4;
  const int h = image.height();
  const int w = image.width();
  const double sigma = scale * h;
  double dx[kGrid][kGrid];
  double dy[kGrid][kGrid];
  for (int gy = 0; gy < kGrid; ++gy) {
    for (int gx = 0; gx < kGrid; ++gx) {
      dx[gy][gx] = rng.normal(0.0, sigma);
      dy[gy][gx] = rng.normal(0.0, sigma);
    }
  }
  const double cell_w = std::max(1.0, (w - 1) / double(kGrid - 1));
  const double cell_h = std::max(1.0, (h - 1) / double(kGrid - 1));
  cv::Mat map_x(h, w, CV_32FC1);
  cv::Mat map_y(h, w, CV_32FC1);
  for (int y = 0; y < h; ++y) {
    const double fy = std::min(y / cell_h, kGrid - 1.0 - 1e-9);
    const int iy = static_cast<int>(fy);
    const double v = fy - iy;
    for (int x = 0; x < w; ++x) {
      const double fx = std::min(x / cell_w, kGrid - 1.0 - 1e-9);
      const int ix = static_cast<int>(fx);
      const double u = fx - ix;
      // Triangle (00, 10, 11) when u >= v, else (00, 01, 11).
      double wa, wb, wc;
      double ax, ay, bx, by, cx, cy;
      if (u >= v) {
        wa = 1.0 - u;
        wb = u - v;
        wc = v;
        bx = dx[iy][ix + 1];
        by = dy[iy][ix + 1];
      } else {
        wa = 1.0 - v;
        wb = v - u;
        wc = u;
        bx = dx[iy + 1][ix];
        by = dy[iy + 1][ix];
      }
      ax = dx[iy][ix];
      ay = dy[iy][ix];
      cx = dx[iy + 1][ix + 1];
      cy = dy[iy + 1][ix + 1];
      map_x.at<float>(y, x) = static_cast<float>(x + wa * ax + wb * bx + wc * cx);
      map_y.at<float>(y, x) = static_cast<float>(y + wa * ay + wb * by + wc * cy);
    }
  }
  cv::Mat out;
  cv::remap(to_mat(image), out, map_x, map_y, cv::INTER_LINEAR,
            cv::BORDER_CONSTANT, cv::Scalar(fill));
  return to_image(out);
}

ImageTensor sharpen(const ImageTensor& image, double alpha, double lightness) {
  cv::Matx33f kernel;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const double identity = (r == 1 && c == 1) ? 1.0 : 0.0;
      const double effect = (r == 1 && c == 1) ? 8.0 + lightness : -1.0;
      kernel(r, c) = static_cast<float>((1.0 - alpha) * identity + alpha * effect);
    }
  }
  cv::Mat out;
  cv::filter2D(to_mat(image), out, -1, cv::Mat(kernel), cv::Point(-1, -1), 0,
               cv::BORDER_REPLICATE);
  return to_image(out);
}

ImageTensor motion_blur(const ImageTensor& image, int k, double angle_deg) {
  cv::Mat kernel = cv::Mat::zeros(k, k, CV_32FC1);
  const double c = (k - 1) / 2.0;
  const double ca = std::cos(angle_deg * kDegToRad);
  const double sa = std::sin(angle_deg * kDegToRad);
  const int steps = 4 * k;
  for (int i = 0; i <= steps; ++i) {
    const double t = -c + 2.0 * c * i / steps;
    const int x = static_cast<int>(std::lround(c + t * ca));
    const int y = static_cast<int>(std::lround(c - t * sa));
    kernel.at<float>(y, x) = 1.0f;
  }
  kernel /= cv::sum(kernel)[0];
  cv::Mat out;
  cv::filter2D(to_mat(image), out, -1, kernel, cv::Point(-1, -1), 0,
               cv::BORDER_REPLICATE);
  return to_image(out);
}

}  // namespace

std::string transform_name(Transform t) {
  switch (t) {
    case Transform::kScaleX: return "ScaleX";
    case Transform::kScaleY: return "ScaleY";
    case Transform::kTranslateX: return "TranslateX";
    case Transform::kTranslateY: return "TranslateY";
    case Transform::kRotate: return "Rotate";
    case Transform::kShearX: return "ShearX";
    case Transform::kPiecewiseAffine: return "PiecewiseAffine";
    case Transform::kSharpen: return "Sharpen";
    case Transform::kLinearContrast: return "LinearContrast";
    case Transform::kMotionBlur: return "MotionBlur";
    case Transform::kGaussianBlur: return "GaussianBlur";
    case Transform::kAdditiveGaussianNoise: return "AdditiveGaussianNoise";
  }
  return "?";
}

bool is_photometric(Transform t) {
  return t == Transform::kSharpen || t == Transform::kLinearContrast ||
         t == Transform::kAdditiveGaussianNoise;
}

AugmentConfig AugmentConfig::pretrain() { return AugmentConfig{}; }

AugmentConfig AugmentConfig::supervised() {
  AugmentConfig config;
  config.stage = AugmentStage::kSupervised;
  return config;
}

std::vector<Transform> AugmentConfig::candidates() const {
  std::vector<Transform> out;
  for (int i = 0; i < kTransformCount; ++i) {
    const auto t = static_cast<Transform>(i);
    if (stage == AugmentStage::kSupervised &&
        (t == Transform::kShearX || t == Transform::kPiecewiseAffine ||
         t == Transform::kScaleX || t == Transform::kScaleY)) {
      continue;
    }
    out.push_back(t);
  }
  return out;
}

void AugmentConfig::validate() const {
  const std::pair<const char*, Range> ranges[] = {
      {"scale_x", scale_x},
      {"scale_y", scale_y},
      {"translate_x", translate_x},
      {"translate_y", translate_y},
      {"rotate_deg", rotate_deg},
      {"shear_x_deg", shear_x_deg},
      {"piecewise_scale", piecewise_scale},
      {"sharpen_alpha", sharpen_alpha},
      {"sharpen_lightness", sharpen_lightness},
      {"contrast", contrast},
      {"gaussian_sigma", gaussian_sigma},
      {"noise_std", noise_std},
  };
  for (const auto& [name, r] : ranges) {
    if (!(r.lo <= r.hi)) {
      throw InvalidArgument(std::string("augment range ") + name +
                            " is empty");
    }
  }
  if (motion_kernel[0] < 3 || motion_kernel[1] < motion_kernel[0]) {
    throw InvalidArgument("augment motion_kernel must be an increasing pair >= 3");
  }
  if (max_transforms < 1) {
    throw InvalidArgument("augment max_transforms must be >= 1");
  }
  for (double p : {erode_probability, dilate_probability}) {
    if (p < 0.0 || p > 1.0) {
      throw InvalidArgument("augment probabilities must be in [0, 1]");
    }
  }
}

ImageTensor erode3x3(const ImageTensor& image) {
  cv::Mat out;
  cv::erode(to_mat(image), out, cv::Mat::ones(3, 3, CV_8U));
  return to_image(out);
}

ImageTensor dilate3x3(const ImageTensor& image) {
  cv::Mat out;
  cv::dilate(to_mat(image), out, cv::Mat::ones(3, 3, CV_8U));
  return to_image(out);
}

ImageTensor apply_transform(const ImageTensor& image, Transform t,
                            const AugmentConfig& config, RandomSource& rng) {
  const float fill = config.fill;
  switch (t) {
    case Transform::kScaleX:
      return warp(image, about_centre(image, draw(rng, config.scale_x), 0, 0, 1),
                  fill);
    case Transform::kScaleY:
      return warp(image, about_centre(image, 1, 0, 0, draw(rng, config.scale_y)),
                  fill);
    case Transform::kTranslateX: {
      const double shift = draw(rng, config.translate_x) * image.width();
      return warp(image, cv::Matx23d(1, 0, shift, 0, 1, 0), fill);
    }
    case Transform::kTranslateY: {
      const double shift = draw(rng, config.translate_y) * image.height();
      return warp(image, cv::Matx23d(1, 0, 0, 0, 1, shift), fill);
    }
    case Transform::kRotate: {
      const double a = draw(rng, config.rotate_deg) * kDegToRad;
      return warp(image,
                  about_centre(image, std::cos(a), -std::sin(a), std::sin(a),
                               std::cos(a)),
                  fill);
    }
    case Transform::kShearX: {
      const double s = std::tan(draw(rng, config.shear_x_deg) * kDegToRad);
      return warp(image, about_centre(image, 1, s, 0, 1), fill);
    }
    case Transform::kPiecewiseAffine:
      return piecewise_affine(image, draw(rng, config.piecewise_scale), rng,
                              fill);
    case Transform::kSharpen: {
      const double alpha = draw(rng, config.sharpen_alpha);
      const double lightness = draw(rng, config.sharpen_lightness);
      return sharpen(image, alpha, lightness);
    }
    case Transform::kLinearContrast: {
      const double alpha = draw(rng, config.contrast);
      constexpr double kCentre = 128.0 / 255.0;
      ImageTensor out = image;
      for (float& v : out.values()) {
        v = std::clamp(static_cast<float>(kCentre + alpha * (v - kCentre)),
                       0.0f, 1.0f);
      }
      return out;
    }
    case Transform::kMotionBlur: {
      const int k = config.motion_kernel[0] +
                    2 * static_cast<int>(rng.uniform_int(
                            0, (config.motion_kernel[1] - config.motion_kernel[0]) / 2));
      const double angle = rng.uniform(0.0, 180.0);
      return motion_blur(image, k, angle);
    }
    case Transform::kGaussianBlur: {
      const double sigma = draw(rng, config.gaussian_sigma);
      cv::Mat out;
      cv::GaussianBlur(to_mat(image), out, cv::Size(0, 0), sigma, sigma,
                       cv::BORDER_REPLICATE);
      return to_image(out);
    }
    case Transform::kAdditiveGaussianNoise: {
      const double stddev = draw(rng, config.noise_std) / 255.0;
      ImageTensor out = image;
      for (float& v : out.values()) {
        v = std::clamp(static_cast<float>(v + rng.normal(0.0, stddev)), 0.0f,
                       1.0f);
      }
      return out;
    }
  }
  throw InvalidArgument("unknown transform");
}

ImageTensor augment(const ImageTensor& image, const AugmentConfig& config,
                    RandomSource& rng, AugmentTrace* trace) {
  if (image.empty()) throw InvalidArgument("cannot augment an empty image");
  AugmentTrace local;
  AugmentTrace& record = trace ? *trace : local;
  record = AugmentTrace{};

  ImageTensor out = image;
  if (rng.uniform() < config.erode_probability) {
    record.morphology = Morphology::kErode;
    out = erode3x3(out);
  } else if (rng.uniform() < config.dilate_probability) {
    record.morphology = Morphology::kDilate;
    out = dilate3x3(out);
  }

  auto pool = config.candidates();
  const int upper = std::min<int>(config.max_transforms, static_cast<int>(pool.size()));
  const int k = static_cast<int>(rng.uniform_int(1, upper));
  // Partial Fisher-Yates picks k distinct candidates uniformly.
  for (int i = 0; i < k; ++i) {
    const auto j = rng.uniform_int(i, static_cast<std::int64_t>(pool.size()) - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Transform> chosen(pool.begin(), pool.begin() + k);
  std::sort(chosen.begin(), chosen.end());
  for (Transform t : chosen) {
    out = apply_transform(out, t, config, rng);
    record.applied.push_back(t);
  }
  return out;
}

ImageTensor augment_pretrain(const ImageTensor& image, RandomSource& rng,
                             AugmentTrace* trace) {
  return augment(image, AugmentConfig::pretrain(), rng, trace);
}

ImageTensor augment_supervised(const ImageTensor& image, RandomSource& rng,
                               AugmentTrace* trace) {
  return augment(image, AugmentConfig::supervised(), rng, trace);
}

}  // namespace scribe
