// Copyright (c) the fsg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fsg/image.hpp"

#include <cmath>

#include "fsg/errors.hpp"

namespace fsg {

ImageTensor::ImageTensor(Tensor chw, std::string tag)
    : data_(std::move(chw)), tag_(std::move(tag)) {
  if (data_.rank() != 3 || data_.dim(0) != 3) {
    throw shape_error("imagecore", "image must be {3,H,W}");
  }
  h_ = data_.dim(1);
  w_ = data_.dim(2);
  if (h_ < 8 || w_ < 8) {
    throw shape_error("imagecore", "image smaller than 8x8");
  }
  for (int64_t i = 0; i < data_.size(); ++i) {
    const double v = data_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw shape_error("imagecore", "image value outside [0,1] or non-finite");
    }
  }
}

ImageTensor ImageTensor::unchecked(Tensor chw, std::string tag) {
  if (chw.rank() != 3 || chw.dim(0) != 3) {
    throw shape_error("imagecore", "image must be {3,H,W}");
  }
  ImageTensor img;
  img.h_ = chw.dim(1);
  img.w_ = chw.dim(2);
  img.data_ = std::move(chw);
  img.tag_ = std::move(tag);
  return img;
}

FaceMask::FaceMask(Tensor hw) : data_(std::move(hw)) {
  if (data_.rank() != 2) throw shape_error("imagecore", "mask must be {H,W}");
  int64_t ones = 0;
  for (int64_t i = 0; i < data_.size(); ++i) {
    if (data_[i] != 0.0 && data_[i] != 1.0) {
      throw shape_error("imagecore", "mask values must be exactly 0 or 1");
    }
    if (data_[i] == 1.0) ++ones;
  }
  if (ones == 0) throw shape_error("imagecore", "mask selects no pixels");
  coverage_ = static_cast<double>(ones) / static_cast<double>(data_.size());
}

PerturbationBudget PerturbationBudget::from_255(int eps_255) {
  if (eps_255 < 1 || eps_255 > 32) {
    throw config_error("imagecore", "epsilon_255 must be in [1,32], got " +
                                        std::to_string(eps_255));
  }
  PerturbationBudget b;
  b.epsilon_255 = eps_255;
  b.epsilon = static_cast<double>(eps_255) / 255.0;
  return b;
}

int quantize_byte(double v) {
  double scaled = v * 255.0;
  // round half away from zero (scaled is nonnegative for in-range values)
  int q = static_cast<int>(std::floor(scaled + 0.5));
  if (q < 0) q = 0;
  if (q > 255) q = 255;
  return q;
}

ImageTensor clip_eps(const ImageTensor& candidate, const ImageTensor& source,
                     const PerturbationBudget& budget) {
  if (!candidate.data().same_shape(source.data())) {
    throw shape_error("imagecore", "clip_eps: candidate/source shape mismatch");
  }
  const double eps = budget.epsilon;
  Tensor out = candidate.data();
  const Tensor& src = source.data();
  for (int64_t i = 0; i < out.size(); ++i) {
    const double lo = src[i] - eps;
    const double hi = src[i] + eps;
    if (out[i] < lo) out[i] = lo;
    if (out[i] > hi) out[i] = hi;
  }
  return ImageTensor::unchecked(std::move(out), candidate.tag());
}

ImageTensor clip_image(const ImageTensor& img) {
  Tensor out = img.data();
  for (int64_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) out[i] = 0.0;
    if (out[i] > 1.0) out[i] = 1.0;
  }
  return ImageTensor(std::move(out), img.tag());
}

ImageTensor apply_mask(const ImageTensor& img, const FaceMask& mask) {
  if (mask.height() != img.height() || mask.width() != img.width()) {
    throw shape_error("imagecore", "apply_mask: mask/image shape mismatch");
  }
  Tensor out = img.data();
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x) out.at(c, y, x) *= mask.at(y, x);
  return ImageTensor(std::move(out), img.tag());
}

FaceMask default_mask(int h, int w) {
  if (h < 8 || w < 8) throw shape_error("imagecore", "default_mask: size < 8");
  const double cy = h / 2.0, cx = w / 2.0;
  const double ay = 0.40 * h, ax = 0.33 * w;
  Tensor m({h, w});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dy = (y + 0.5 - cy) / ay;
      const double dx = (x + 0.5 - cx) / ax;
      m.at(y, x) = (dy * dy + dx * dx <= 1.0) ? 1.0 : 0.0;
    }
  }
  return FaceMask(std::move(m));
}

double linf_distance(const ImageTensor& a, const ImageTensor& b) {
  return max_abs_diff(a.data(), b.data());
}

}  // namespace fsg
