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

#ifndef FSG_IMAGE_HPP_
#define FSG_IMAGE_HPP_

#include <string>

#include "fsg/tensor.hpp"

namespace fsg {

// RGB image with values in [0,1], stored {3, H, W}. Immutable by convention:
// operations return new values.
class ImageTensor {
 public:
  ImageTensor() = default;
  // Validates: finite values in [0,1], H and W at least 8.
  ImageTensor(Tensor chw, std::string tag);
  // For intermediates that are about to be clipped; skips range validation.
  static ImageTensor unchecked(Tensor chw, std::string tag);

  int height() const { return h_; }
  int width() const { return w_; }
  const std::string& tag() const { return tag_; }
  const Tensor& data() const { return data_; }
  Tensor& mutable_data() { return data_; }

  double at(int c, int y, int x) const { return data_.at(c, y, x); }

 private:
  Tensor data_;
  int h_ = 0, w_ = 0;
  std::string tag_;
};

// Binary facial-region mask {H, W}; every value exactly 0 or 1 and at least
// one pixel set.
class FaceMask {
 public:
  FaceMask() = default;
  explicit FaceMask(Tensor hw);

  int height() const { return data_.dim(0); }
  int width() const { return data_.dim(1); }
  double coverage() const { return coverage_; }
  const Tensor& data() const { return data_; }
  double at(int y, int x) const { return data_.at(y, x); }

 private:
  Tensor data_;
  double coverage_ = 0.0;
};

// L-inf budget, user-facing in 8-bit pixel units, internal in [0,1].
struct PerturbationBudget {
  int epsilon_255 = 9;
  double epsilon = 9.0 / 255.0;

  static PerturbationBudget from_255(int eps_255);
};

// Quantization rule shared by save_image and tests: round half away from
// zero onto [0,255].
int quantize_byte(double v);

ImageTensor load_image(const std::string& path);
void save_image(const ImageTensor& img, const std::string& path);
FaceMask load_mask(const std::string& path);
void save_mask(const FaceMask& mask, const std::string& path);

// Coordinate-wise projection of `candidate` onto the eps-ball around
// `source` (intersected with nothing else; range clipping is separate).
ImageTensor clip_eps(const ImageTensor& candidate, const ImageTensor& source,
                     const PerturbationBudget& budget);
// Elementwise clamp to [0,1].
ImageTensor clip_image(const ImageTensor& img);
// img * mask, broadcast over channels.
ImageTensor apply_mask(const ImageTensor& img, const FaceMask& mask);
// Axis-aligned ellipse centered at (h/2, w/2), semi-axes (0.40 h, 0.33 w).
FaceMask default_mask(int h, int w);

double linf_distance(const ImageTensor& a, const ImageTensor& b);

}  // namespace fsg

#endif  // FSG_IMAGE_HPP_
