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

#ifndef FSG_TENSOR_HPP_
#define FSG_TENSOR_HPP_

#include <cstdint>
#include <vector>

namespace fsg {

// Dense row-major double tensor. Images are stored as {C, H, W}, masks as
// {H, W}, vectors as {N}. Rank never exceeds 4 ({OC, IC, KH, KW} conv
// weights).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, double fill);

  static Tensor zeros_like(const Tensor& t) { return Tensor(t.shape_); }

  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  // {H, W} access.
  double& at(int y, int x) { return data_[idx2(y, x)]; }
  double at(int y, int x) const { return data_[idx2(y, x)]; }
  // {C, H, W} access.
  double& at(int c, int y, int x) { return data_[idx3(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[idx3(c, y, x)]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  void fill(double v);
  void add_scaled(const Tensor& other, double s);  // *this += s * other

  double max_abs() const;
  double min_value() const;
  double max_value() const;
  double sum() const;

 private:
  size_t idx2(int y, int x) const {
    return static_cast<size_t>(y) * shape_[1] + x;
  }
  size_t idx3(int c, int y, int x) const {
    return (static_cast<size_t>(c) * shape_[1] + y) * shape_[2] + x;
  }

  std::vector<int> shape_;
  std::vector<double> data_;
};

bool tensors_equal(const Tensor& a, const Tensor& b);  // exact, bitwise values
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace fsg

#endif  // FSG_TENSOR_HPP_
