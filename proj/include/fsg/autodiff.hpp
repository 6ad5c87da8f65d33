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

#ifndef FSG_AUTODIFF_HPP_
#define FSG_AUTODIFF_HPP_

#include <functional>
#include <memory>
#include <vector>

#include "fsg/tensor.hpp"

namespace fsg::ad {

// Reverse-mode autodiff over small dynamic graphs. Each op builds a Node
// holding its value and a closure that scatters the node's gradient into its
// parents. Backward passes run once per graph; graphs are rebuilt per
// evaluation (they are tiny relative to the conv arithmetic).
//
// All arithmetic is double precision: gradient checks against central finite
// differences are part of the library's contract.
struct Node {
  Tensor value;
  Tensor grad;  // allocated on first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  void accumulate(const Tensor& g);
  Tensor& grad_buffer();  // zero-allocates to value's shape if empty
};

using NodeRef = std::shared_ptr<Node>;

NodeRef leaf(Tensor value, bool requires_grad = false);

// Elementwise, same shape.
NodeRef add(const NodeRef& a, const NodeRef& b);
NodeRef sub(const NodeRef& a, const NodeRef& b);
NodeRef mul(const NodeRef& a, const NodeRef& b);
// k * x + c elementwise.
NodeRef affine(const NodeRef& x, double k, double c);
NodeRef tanh_act(const NodeRef& x);
NodeRef sigmoid_act(const NodeRef& x);
// Clamp to [0,1]; pass-through gradient strictly inside, zero outside.
NodeRef clamp01(const NodeRef& x);

// Reductions / scalars (shape {1}).
NodeRef sum_all(const NodeRef& x);
NodeRef mean_all(const NodeRef& x);
NodeRef dot(const NodeRef& a, const NodeRef& b);  // over flattened elements
NodeRef sqrt_scalar(const NodeRef& x);
NodeRef div_scalar(const NodeRef& a, const NodeRef& b);
NodeRef mul_scalars(const NodeRef& a, const NodeRef& b);

// Vector / image ops.
NodeRef flatten(const NodeRef& x);
NodeRef l2_normalize(const NodeRef& x);
// y = W x + b, W {M,N}, x {N}, b {M}.
NodeRef dense(const NodeRef& x, const NodeRef& w, const NodeRef& b);
// x {C,H,W}, w {OC,IC,KH,KW}, b {OC}; zero padding.
NodeRef conv2d(const NodeRef& x, const NodeRef& w, const NodeRef& b,
               int stride, int pad);
NodeRef upsample2_nearest(const NodeRef& x);
NodeRef concat_channels(const NodeRef& a, const NodeRef& b);
// Tile vector v {N} to a {N,H,W} map.
NodeRef broadcast_to_map(const NodeRef& v, int h, int w);
// Multiply {C,H,W} by a constant {H,W} mask, broadcast over channels.
NodeRef mask_mul(const NodeRef& x, const Tensor& mask);
// Separable convolution along H then W with a fixed normalized 1-D kernel;
// reflect-101 boundary handling.
NodeRef separable_filter(const NodeRef& x, const std::vector<double>& kernel);
// Crop window (y0,x0,ch,cw) out of {C,H,W}, bilinear-resize to (out_h,out_w).
// Half-pixel-center sampling; identity when the window is the full image at
// the same output size.
NodeRef bilinear_crop_resize(const NodeRef& x, double y0, double x0, double ch,
                             double cw, int out_h, int out_w);

// Run reverse-mode accumulation from a scalar root (shape {1}).
void backward(const NodeRef& root);

}  // namespace fsg::ad

#endif  // FSG_AUTODIFF_HPP_
