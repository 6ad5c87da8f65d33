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

#include "fsg/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fsg/errors.hpp"

namespace fsg::ad {

namespace {

NodeRef make_node(Tensor value, std::vector<NodeRef> parents,
                  std::function<void(Node&)> backward_fn) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->parents = std::move(parents);
  for (const auto& p : n->parents) {
    if (p->requires_grad) {
      n->requires_grad = true;
      break;
    }
  }
  if (n->requires_grad) n->backward_fn = std::move(backward_fn);
  return n;
}

void check_same_shape(const NodeRef& a, const NodeRef& b, const char* op) {
  if (!a->value.same_shape(b->value)) {
    throw shape_error("autodiff", std::string(op) + ": shape mismatch");
  }
}

void check_scalar(const NodeRef& x, const char* op) {
  if (x->value.size() != 1) {
    throw shape_error("autodiff", std::string(op) + ": expected scalar");
  }
}

// Reflect-101 index mapping: -1 -> 1, n -> n-2. Valid for |overshoot| < n.
inline int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

}  // namespace

void Node::accumulate(const Tensor& g) { grad_buffer().add_scaled(g, 1.0); }

Tensor& Node::grad_buffer() {
  if (grad.empty()) grad = Tensor(value.shape());
  return grad;
}

NodeRef leaf(Tensor value, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  return n;
}

NodeRef add(const NodeRef& a, const NodeRef& b) {
  check_same_shape(a, b, "add");
  Tensor out = a->value;
  out.add_scaled(b->value, 1.0);
  return make_node(std::move(out), {a, b}, [](Node& n) {
    if (n.parents[0]->requires_grad) n.parents[0]->accumulate(n.grad);
    if (n.parents[1]->requires_grad) n.parents[1]->accumulate(n.grad);
  });
}

NodeRef sub(const NodeRef& a, const NodeRef& b) {
  check_same_shape(a, b, "sub");
  Tensor out = a->value;
  out.add_scaled(b->value, -1.0);
  return make_node(std::move(out), {a, b}, [](Node& n) {
    if (n.parents[0]->requires_grad) n.parents[0]->accumulate(n.grad);
    if (n.parents[1]->requires_grad)
      n.parents[1]->grad_buffer().add_scaled(n.grad, -1.0);
  });
}

NodeRef mul(const NodeRef& a, const NodeRef& b) {
  check_same_shape(a, b, "mul");
  Tensor out = a->value;
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= b->value[i];
  return make_node(std::move(out), {a, b}, [](Node& n) {
    Node& pa = *n.parents[0];
    Node& pb = *n.parents[1];
    if (pa.requires_grad) {
      Tensor& ga = pa.grad_buffer();
      for (int64_t i = 0; i < n.grad.size(); ++i)
        ga[i] += n.grad[i] * pb.value[i];
    }
    if (pb.requires_grad) {
      Tensor& gb = pb.grad_buffer();
      for (int64_t i = 0; i < n.grad.size(); ++i)
        gb[i] += n.grad[i] * pa.value[i];
    }
  });
}

NodeRef affine(const NodeRef& x, double k, double c) {
  Tensor out = x->value;
  for (int64_t i = 0; i < out.size(); ++i) out[i] = k * out[i] + c;
  return make_node(std::move(out), {x}, [k](Node& n) {
    n.parents[0]->grad_buffer().add_scaled(n.grad, k);
  });
}

NodeRef tanh_act(const NodeRef& x) {
  Tensor out = x->value;
  for (int64_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  return make_node(std::move(out), {x}, [](Node& n) {
    Tensor& gx = n.parents[0]->grad_buffer();
    for (int64_t i = 0; i < n.grad.size(); ++i) {
      double y = n.value[i];
      gx[i] += n.grad[i] * (1.0 - y * y);
    }
  });
}

NodeRef sigmoid_act(const NodeRef& x) {
  Tensor out = x->value;
  for (int64_t i = 0; i < out.size(); ++i)
    out[i] = 1.0 / (1.0 + std::exp(-out[i]));
  return make_node(std::move(out), {x}, [](Node& n) {
    Tensor& gx = n.parents[0]->grad_buffer();
    for (int64_t i = 0; i < n.grad.size(); ++i) {
      double y = n.value[i];
      gx[i] += n.grad[i] * y * (1.0 - y);
    }
  });
}

NodeRef clamp01(const NodeRef& x) {
  Tensor out = x->value;
  for (int64_t i = 0; i < out.size(); ++i)
    out[i] = std::min(1.0, std::max(0.0, out[i]));
  return make_node(std::move(out), {x}, [](Node& n) {
    Tensor& gx = n.parents[0]->grad_buffer();
    const Tensor& in = n.parents[0]->value;
    for (int64_t i = 0; i < n.grad.size(); ++i) {
      if (in[i] > 0.0 && in[i] < 1.0) gx[i] += n.grad[i];
    }
  });
}

NodeRef sum_all(const NodeRef& x) {
  Tensor out({1});
  out[0] = x->value.sum();
  return make_node(std::move(out), {x}, [](Node& n) {
    n.parents[0]->grad_buffer().add_scaled(
        Tensor(n.parents[0]->value.shape(), 1.0), n.grad[0]);
  });
}

NodeRef mean_all(const NodeRef& x) {
  const double inv = 1.0 / static_cast<double>(x->value.size());
  Tensor out({1});
  out[0] = x->value.sum() * inv;
  return make_node(std::move(out), {x}, [inv](Node& n) {
    Tensor& gx = n.parents[0]->grad_buffer();
    double g = n.grad[0] * inv;
    for (int64_t i = 0; i < gx.size(); ++i) gx[i] += g;
  });
}

NodeRef dot(const NodeRef& a, const NodeRef& b) {
  if (a->value.size() != b->value.size()) {
    throw shape_error("autodiff", "dot: size mismatch");
  }
  Tensor out({1});
  double s = 0.0;
  for (int64_t i = 0; i < a->value.size(); ++i) s += a->value[i] * b->value[i];
  out[0] = s;
  return make_node(std::move(out), {a, b}, [](Node& n) {
    Node& pa = *n.parents[0];
    Node& pb = *n.parents[1];
    double g = n.grad[0];
    if (pa.requires_grad) pa.grad_buffer().add_scaled(pb.value, g);
    if (pb.requires_grad) pb.grad_buffer().add_scaled(pa.value, g);
  });
}

NodeRef sqrt_scalar(const NodeRef& x) {
  check_scalar(x, "sqrt_scalar");
  Tensor out({1});
  out[0] = std::sqrt(x->value[0]);
  return make_node(std::move(out), {x}, [](Node& n) {
    double y = n.value[0];
    n.parents[0]->grad_buffer()[0] += n.grad[0] * 0.5 / std::max(y, 1e-300);
  });
}

NodeRef div_scalar(const NodeRef& a, const NodeRef& b) {
  check_scalar(a, "div_scalar");
  check_scalar(b, "div_scalar");
  Tensor out({1});
  out[0] = a->value[0] / b->value[0];
  return make_node(std::move(out), {a, b}, [](Node& n) {
    double bv = n.parents[1]->value[0];
    double g = n.grad[0];
    if (n.parents[0]->requires_grad) n.parents[0]->grad_buffer()[0] += g / bv;
    if (n.parents[1]->requires_grad)
      n.parents[1]->grad_buffer()[0] += -g * n.value[0] / bv;
  });
}

NodeRef mul_scalars(const NodeRef& a, const NodeRef& b) {
  check_scalar(a, "mul_scalars");
  check_scalar(b, "mul_scalars");
  Tensor out({1});
  out[0] = a->value[0] * b->value[0];
  return make_node(std::move(out), {a, b}, [](Node& n) {
    double g = n.grad[0];
    if (n.parents[0]->requires_grad)
      n.parents[0]->grad_buffer()[0] += g * n.parents[1]->value[0];
    if (n.parents[1]->requires_grad)
      n.parents[1]->grad_buffer()[0] += g * n.parents[0]->value[0];
  });
}

NodeRef flatten(const NodeRef& x) {
  Tensor out({static_cast<int>(x->value.size())});
  for (int64_t i = 0; i < out.size(); ++i) out[i] = x->value[i];
  return make_node(std::move(out), {x}, [](Node& n) {
    Tensor& gx = n.parents[0]->grad_buffer();
    for (int64_t i = 0; i < n.grad.size(); ++i) gx[i] += n.grad[i];
  });
}

NodeRef l2_normalize(const NodeRef& x) {
  double norm_sq = 0.0;
  for (int64_t i = 0; i < x->value.size(); ++i)
    norm_sq += x->value[i] * x->value[i];
  const double norm = std::sqrt(std::max(norm_sq, 1e-24));
  Tensor out = x->value;
  for (int64_t i = 0; i < out.size(); ++i) out[i] /= norm;
  return make_node(std::move(out), {x}, [norm](Node& n) {
    // d/dx (x/|x|) : g -> (g - y <g,y>) / |x|
    double gy = 0.0;
    for (int64_t i = 0; i < n.grad.size(); ++i) gy += n.grad[i] * n.value[i];
    Tensor& gx = n.parents[0]->grad_buffer();
    for (int64_t i = 0; i < n.grad.size(); ++i)
      gx[i] += (n.grad[i] - n.value[i] * gy) / norm;
  });
}

NodeRef dense(const NodeRef& x, const NodeRef& w, const NodeRef& b) {
  const int n_in = x->value.dim(0);
  const int n_out = w->value.dim(0);
  if (w->value.rank() != 2 || w->value.dim(1) != n_in ||
      b->value.dim(0) != n_out) {
    throw shape_error("autodiff", "dense: inconsistent shapes");
  }
  Tensor out({n_out});
  const double* xv = x->value.data();
  const double* wv = w->value.data();
  for (int m = 0; m < n_out; ++m) {
    double s = b->value[m];
    const double* row = wv + static_cast<int64_t>(m) * n_in;
    for (int i = 0; i < n_in; ++i) s += row[i] * xv[i];
    out[m] = s;
  }
  return make_node(std::move(out), {x, w, b}, [n_in, n_out](Node& n) {
    Node& px = *n.parents[0];
    Node& pw = *n.parents[1];
    Node& pb = *n.parents[2];
    const double* wv = pw.value.data();
    if (px.requires_grad) {
      double* gx = px.grad_buffer().data();
      for (int m = 0; m < n_out; ++m) {
        const double g = n.grad[m];
        const double* row = wv + static_cast<int64_t>(m) * n_in;
        for (int i = 0; i < n_in; ++i) gx[i] += g * row[i];
      }
    }
    if (pw.requires_grad) {
      double* gw = pw.grad_buffer().data();
      const double* xv = px.value.data();
      for (int m = 0; m < n_out; ++m) {
        const double g = n.grad[m];
        double* grow = gw + static_cast<int64_t>(m) * n_in;
        for (int i = 0; i < n_in; ++i) grow[i] += g * xv[i];
      }
    }
    if (pb.requires_grad) {
      double* gb = pb.grad_buffer().data();
      for (int m = 0; m < n_out; ++m) gb[m] += n.grad[m];
    }
  });
}

NodeRef conv2d(const NodeRef& x, const NodeRef& w, const NodeRef& b,
               int stride, int pad) {
  const int ic = x->value.dim(0), ih = x->value.dim(1), iw = x->value.dim(2);
  const int oc = w->value.dim(0), kh = w->value.dim(2), kw = w->value.dim(3);
  if (w->value.dim(1) != ic || b->value.dim(0) != oc) {
    throw shape_error("autodiff", "conv2d: inconsistent shapes");
  }
  const int oh = (ih + 2 * pad - kh) / stride + 1;
  const int ow = (iw + 2 * pad - kw) / stride + 1;
  if (oh <= 0 || ow <= 0) throw shape_error("autodiff", "conv2d: empty output");
  Tensor out({oc, oh, ow});
  const double* xv = x->value.data();
  const double* wv = w->value.data();

  for (int o = 0; o < oc; ++o) {
    const double bias = b->value[o];
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double s = bias;
        const int iy0 = oy * stride - pad;
        const int ix0 = ox * stride - pad;
        for (int c = 0; c < ic; ++c) {
          const double* xc = xv + static_cast<int64_t>(c) * ih * iw;
          const double* wo =
              wv + ((static_cast<int64_t>(o) * ic + c) * kh) * kw;
          for (int ky = 0; ky < kh; ++ky) {
            const int iy = iy0 + ky;
            if (iy < 0 || iy >= ih) continue;
            const double* xrow = xc + static_cast<int64_t>(iy) * iw;
            const double* wrow = wo + static_cast<int64_t>(ky) * kw;
            for (int kx = 0; kx < kw; ++kx) {
              const int ix = ix0 + kx;
              if (ix < 0 || ix >= iw) continue;
              s += wrow[kx] * xrow[ix];
            }
          }
        }
        out.at(o, oy, ox) = s;
      }
    }
  }

  return make_node(
      std::move(out), {x, w, b},
      [ic, ih, iw, oc, kh, kw, oh, ow, stride, pad](Node& n) {
        Node& px = *n.parents[0];
        Node& pw = *n.parents[1];
        Node& pb = *n.parents[2];
        const double* wv = pw.value.data();
        const double* xv = px.value.data();
        double* gx = px.requires_grad ? px.grad_buffer().data() : nullptr;
        double* gw = pw.requires_grad ? pw.grad_buffer().data() : nullptr;
        double* gb = pb.requires_grad ? pb.grad_buffer().data() : nullptr;

        for (int o = 0; o < oc; ++o) {
          for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
              const double g = n.grad.at(o, oy, ox);
              if (g == 0.0) continue;
              if (gb) gb[o] += g;
              const int iy0 = oy * stride - pad;
              const int ix0 = ox * stride - pad;
              for (int c = 0; c < ic; ++c) {
                const int64_t xoff = static_cast<int64_t>(c) * ih * iw;
                const int64_t woff =
                    ((static_cast<int64_t>(o) * ic + c) * kh) * kw;
                for (int ky = 0; ky < kh; ++ky) {
                  const int iy = iy0 + ky;
                  if (iy < 0 || iy >= ih) continue;
                  for (int kx = 0; kx < kw; ++kx) {
                    const int ix = ix0 + kx;
                    if (ix < 0 || ix >= iw) continue;
                    const int64_t xi = xoff + static_cast<int64_t>(iy) * iw + ix;
                    const int64_t wi = woff + static_cast<int64_t>(ky) * kw + kx;
                    if (gx) gx[xi] += g * wv[wi];
                    if (gw) gw[wi] += g * xv[xi];
                  }
                }
              }
            }
          }
        }
      });
}

NodeRef upsample2_nearest(const NodeRef& x) {
  const int c = x->value.dim(0), h = x->value.dim(1), w = x->value.dim(2);
  Tensor out({c, 2 * h, 2 * w});
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) {
        const double v = x->value.at(ch, y, xx);
        out.at(ch, 2 * y, 2 * xx) = v;
        out.at(ch, 2 * y, 2 * xx + 1) = v;
        out.at(ch, 2 * y + 1, 2 * xx) = v;
        out.at(ch, 2 * y + 1, 2 * xx + 1) = v;
      }
  return make_node(std::move(out), {x}, [c, h, w](Node& n) {
    Tensor& gx = n.parents[0]->grad_buffer();
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx) {
          gx.at(ch, y, xx) += n.grad.at(ch, 2 * y, 2 * xx) +
                              n.grad.at(ch, 2 * y, 2 * xx + 1) +
                              n.grad.at(ch, 2 * y + 1, 2 * xx) +
                              n.grad.at(ch, 2 * y + 1, 2 * xx + 1);
        }
  });
}

NodeRef concat_channels(const NodeRef& a, const NodeRef& b) {
  const int ca = a->value.dim(0), h = a->value.dim(1), w = a->value.dim(2);
  const int cb = b->value.dim(0);
  if (b->value.dim(1) != h || b->value.dim(2) != w) {
    throw shape_error("autodiff", "concat_channels: spatial mismatch");
  }
  Tensor out({ca + cb, h, w});
  const int64_t na = a->value.size();
  for (int64_t i = 0; i < na; ++i) out[i] = a->value[i];
  for (int64_t i = 0; i < b->value.size(); ++i) out[na + i] = b->value[i];
  return make_node(std::move(out), {a, b}, [na](Node& n) {
    Node& pa = *n.parents[0];
    Node& pb = *n.parents[1];
    if (pa.requires_grad) {
      Tensor& ga = pa.grad_buffer();
      for (int64_t i = 0; i < na; ++i) ga[i] += n.grad[i];
    }
    if (pb.requires_grad) {
      Tensor& gb = pb.grad_buffer();
      for (int64_t i = 0; i < gb.size(); ++i) gb[i] += n.grad[na + i];
    }
  });
}

NodeRef broadcast_to_map(const NodeRef& v, int h, int w) {
  const int n = v->value.dim(0);
  Tensor out({n, h, w});
  for (int c = 0; c < n; ++c) {
    const double val = v->value[c];
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(c, y, x) = val;
  }
  return make_node(std::move(out), {v}, [n, h, w](Node& node) {
    Tensor& gv = node.parents[0]->grad_buffer();
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) s += node.grad.at(c, y, x);
      gv[c] += s;
    }
  });
}

NodeRef mask_mul(const NodeRef& x, const Tensor& mask) {
  const int c = x->value.dim(0), h = x->value.dim(1), w = x->value.dim(2);
  if (mask.rank() != 2 || mask.dim(0) != h || mask.dim(1) != w) {
    throw shape_error("autodiff", "mask_mul: mask shape mismatch");
  }
  Tensor out = x->value;
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) out.at(ch, y, xx) *= mask.at(y, xx);
  Tensor mask_copy = mask;
  return make_node(std::move(out), {x},
                   [c, h, w, mask_copy = std::move(mask_copy)](Node& n) {
                     Tensor& gx = n.parents[0]->grad_buffer();
                     for (int ch = 0; ch < c; ++ch)
                       for (int y = 0; y < h; ++y)
                         for (int xx = 0; xx < w; ++xx)
                           gx.at(ch, y, xx) +=
                               n.grad.at(ch, y, xx) * mask_copy.at(y, xx);
                   });
}

NodeRef separable_filter(const NodeRef& x, const std::vector<double>& kernel) {
  const int c = x->value.dim(0), h = x->value.dim(1), w = x->value.dim(2);
  const int k = static_cast<int>(kernel.size());
  const int half = k / 2;
  if (k % 2 == 0) throw shape_error("autodiff", "separable_filter: even kernel");
  if (h < k || w < k) {
    throw shape_error("autodiff", "separable_filter: image smaller than kernel");
  }

  // Vertical pass then horizontal pass, reflect-101 at both borders.
  Tensor tmp({c, h, w});
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) {
        double s = 0.0;
        for (int t = -half; t <= half; ++t)
          s += kernel[t + half] * x->value.at(ch, reflect101(y + t, h), xx);
        tmp.at(ch, y, xx) = s;
      }
  Tensor out({c, h, w});
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) {
        double s = 0.0;
        for (int t = -half; t <= half; ++t)
          s += kernel[t + half] * tmp.at(ch, y, reflect101(xx + t, w));
        out.at(ch, y, xx) = s;
      }

  return make_node(std::move(out), {x}, [c, h, w, half, kernel](Node& n) {
    // Adjoint of each pass: scatter with the same (symmetric) kernel.
    Tensor gtmp({c, h, w});
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx) {
          const double g = n.grad.at(ch, y, xx);
          if (g == 0.0) continue;
          for (int t = -half; t <= half; ++t)
            gtmp.at(ch, y, reflect101(xx + t, w)) += kernel[t + half] * g;
        }
    Tensor& gx = n.parents[0]->grad_buffer();
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx) {
          const double g = gtmp.at(ch, y, xx);
          if (g == 0.0) continue;
          for (int t = -half; t <= half; ++t)
            gx.at(ch, reflect101(y + t, h), xx) += kernel[t + half] * g;
        }
  });
}

NodeRef bilinear_crop_resize(const NodeRef& x, double y0, double x0, double ch,
                             double cw, int out_h, int out_w) {
  const int c = x->value.dim(0), h = x->value.dim(1), w = x->value.dim(2);
  struct Tap {
    int y_lo, x_lo;
    double wy, wx;  // weight of the low neighbor along each axis
  };
  std::vector<Tap> taps(static_cast<size_t>(out_h) * out_w);
  for (int oy = 0; oy < out_h; ++oy) {
    double sy = y0 + (oy + 0.5) * ch / out_h - 0.5;
    sy = std::min(std::max(sy, 0.0), static_cast<double>(h - 1));
    const int y_lo = std::min(static_cast<int>(sy), h - 1);
    for (int ox = 0; ox < out_w; ++ox) {
      double sx = x0 + (ox + 0.5) * cw / out_w - 0.5;
      sx = std::min(std::max(sx, 0.0), static_cast<double>(w - 1));
      const int x_lo = std::min(static_cast<int>(sx), w - 1);
      taps[static_cast<size_t>(oy) * out_w + ox] = {
          y_lo, x_lo, 1.0 - (sy - y_lo), 1.0 - (sx - x_lo)};
    }
  }

  Tensor out({c, out_h, out_w});
  for (int cc = 0; cc < c; ++cc) {
    for (int oy = 0; oy < out_h; ++oy)
      for (int ox = 0; ox < out_w; ++ox) {
        const Tap& t = taps[static_cast<size_t>(oy) * out_w + ox];
        const int y1 = std::min(t.y_lo + 1, h - 1);
        const int x1 = std::min(t.x_lo + 1, w - 1);
        out.at(cc, oy, ox) =
            t.wy * (t.wx * x->value.at(cc, t.y_lo, t.x_lo) +
                    (1.0 - t.wx) * x->value.at(cc, t.y_lo, x1)) +
            (1.0 - t.wy) * (t.wx * x->value.at(cc, y1, t.x_lo) +
                            (1.0 - t.wx) * x->value.at(cc, y1, x1));
      }
  }

  return make_node(std::move(out), {x},
                   [c, h, w, out_h, out_w, taps = std::move(taps)](Node& n) {
                     Tensor& gx = n.parents[0]->grad_buffer();
                     for (int cc = 0; cc < c; ++cc)
                       for (int oy = 0; oy < out_h; ++oy)
                         for (int ox = 0; ox < out_w; ++ox) {
                           const Tap& t =
                               taps[static_cast<size_t>(oy) * out_w + ox];
                           const double g = n.grad.at(cc, oy, ox);
                           if (g == 0.0) continue;
                           const int y1 = std::min(t.y_lo + 1, h - 1);
                           const int x1 = std::min(t.x_lo + 1, w - 1);
                           gx.at(cc, t.y_lo, t.x_lo) += g * t.wy * t.wx;
                           gx.at(cc, t.y_lo, x1) += g * t.wy * (1.0 - t.wx);
                           gx.at(cc, y1, t.x_lo) += g * (1.0 - t.wy) * t.wx;
                           gx.at(cc, y1, x1) += g * (1.0 - t.wy) * (1.0 - t.wx);
                         }
                   });
}

void backward(const NodeRef& root) {
  if (root->value.size() != 1) {
    throw shape_error("autodiff", "backward: root must be scalar");
  }
  // Iterative post-order topological sort.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  root->grad_buffer()[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward_fn && !n->grad.empty()) n->backward_fn(*n);
  }
}

}  // namespace fsg::ad
