// Copyright 2026 The Boxgen Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOXGEN_NN_CONV_H_
#define BOXGEN_NN_CONV_H_

#include <vector>

#include <Eigen/Core>

#include "boxgen/nn/autograd.h"

namespace boxgen::nn {

// Geometry of a square-kernel convolution. Padding may be asymmetric
// (begin = top/left, end = bottom/right) so even kernels can keep size.
struct ConvGeometry {
  int kernel = 3;
  int stride = 1;
  int dilation = 1;
  int pad_begin = 1;
  int pad_end = 1;

  int OutputSize(int in) const {
    return (in + pad_begin + pad_end - dilation * (kernel - 1) - 1) / stride + 1;
  }

  // Zero padding that preserves spatial size at stride 1.
  static ConvGeometry Same(int kernel, int stride, int dilation) {
    const int total = dilation * (kernel - 1);
    return {kernel, stride, dilation, total / 2, total - total / 2};
  }
};

namespace internal {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const RowMatrix<T>>;

// Unfolds one (channels, height, width) sample into a
// (channels * k * k) x (out_h * out_w) patch matrix.
template <typename T>
void Im2Col(const T* input, int channels, int height, int width,
            const ConvGeometry& g, int out_h, int out_w, T* cols) {
  const int k = g.kernel;
  for (int c = 0; c < channels; ++c) {
    const T* plane = input + static_cast<size_t>(c) * height * width;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* row = cols + ((static_cast<size_t>(c) * k + ky) * k + kx) * out_h * out_w;
        for (int oy = 0; oy < out_h; ++oy) {
          const int iy = oy * g.stride - g.pad_begin + ky * g.dilation;
          T* dst = row + static_cast<size_t>(oy) * out_w;
          if (iy < 0 || iy >= height) {
            std::fill(dst, dst + out_w, T(0));
            continue;
          }
          const T* src = plane + static_cast<size_t>(iy) * width;
          const int x_off = kx * g.dilation - g.pad_begin;
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * g.stride + x_off;
            dst[ox] = (ix >= 0 && ix < width) ? src[ix] : T(0);
          }
        }
      }
    }
  }
}

// Adjoint of Im2Col: scatters-adds the patch matrix back onto the sample.
template <typename T>
void Col2Im(const T* cols, int channels, int height, int width,
            const ConvGeometry& g, int out_h, int out_w, T* output) {
  const int k = g.kernel;
  for (int c = 0; c < channels; ++c) {
    T* plane = output + static_cast<size_t>(c) * height * width;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* row =
            cols + ((static_cast<size_t>(c) * k + ky) * k + kx) * out_h * out_w;
        for (int oy = 0; oy < out_h; ++oy) {
          const int iy = oy * g.stride - g.pad_begin + ky * g.dilation;
          if (iy < 0 || iy >= height) continue;
          const T* src = row + static_cast<size_t>(oy) * out_w;
          T* dst = plane + static_cast<size_t>(iy) * width;
          const int x_off = kx * g.dilation - g.pad_begin;
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * g.stride + x_off;
            if (ix >= 0 && ix < width) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

}  // namespace internal

// y = conv(x, weight) + bias. weight: (out_c, in_c, k, k); bias: (1, out_c,
// 1, 1).
template <typename T>
Var<T> Conv2d(const Var<T>& x, const Var<T>& weight, const Var<T>& bias,
              const ConvGeometry& g) {
  using namespace internal;
  const Shape in = x->value.shape();
  const Shape ws = weight->value.shape();
  if (ws.c != in.c || ws.h != g.kernel || ws.w != g.kernel) {
    Fail(ErrorCode::kShapeMismatch, "Conv2d: input {} vs weight {}",
         in.ToString(), ws.ToString());
  }
  const int out_h = g.OutputSize(in.h);
  const int out_w = g.OutputSize(in.w);
  if (out_h < 1 || out_w < 1) {
    Fail(ErrorCode::kShapeMismatch, "Conv2d: input {} too small for kernel {}",
         in.ToString(), g.kernel);
  }
  const int rows = in.c * g.kernel * g.kernel;
  const int positions = out_h * out_w;
  Tensor<T> out(Shape{in.n, ws.n, out_h, out_w});
  std::vector<T> cols(static_cast<size_t>(rows) * positions);
  ConstMatrixMap<T> w_mat(weight->value.data(), ws.n, rows);
  for (int n = 0; n < in.n; ++n) {
    Im2Col(x->value.sample(n), in.c, in.h, in.w, g, out_h, out_w, cols.data());
    MatrixMap<T> y(out.sample(n), ws.n, positions);
    y.noalias() = w_mat * ConstMatrixMap<T>(cols.data(), rows, positions);
    for (int o = 0; o < ws.n; ++o) y.row(o).array() += bias->value[o];
  }
  return MakeNode<T>(std::move(out), {x, weight, bias}, [=](Node<T>& self) {
    const Var<T>& x = self.parents[0];
    const Var<T>& weight = self.parents[1];
    const Var<T>& bias = self.parents[2];
    std::vector<T> cols(static_cast<size_t>(rows) * positions);
    std::vector<T> dcols(cols.size());
    ConstMatrixMap<T> w_mat(weight->value.data(), ws.n, rows);
    for (int n = 0; n < in.n; ++n) {
      ConstMatrixMap<T> dy(self.grad.sample(n), ws.n, positions);
      if (bias->requires_grad) {
        Tensor<T>& db = bias->EnsureGrad();
        // Plain loops: Eigen's vectorized sum() peels by pointer alignment,
        // which would make the summation order allocation-dependent.
        for (int o = 0; o < ws.n; ++o) {
          T acc = 0;
          for (int i = 0; i < positions; ++i) acc += dy(o, i);
          db[o] += acc;
        }
      }
      if (weight->requires_grad) {
        Im2Col(x->value.sample(n), in.c, in.h, in.w, g, out_h, out_w,
               cols.data());
        MatrixMap<T> dw(weight->EnsureGrad().data(), ws.n, rows);
        dw.noalias() +=
            dy * ConstMatrixMap<T>(cols.data(), rows, positions).transpose();
      }
      if (x->requires_grad) {
        MatrixMap<T>(dcols.data(), rows, positions).noalias() =
            w_mat.transpose() * dy;
        Col2Im(dcols.data(), in.c, in.h, in.w, g, out_h, out_w,
               x->EnsureGrad().sample(n));
      }
    }
  });
}

// Transposed convolution (adjoint of a strided conv). weight: (in_c, out_c,
// k, k). Output size (in - 1) * stride - pad_begin - pad_end + kernel.
template <typename T>
Var<T> ConvTranspose2d(const Var<T>& x, const Var<T>& weight,
                       const Var<T>& bias, const ConvGeometry& g) {
  using namespace internal;
  const Shape in = x->value.shape();
  const Shape ws = weight->value.shape();
  if (ws.n != in.c || ws.h != g.kernel || ws.w != g.kernel || g.dilation != 1) {
    Fail(ErrorCode::kShapeMismatch, "ConvTranspose2d: input {} vs weight {}",
         in.ToString(), ws.ToString());
  }
  const int out_c = ws.c;
  const int out_h = (in.h - 1) * g.stride - g.pad_begin - g.pad_end + g.kernel;
  const int out_w = (in.w - 1) * g.stride - g.pad_begin - g.pad_end + g.kernel;
  const int rows = out_c * g.kernel * g.kernel;
  const int positions = in.h * in.w;
  Tensor<T> out(Shape{in.n, out_c, out_h, out_w});
  std::vector<T> cols(static_cast<size_t>(rows) * positions);
  ConstMatrixMap<T> w_mat(weight->value.data(), in.c, rows);
  for (int n = 0; n < in.n; ++n) {
    MatrixMap<T>(cols.data(), rows, positions).noalias() =
        w_mat.transpose() * ConstMatrixMap<T>(x->value.sample(n), in.c, positions);
    T* y = out.sample(n);
    Col2Im(cols.data(), out_c, out_h, out_w, g, in.h, in.w, y);
    for (int o = 0; o < out_c; ++o) {
      T* plane = y + static_cast<size_t>(o) * out_h * out_w;
      const T b = bias->value[o];
      for (int i = 0; i < out_h * out_w; ++i) plane[i] += b;
    }
  }
  return MakeNode<T>(std::move(out), {x, weight, bias}, [=](Node<T>& self) {
    const Var<T>& x = self.parents[0];
    const Var<T>& weight = self.parents[1];
    const Var<T>& bias = self.parents[2];
    std::vector<T> cols(static_cast<size_t>(rows) * positions);
    ConstMatrixMap<T> w_mat(weight->value.data(), in.c, rows);
    for (int n = 0; n < in.n; ++n) {
      const T* dy = self.grad.sample(n);
      if (bias->requires_grad) {
        Tensor<T>& db = bias->EnsureGrad();
        for (int o = 0; o < out_c; ++o) {
          const T* plane = dy + static_cast<size_t>(o) * out_h * out_w;
          T acc = 0;
          for (int i = 0; i < out_h * out_w; ++i) acc += plane[i];
          db[o] += acc;
        }
      }
      if (!weight->requires_grad && !x->requires_grad) continue;
      Im2Col(dy, out_c, out_h, out_w, g, in.h, in.w, cols.data());
      ConstMatrixMap<T> dcols(cols.data(), rows, positions);
      if (weight->requires_grad) {
        MatrixMap<T> dw(weight->EnsureGrad().data(), in.c, rows);
        dw.noalias() +=
            ConstMatrixMap<T>(x->value.sample(n), in.c, positions) *
            dcols.transpose();
      }
      if (x->requires_grad) {
        MatrixMap<T>(x->EnsureGrad().sample(n), in.c, positions).noalias() +=
            w_mat * dcols;
      }
    }
  });
}

// y = x W^T + b over flattened samples. weight: (out, in, 1, 1); bias:
// (1, out, 1, 1). Output (n, out, 1, 1).
template <typename T>
Var<T> Linear(const Var<T>& x, const Var<T>& weight, const Var<T>& bias) {
  using namespace internal;
  const Shape in = x->value.shape();
  const int features = static_cast<int>(in.sample_size());
  const int outputs = weight->value.n();
  if (weight->value.c() != features) {
    Fail(ErrorCode::kShapeMismatch, "Linear: input {} has {} features, weight expects {}",
         in.ToString(), features, weight->value.c());
  }
  Tensor<T> out(Shape{in.n, outputs, 1, 1});
  ConstMatrixMap<T> w_mat(weight->value.data(), outputs, features);
  ConstMatrixMap<T> x_mat(x->value.data(), in.n, features);
  MatrixMap<T> y(out.data(), in.n, outputs);
  y.noalias() = x_mat * w_mat.transpose();
  for (int n = 0; n < in.n; ++n) {
    for (int o = 0; o < outputs; ++o) y(n, o) += bias->value[o];
  }
  return MakeNode<T>(std::move(out), {x, weight, bias}, [=](Node<T>& self) {
    const Var<T>& x = self.parents[0];
    const Var<T>& weight = self.parents[1];
    const Var<T>& bias = self.parents[2];
    ConstMatrixMap<T> dy(self.grad.data(), in.n, outputs);
    if (bias->requires_grad) {
      Tensor<T>& db = bias->EnsureGrad();
      for (int o = 0; o < outputs; ++o) {
        T acc = 0;
        for (int n = 0; n < in.n; ++n) acc += dy(n, o);
        db[o] += acc;
      }
    }
    if (weight->requires_grad) {
      MatrixMap<T>(weight->EnsureGrad().data(), outputs, features).noalias() +=
          dy.transpose() * ConstMatrixMap<T>(x->value.data(), in.n, features);
    }
    if (x->requires_grad) {
      MatrixMap<T>(x->EnsureGrad().data(), in.n, features).noalias() +=
          dy * ConstMatrixMap<T>(weight->value.data(), outputs, features);
    }
  });
}

// 2x2 (generally k x k, stride k) max pooling; ties keep the first maximum.
template <typename T>
Var<T> MaxPool2d(const Var<T>& x, int kernel) {
  const Shape in = x->value.shape();
  const int out_h = in.h / kernel;
  const int out_w = in.w / kernel;
  if (out_h < 1 || out_w < 1) {
    Fail(ErrorCode::kShapeMismatch, "MaxPool2d: input {} smaller than kernel {}",
         in.ToString(), kernel);
  }
  Tensor<T> out(Shape{in.n, in.c, out_h, out_w});
  std::vector<int> argmax(out.size());
  size_t o = 0;
  for (int n = 0; n < in.n; ++n) {
    for (int c = 0; c < in.c; ++c) {
      for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox, ++o) {
          int best = -1;
          T best_v = T(0);
          for (int ky = 0; ky < kernel; ++ky) {
            for (int kx = 0; kx < kernel; ++kx) {
              const int iy = oy * kernel + ky;
              const int ix = ox * kernel + kx;
              const T v = x->value.at(n, c, iy, ix);
              if (best < 0 || v > best_v) {
                best = iy * in.w + ix;
                best_v = v;
              }
            }
          }
          out[o] = best_v;
          argmax[o] = best;
        }
      }
    }
  }
  const size_t plane_out = static_cast<size_t>(out_h) * out_w;
  return MakeNode<T>(std::move(out), {x},
                     [in, argmax = std::move(argmax), plane_out](Node<T>& self) {
                       Tensor<T>& dx = self.parents[0]->EnsureGrad();
                       const size_t plane_in = static_cast<size_t>(in.h) * in.w;
                       for (size_t o = 0; o < argmax.size(); ++o) {
                         const size_t plane = o / plane_out;
                         dx[plane * plane_in + argmax[o]] += self.grad[o];
                       }
                     });
}

}  // namespace boxgen::nn

#endif  // BOXGEN_NN_CONV_H_
