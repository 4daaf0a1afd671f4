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

#ifndef BOXGEN_NN_OPS_H_
#define BOXGEN_NN_OPS_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "boxgen/codec/color_codec.h"
#include "boxgen/imaging/box.h"
#include "boxgen/imaging/color.h"
#include "boxgen/imaging/transform.h"
#include "boxgen/nn/autograd.h"

namespace boxgen::nn {

namespace internal {

inline void CheckSameShape(const Shape& a, const Shape& b, const char* op) {
  if (!(a == b)) {
    Fail(ErrorCode::kShapeMismatch, "{}: shapes {} and {} differ", op,
         a.ToString(), b.ToString());
  }
}

// Applies f elementwise; backward multiplies by df(x, y).
template <typename T, typename F, typename DF>
Var<T> Pointwise(const Var<T>& x, F f, DF df) {
  Tensor<T> out(x->value.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = f(x->value[i]);
  return MakeNode<T>(std::move(out), {x}, [df](Node<T>& self) {
    const Var<T>& x = self.parents[0];
    Tensor<T>& dx = x->EnsureGrad();
    for (size_t i = 0; i < dx.size(); ++i) {
      dx[i] += self.grad[i] * df(x->value[i], self.value[i]);
    }
  });
}

}  // namespace internal

// ---------------------------------------------------------------- arithmetic

template <typename T>
Var<T> Add(const Var<T>& a, const Var<T>& b) {
  internal::CheckSameShape(a->value.shape(), b->value.shape(), "Add");
  Tensor<T> out(a->value.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a->value[i] + b->value[i];
  return MakeNode<T>(std::move(out), {a, b}, [](Node<T>& self) {
    for (const Var<T>& p : self.parents) {
      if (!p->requires_grad) continue;
      Tensor<T>& d = p->EnsureGrad();
      for (size_t i = 0; i < d.size(); ++i) d[i] += self.grad[i];
    }
  });
}

// scale * x + shift.
template <typename T>
Var<T> Affine(const Var<T>& x, T scale, T shift) {
  return internal::Pointwise<T>(
      x, [=](T v) { return scale * v + shift; }, [=](T, T) { return scale; });
}

template <typename T>
Var<T> Scale(const Var<T>& x, T scale) {
  return Affine<T>(x, scale, T(0));
}

// ---------------------------------------------------------------- activations

template <typename T>
Var<T> LeakyRelu(const Var<T>& x, T slope = T(0.2)) {
  return internal::Pointwise<T>(
      x, [=](T v) { return v > T(0) ? v : slope * v; },
      [=](T v, T) { return v > T(0) ? T(1) : slope; });
}

template <typename T>
Var<T> Sigmoid(const Var<T>& x) {
  return internal::Pointwise<T>(
      x, [](T v) { return T(1) / (T(1) + std::exp(-v)); },
      [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
Var<T> Tanh(const Var<T>& x) {
  return internal::Pointwise<T>(
      x, [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y * y; });
}

// Softmax across channels at every (n, y, x).
template <typename T>
Var<T> SoftmaxChannels(const Var<T>& x) {
  const Shape s = x->value.shape();
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  Tensor<T> out(s);
  for (int n = 0; n < s.n; ++n) {
    const T* in = x->value.sample(n);
    T* y = out.sample(n);
    for (size_t p = 0; p < plane; ++p) {
      T max_v = in[p];
      for (int c = 1; c < s.c; ++c) max_v = std::max(max_v, in[c * plane + p]);
      T total = 0;
      for (int c = 0; c < s.c; ++c) {
        y[c * plane + p] = std::exp(in[c * plane + p] - max_v);
        total += y[c * plane + p];
      }
      for (int c = 0; c < s.c; ++c) y[c * plane + p] /= total;
    }
  }
  return MakeNode<T>(std::move(out), {x}, [s, plane](Node<T>& self) {
    Tensor<T>& dx = self.parents[0]->EnsureGrad();
    for (int n = 0; n < s.n; ++n) {
      const T* y = self.value.sample(n);
      const T* dy = self.grad.sample(n);
      T* d = dx.sample(n);
      for (size_t p = 0; p < plane; ++p) {
        T dot = 0;
        for (int c = 0; c < s.c; ++c) dot += y[c * plane + p] * dy[c * plane + p];
        for (int c = 0; c < s.c; ++c) {
          d[c * plane + p] += y[c * plane + p] * (dy[c * plane + p] - dot);
        }
      }
    }
  });
}

// ---------------------------------------------------------------- layout

template <typename T>
Var<T> ConcatChannels(const std::vector<Var<T>>& parts) {
  if (parts.empty()) Fail(ErrorCode::kInvalidArgument, "ConcatChannels: no inputs");
  Shape s = parts[0]->value.shape();
  int channels = 0;
  for (const Var<T>& p : parts) {
    const Shape& ps = p->value.shape();
    if (ps.n != s.n || ps.h != s.h || ps.w != s.w) {
      Fail(ErrorCode::kShapeMismatch, "ConcatChannels: {} vs {}",
           s.ToString(), ps.ToString());
    }
    channels += ps.c;
  }
  Shape out_shape{s.n, channels, s.h, s.w};
  Tensor<T> out(out_shape);
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  for (int n = 0; n < s.n; ++n) {
    T* dst = out.sample(n);
    for (const Var<T>& p : parts) {
      const size_t count = p->value.c() * plane;
      std::copy_n(p->value.sample(n), count, dst);
      dst += count;
    }
  }
  return MakeNode<T>(std::move(out), parts, [plane](Node<T>& self) {
    const int batch = self.value.n();
    for (int n = 0; n < batch; ++n) {
      const T* src = self.grad.sample(n);
      for (const Var<T>& p : self.parents) {
        const size_t count = p->value.c() * plane;
        if (p->requires_grad) {
          T* d = p->EnsureGrad().sample(n);
          for (size_t i = 0; i < count; ++i) d[i] += src[i];
        }
        src += count;
      }
    }
  });
}

// Sample n of a batch as a batch of one.
template <typename T>
Var<T> SliceSample(const Var<T>& x, int n) {
  const Shape s = x->value.shape();
  Tensor<T> out(Shape{1, s.c, s.h, s.w});
  std::copy_n(x->value.sample(n), s.sample_size(), out.data());
  return MakeNode<T>(std::move(out), {x}, [n](Node<T>& self) {
    T* d = self.parents[0]->EnsureGrad().sample(n);
    for (size_t i = 0; i < self.grad.size(); ++i) d[i] += self.grad[i];
  });
}

template <typename T>
Var<T> StackSamples(const std::vector<Var<T>>& parts) {
  if (parts.empty()) Fail(ErrorCode::kInvalidArgument, "StackSamples: no inputs");
  const Shape s = parts[0]->value.shape();
  int total = 0;
  for (const Var<T>& p : parts) {
    const Shape& ps = p->value.shape();
    if (ps.c != s.c || ps.h != s.h || ps.w != s.w) {
      Fail(ErrorCode::kShapeMismatch, "StackSamples: {} vs {}", s.ToString(),
           ps.ToString());
    }
    total += ps.n;
  }
  Tensor<T> out(Shape{total, s.c, s.h, s.w});
  T* dst = out.data();
  for (const Var<T>& p : parts) dst = std::copy_n(p->value.data(), p->value.size(), dst);
  return MakeNode<T>(std::move(out), parts, [](Node<T>& self) {
    const T* src = self.grad.data();
    for (const Var<T>& p : self.parents) {
      if (p->requires_grad) {
        Tensor<T>& d = p->EnsureGrad();
        for (size_t i = 0; i < d.size(); ++i) d[i] += src[i];
      }
      src += p->value.size();
    }
  });
}

// Spatial crop of every sample.
template <typename T>
Var<T> CropBox(const Var<T>& x, const Box& box) {
  const Shape s = x->value.shape();
  CheckBoxInside(box, s.h, s.w);
  Tensor<T> out(Shape{s.n, s.c, box.h, box.w});
  for (int n = 0; n < s.n; ++n) {
    for (int c = 0; c < s.c; ++c) {
      for (int y = 0; y < box.h; ++y) {
        for (int x0 = 0; x0 < box.w; ++x0) {
          out.at(n, c, y, x0) = x->value.at(n, c, box.y + y, box.x + x0);
        }
      }
    }
  }
  return MakeNode<T>(std::move(out), {x}, [box](Node<T>& self) {
    Tensor<T>& d = self.parents[0]->EnsureGrad();
    const Shape& s = self.value.shape();
    for (int n = 0; n < s.n; ++n) {
      for (int c = 0; c < s.c; ++c) {
        for (int y = 0; y < box.h; ++y) {
          for (int x0 = 0; x0 < box.w; ++x0) {
            d.at(n, c, box.y + y, box.x + x0) += self.grad.at(n, c, y, x0);
          }
        }
      }
    }
  });
}

// `base` with `patch` written into `box`. Outside the box the values are
// copies of `base`, so the composition preserves them bit for bit.
template <typename T>
Var<T> PasteBox(const Var<T>& base, const Var<T>& patch, const Box& box) {
  const Shape s = base->value.shape();
  const Shape ps = patch->value.shape();
  CheckBoxInside(box, s.h, s.w);
  if (ps.n != s.n || ps.c != s.c || ps.h != box.h || ps.w != box.w) {
    Fail(ErrorCode::kShapeMismatch, "PasteBox: patch {} does not fit box {} of {}",
         ps.ToString(), box.ToString(), s.ToString());
  }
  Tensor<T> out = base->value;
  for (int n = 0; n < s.n; ++n) {
    for (int c = 0; c < s.c; ++c) {
      for (int y = 0; y < box.h; ++y) {
        for (int x0 = 0; x0 < box.w; ++x0) {
          out.at(n, c, box.y + y, box.x + x0) = patch->value.at(n, c, y, x0);
        }
      }
    }
  }
  return MakeNode<T>(std::move(out), {base, patch}, [box](Node<T>& self) {
    const Var<T>& base = self.parents[0];
    const Var<T>& patch = self.parents[1];
    const Shape& s = self.value.shape();
    if (base->requires_grad) {
      Tensor<T>& d = base->EnsureGrad();
      for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
          for (int y = 0; y < s.h; ++y) {
            for (int x0 = 0; x0 < s.w; ++x0) {
              if (!box.Contains(x0, y)) d.at(n, c, y, x0) += self.grad.at(n, c, y, x0);
            }
          }
        }
      }
    }
    if (patch->requires_grad) {
      Tensor<T>& d = patch->EnsureGrad();
      for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
          for (int y = 0; y < box.h; ++y) {
            for (int x0 = 0; x0 < box.w; ++x0) {
              d.at(n, c, y, x0) += self.grad.at(n, c, box.y + y, box.x + x0);
            }
          }
        }
      }
    }
  });
}

// Keeps `original` outside the box and `generated` inside it.
template <typename T>
Var<T> Compose(const Var<T>& original, const Var<T>& generated, const Box& box) {
  return PasteBox(original, CropBox(generated, box), box);
}

// Separable bilinear resize with the same taps as the image resampler.
template <typename T>
Var<T> ResizeBilinear(const Var<T>& x, int out_h, int out_w) {
  const Shape s = x->value.shape();
  const std::vector<LinearTap> ty = BilinearTaps(s.h, out_h);
  const std::vector<LinearTap> tx = BilinearTaps(s.w, out_w);
  Tensor<T> out(Shape{s.n, s.c, out_h, out_w});
  for (int n = 0; n < s.n; ++n) {
    for (int c = 0; c < s.c; ++c) {
      for (int y = 0; y < out_h; ++y) {
        const T wy = ty[y].w;
        for (int x0 = 0; x0 < out_w; ++x0) {
          const T wx = tx[x0].w;
          const T top = (T(1) - wx) * x->value.at(n, c, ty[y].i0, tx[x0].i0) +
                        wx * x->value.at(n, c, ty[y].i0, tx[x0].i1);
          const T bottom = (T(1) - wx) * x->value.at(n, c, ty[y].i1, tx[x0].i0) +
                           wx * x->value.at(n, c, ty[y].i1, tx[x0].i1);
          out.at(n, c, y, x0) = (T(1) - wy) * top + wy * bottom;
        }
      }
    }
  }
  return MakeNode<T>(std::move(out), {x}, [ty, tx](Node<T>& self) {
    Tensor<T>& d = self.parents[0]->EnsureGrad();
    const Shape& s = self.value.shape();
    for (int n = 0; n < s.n; ++n) {
      for (int c = 0; c < s.c; ++c) {
        for (int y = 0; y < s.h; ++y) {
          const T wy = ty[y].w;
          for (int x0 = 0; x0 < s.w; ++x0) {
            const T wx = tx[x0].w;
            const T g = self.grad.at(n, c, y, x0);
            d.at(n, c, ty[y].i0, tx[x0].i0) += (T(1) - wy) * (T(1) - wx) * g;
            d.at(n, c, ty[y].i0, tx[x0].i1) += (T(1) - wy) * wx * g;
            d.at(n, c, ty[y].i1, tx[x0].i0) += wy * (T(1) - wx) * g;
            d.at(n, c, ty[y].i1, tx[x0].i1) += wy * wx * g;
          }
        }
      }
    }
  });
}

// ---------------------------------------------------------------- colour

// Probability-weighted mean of the bin centres: (n, 313, h, w) ->
// (n, 2, h, w) holding (a, b).
template <typename T>
Var<T> ExpectedAb(const Var<T>& probs, const ColorBinCodec& codec) {
  const Shape s = probs->value.shape();
  if (s.c != ColorBinCodec::kNumBins) {
    Fail(ErrorCode::kShapeMismatch, "ExpectedAb: expected {} channels, got {}",
         ColorBinCodec::kNumBins, s.c);
  }
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  std::vector<T> ca(s.c), cb(s.c);
  for (int k = 0; k < s.c; ++k) {
    ca[k] = static_cast<T>(codec.center(k).a);
    cb[k] = static_cast<T>(codec.center(k).b);
  }
  Tensor<T> out(Shape{s.n, 2, s.h, s.w});
  for (int n = 0; n < s.n; ++n) {
    const T* p = probs->value.sample(n);
    T* a = out.sample(n);
    T* b = a + plane;
    for (int k = 0; k < s.c; ++k) {
      const T* pk = p + k * plane;
      for (size_t i = 0; i < plane; ++i) {
        a[i] += pk[i] * ca[k];
        b[i] += pk[i] * cb[k];
      }
    }
  }
  return MakeNode<T>(std::move(out), {probs}, [ca, cb, plane](Node<T>& self) {
    Tensor<T>& d = self.parents[0]->EnsureGrad();
    const int channels = static_cast<int>(ca.size());
    for (int n = 0; n < self.value.n(); ++n) {
      const T* ga = self.grad.sample(n);
      const T* gb = ga + plane;
      T* dp = d.sample(n);
      for (int k = 0; k < channels; ++k) {
        T* dk = dp + k * plane;
        for (size_t i = 0; i < plane; ++i) dk[i] += ga[i] * ca[k] + gb[i] * cb[k];
      }
    }
  });
}

// (n, 3, h, w) Lab -> sRGB clipped to [0,1]. Clipped components pass no
// gradient.
template <typename T>
Var<T> LabToRgb(const Var<T>& lab) {
  const Shape s = lab->value.shape();
  if (s.c != 3) {
    Fail(ErrorCode::kShapeMismatch, "LabToRgb: expected 3 channels, got {}", s.c);
  }
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  Tensor<T> out(s);
  for (int n = 0; n < s.n; ++n) {
    const T* in = lab->value.sample(n);
    T* rgb = out.sample(n);
    for (size_t i = 0; i < plane; ++i) {
      const auto v = LabToSrgb({in[i], in[plane + i], in[2 * plane + i]});
      for (int c = 0; c < 3; ++c) rgb[c * plane + i] = static_cast<T>(v[c]);
    }
  }
  return MakeNode<T>(std::move(out), {lab}, [plane](Node<T>& self) {
    const Var<T>& lab = self.parents[0];
    Tensor<T>& d = lab->EnsureGrad();
    for (int n = 0; n < self.value.n(); ++n) {
      const T* in = lab->value.sample(n);
      const T* g = self.grad.sample(n);
      T* dl = d.sample(n);
      for (size_t i = 0; i < plane; ++i) {
        const Lab px{in[i], in[plane + i], in[2 * plane + i]};
        const auto raw = LabToSrgbUnclipped(px);
        const auto jac = LabToSrgbJacobian(px);
        for (int c = 0; c < 3; ++c) {
          if (raw[c] <= 0.0 || raw[c] >= 1.0) continue;
          const T gc = g[c * plane + i];
          for (int k = 0; k < 3; ++k) {
            dl[k * plane + i] += gc * static_cast<T>(jac[c][k]);
          }
        }
      }
    }
  });
}

// ---------------------------------------------------------------- losses

// Mean |a - b| over every element; scalar (1,1,1,1) result.
template <typename T>
Var<T> L1Mean(const Var<T>& a, const Var<T>& b) {
  internal::CheckSameShape(a->value.shape(), b->value.shape(), "L1Mean");
  const size_t count = a->value.size();
  T total = 0;
  for (size_t i = 0; i < count; ++i) total += std::abs(a->value[i] - b->value[i]);
  Tensor<T> out(Shape{1, 1, 1, 1}, total / static_cast<T>(count));
  return MakeNode<T>(std::move(out), {a, b}, [count](Node<T>& self) {
    const Var<T>& a = self.parents[0];
    const Var<T>& b = self.parents[1];
    const T g = self.grad[0] / static_cast<T>(count);
    for (size_t i = 0; i < count; ++i) {
      const T diff = a->value[i] - b->value[i];
      const T sign = diff > T(0) ? T(1) : (diff < T(0) ? T(-1) : T(0));
      if (a->requires_grad) a->EnsureGrad()[i] += g * sign;
      if (b->requires_grad) b->EnsureGrad()[i] -= g * sign;
    }
  });
}

// Smallest probability fed to the log; keeps hard zeros finite.
inline constexpr double kMinProbability = 1e-30;

// Mean over pixels of -log p[target]. `targets` holds one class id per
// (n, y, x) in NHW order.
template <typename T>
Var<T> CrossEntropy(const Var<T>& probs, std::span<const int> targets) {
  const Shape s = probs->value.shape();
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  const size_t pixels = static_cast<size_t>(s.n) * plane;
  if (targets.size() != pixels) {
    Fail(ErrorCode::kShapeMismatch, "CrossEntropy: {} targets for {} pixels",
         targets.size(), pixels);
  }
  std::vector<int> ids(targets.begin(), targets.end());
  T total = 0;
  for (size_t i = 0; i < pixels; ++i) {
    if (ids[i] < 0 || ids[i] >= s.c) {
      Fail(ErrorCode::kOutOfRange, "CrossEntropy: class {} outside [0,{})", ids[i], s.c);
    }
    const size_t n = i / plane;
    const T p = probs->value.sample(static_cast<int>(n))[ids[i] * plane + i % plane];
    total -= std::log(std::max(p, static_cast<T>(kMinProbability)));
  }
  Tensor<T> out(Shape{1, 1, 1, 1}, total / static_cast<T>(pixels));
  return MakeNode<T>(std::move(out), {probs},
                     [ids = std::move(ids), plane, pixels](Node<T>& self) {
                       const Var<T>& probs = self.parents[0];
                       Tensor<T>& d = probs->EnsureGrad();
                       const T g = self.grad[0] / static_cast<T>(pixels);
                       for (size_t i = 0; i < pixels; ++i) {
                         const int n = static_cast<int>(i / plane);
                         const size_t off = ids[i] * plane + i % plane;
                         const T p = probs->value.sample(n)[off];
                         if (p > static_cast<T>(kMinProbability)) d.sample(n)[off] -= g / p;
                       }
                     });
}

// Same loss from pre-softmax scores via log-softmax; numerically safer for
// training and equal in value to CrossEntropy(SoftmaxChannels(logits)).
template <typename T>
Var<T> CrossEntropyFromLogits(const Var<T>& logits, std::span<const int> targets) {
  const Shape s = logits->value.shape();
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  const size_t pixels = static_cast<size_t>(s.n) * plane;
  if (targets.size() != pixels) {
    Fail(ErrorCode::kShapeMismatch, "CrossEntropy: {} targets for {} pixels",
         targets.size(), pixels);
  }
  Tensor<T> probs(s);
  T total = 0;
  for (int n = 0; n < s.n; ++n) {
    const T* z = logits->value.sample(n);
    T* p = probs.sample(n);
    for (size_t i = 0; i < plane; ++i) {
      const int target = targets[n * plane + i];
      if (target < 0 || target >= s.c) {
        Fail(ErrorCode::kOutOfRange, "CrossEntropy: class {} outside [0,{})", target, s.c);
      }
      T max_v = z[i];
      for (int c = 1; c < s.c; ++c) max_v = std::max(max_v, z[c * plane + i]);
      T sum = 0;
      for (int c = 0; c < s.c; ++c) {
        p[c * plane + i] = std::exp(z[c * plane + i] - max_v);
        sum += p[c * plane + i];
      }
      for (int c = 0; c < s.c; ++c) p[c * plane + i] /= sum;
      total -= z[target * plane + i] - max_v - std::log(sum);
    }
  }
  std::vector<int> ids(targets.begin(), targets.end());
  Tensor<T> out(Shape{1, 1, 1, 1}, total / static_cast<T>(pixels));
  return MakeNode<T>(
      std::move(out), {logits},
      [probs = std::move(probs), ids = std::move(ids), plane, pixels](Node<T>& self) {
        Tensor<T>& d = self.parents[0]->EnsureGrad();
        const T g = self.grad[0] / static_cast<T>(pixels);
        for (size_t i = 0; i < d.size(); ++i) d[i] += g * probs[i];
        for (size_t i = 0; i < pixels; ++i) {
          const int n = static_cast<int>(i / plane);
          d.sample(n)[ids[i] * plane + i % plane] -= g;
        }
      });
}

// Mean over pixels of -sum_k q_k log p_k for a soft target q of equal shape.
template <typename T>
Var<T> SoftCrossEntropy(const Var<T>& probs, const Tensor<T>& target) {
  internal::CheckSameShape(probs->value.shape(), target.shape(), "SoftCrossEntropy");
  const Shape s = target.shape();
  const size_t pixels = static_cast<size_t>(s.n) * s.h * s.w;
  T total = 0;
  for (size_t i = 0; i < target.size(); ++i) {
    if (target[i] != T(0)) {
      total -= target[i] *
               std::log(std::max(probs->value[i], static_cast<T>(kMinProbability)));
    }
  }
  Tensor<T> out(Shape{1, 1, 1, 1}, total / static_cast<T>(pixels));
  return MakeNode<T>(std::move(out), {probs}, [target, pixels](Node<T>& self) {
    const Var<T>& probs = self.parents[0];
    Tensor<T>& d = probs->EnsureGrad();
    const T g = self.grad[0] / static_cast<T>(pixels);
    for (size_t i = 0; i < d.size(); ++i) {
      if (target[i] != T(0) && probs->value[i] > static_cast<T>(kMinProbability)) {
        d[i] -= g * target[i] / probs->value[i];
      }
    }
  });
}

// Logit bound equivalent to clamping sigmoid scores to [1e-7, 1 - 1e-7].
inline constexpr double kMaxLogit = 16.11809565095832;

// Batch mean of -log(sigmoid(sign * z)) with z clamped to +-kMaxLogit.
// sign = +1 scores "real", sign = -1 scores "fake" (-log(1 - D)).
template <typename T>
Var<T> NegLogSigmoid(const Var<T>& logits, T sign = T(1)) {
  const size_t count = logits->value.size();
  const T bound = static_cast<T>(kMaxLogit);
  T total = 0;
  for (size_t i = 0; i < count; ++i) {
    const T z = std::clamp(sign * logits->value[i], -bound, bound);
    // -log(sigmoid(z)) = log(1 + exp(-z)), evaluated stably.
    total += z > T(0) ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  }
  Tensor<T> out(Shape{1, 1, 1, 1}, total / static_cast<T>(count));
  return MakeNode<T>(std::move(out), {logits}, [count, sign, bound](Node<T>& self) {
    const Var<T>& logits = self.parents[0];
    Tensor<T>& d = logits->EnsureGrad();
    const T g = self.grad[0] / static_cast<T>(count);
    for (size_t i = 0; i < count; ++i) {
      const T raw = sign * logits->value[i];
      if (raw < -bound || raw > bound) continue;
      const T sig = T(1) / (T(1) + std::exp(-raw));
      d[i] += g * sign * (sig - T(1));
    }
  });
}

}  // namespace boxgen::nn

#endif  // BOXGEN_NN_OPS_H_
