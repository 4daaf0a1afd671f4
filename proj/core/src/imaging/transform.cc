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

#include "boxgen/imaging/transform.h"

#include <algorithm>
#include <cmath>

#include "boxgen/base/error.h"

namespace boxgen {

std::vector<LinearTap> BilinearTaps(int in_size, int out_size) {
  std::vector<LinearTap> taps(out_size);
  const double scale = static_cast<double>(in_size) / out_size;
  for (int o = 0; o < out_size; ++o) {
    if (in_size == out_size) {
      taps[o] = {o, o, 0.0f};
      continue;
    }
    double src = (o + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
    const int i0 = static_cast<int>(std::floor(src));
    const int i1 = std::min(i0 + 1, in_size - 1);
    taps[o] = {i0, i1, static_cast<float>(src - i0)};
  }
  return taps;
}

std::vector<std::vector<AreaTap>> AreaTaps(int in_size, int out_size) {
  std::vector<std::vector<AreaTap>> taps(out_size);
  const double scale = static_cast<double>(in_size) / out_size;
  for (int o = 0; o < out_size; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    double total = 0.0;
    for (int i = static_cast<int>(std::floor(lo)); i < in_size && i < hi; ++i) {
      const double overlap = std::min(hi, i + 1.0) - std::max(lo, double(i));
      if (overlap <= 0.0) continue;
      taps[o].push_back({i, overlap});
      total += overlap;
    }
    for (AreaTap& t : taps[o]) t.weight /= total;
  }
  return taps;
}

Image Erase(const Image& image, const BoxMask& mask, float fill) {
  if (image.height() != mask.height() || image.width() != mask.width()) {
    Fail(ErrorCode::kShapeMismatch, "Erase: image {}x{} vs mask {}x{}",
         image.height(), image.width(), mask.height(), mask.width());
  }
  Image out = image;
  const Box& b = mask.box();
  for (int c = 0; c < out.channels(); ++c) {
    for (int y = b.y; y < b.y + b.h; ++y) {
      for (int x = b.x; x < b.x + b.w; ++x) out.at(c, y, x) = fill;
    }
  }
  return out;
}

Image CropPatch(const Image& image, const Box& box) {
  CheckBoxInside(box, image.height(), image.width());
  Image out(image.channels(), box.h, box.w);
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < box.h; ++y) {
      const float* src = &image.plane(c)[(box.y + y) * image.width() + box.x];
      std::copy(src, src + box.w, &out.plane(c)[y * box.w]);
    }
  }
  return out;
}

Image PastePatch(const Image& image, const Image& patch, const Box& box) {
  CheckBoxInside(box, image.height(), image.width());
  if (patch.height() != box.h || patch.width() != box.w ||
      patch.channels() != image.channels()) {
    Fail(ErrorCode::kShapeMismatch,
         "PastePatch: patch {}x{}x{} does not fit box {} of a {}-channel image",
         patch.channels(), patch.height(), patch.width(), box.ToString(),
         image.channels());
  }
  Image out = image;
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < box.h; ++y) {
      const float* src = &patch.plane(c)[y * box.w];
      std::copy(src, src + box.w,
                &out.plane(c)[(box.y + y) * image.width() + box.x]);
    }
  }
  return out;
}

Image ResizeBilinear(const Image& image, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1) {
    Fail(ErrorCode::kInvalidArgument, "resize target {}x{} must be positive",
         out_height, out_width);
  }
  if (out_height == image.height() && out_width == image.width()) return image;
  const auto ty = BilinearTaps(image.height(), out_height);
  const auto tx = BilinearTaps(image.width(), out_width);
  Image out(image.channels(), out_height, out_width);
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < out_height; ++y) {
      const LinearTap& vy = ty[y];
      for (int x = 0; x < out_width; ++x) {
        const LinearTap& vx = tx[x];
        const float top = (1.0f - vx.w) * image.at(c, vy.i0, vx.i0) +
                          vx.w * image.at(c, vy.i0, vx.i1);
        const float bottom = (1.0f - vx.w) * image.at(c, vy.i1, vx.i0) +
                             vx.w * image.at(c, vy.i1, vx.i1);
        out.at(c, y, x) = (1.0f - vy.w) * top + vy.w * bottom;
      }
    }
  }
  return out;
}

Image ResizeArea(const Image& image, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1) {
    Fail(ErrorCode::kInvalidArgument, "resize target {}x{} must be positive",
         out_height, out_width);
  }
  if (out_height == image.height() && out_width == image.width()) return image;
  const auto ty = AreaTaps(image.height(), out_height);
  const auto tx = AreaTaps(image.width(), out_width);
  Image out(image.channels(), out_height, out_width);
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < out_height; ++y) {
      for (int x = 0; x < out_width; ++x) {
        double acc = 0.0;
        for (const AreaTap& a : ty[y]) {
          for (const AreaTap& b : tx[x]) {
            acc += a.weight * b.weight * image.at(c, a.index, b.index);
          }
        }
        out.at(c, y, x) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Image RoiResize(const Image& image, const Box& box, int out_height,
                int out_width) {
  return ResizeBilinear(CropPatch(image, box), out_height, out_width);
}

Image AlphaBlend(const Image& composed, const Image& original, const Box& box,
                 int band) {
  if (!composed.SameShape(original)) {
    Fail(ErrorCode::kShapeMismatch, "AlphaBlend: image shapes differ");
  }
  if (band < 0) {
    Fail(ErrorCode::kInvalidArgument, "alpha band must be >= 0, got {}", band);
  }
  CheckBoxInside(box, composed.height(), composed.width());
  band = std::min(band, std::min(box.w, box.h) / 2);
  Image out = original;
  for (int y = box.y; y < box.y + box.h; ++y) {
    for (int x = box.x; x < box.x + box.w; ++x) {
      const int d = std::min({x - box.x, box.x + box.w - 1 - x, y - box.y,
                              box.y + box.h - 1 - y});
      const float alpha = d >= band ? 1.0f : (d + 0.5f) / band;
      for (int c = 0; c < out.channels(); ++c) {
        const float o = original.at(c, y, x);
        out.at(c, y, x) = alpha == 1.0f ? composed.at(c, y, x)
                                        : o + alpha * (composed.at(c, y, x) - o);
      }
    }
  }
  return out;
}

Image PadReflectToMultiple(const Image& image, int multiple) {
  const int h = (image.height() + multiple - 1) / multiple * multiple;
  const int w = (image.width() + multiple - 1) / multiple * multiple;
  if (h == image.height() && w == image.width()) return image;
  auto reflect = [](int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i %= period;
    return i < n ? i : period - i;
  };
  Image out(image.channels(), h, w);
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      const int sy = reflect(y, image.height());
      for (int x = 0; x < w; ++x) {
        out.at(c, y, x) = image.at(c, sy, reflect(x, image.width()));
      }
    }
  }
  return out;
}

Image CropTopLeft(const Image& image, int height, int width) {
  if (height == image.height() && width == image.width()) return image;
  return CropPatch(image, Box{0, 0, width, height});
}

}  // namespace boxgen
