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

#ifndef BOXGEN_IMAGING_TRANSFORM_H_
#define BOXGEN_IMAGING_TRANSFORM_H_

#include <vector>

#include "boxgen/imaging/box.h"
#include "boxgen/imaging/image.h"

namespace boxgen {

// One output sample of 1-D linear interpolation: value = (1-w)*in[i0] +
// w*in[i1].
struct LinearTap {
  int i0 = 0;
  int i1 = 0;
  float w = 0.0f;
};

// Half-pixel-centre convention: output pixel o samples input coordinate
// (o + 0.5) * in / out - 0.5, clamped to [0, in - 1]. Shared by image
// resizing and the differentiable tensor resize so both agree exactly.
std::vector<LinearTap> BilinearTaps(int in_size, int out_size);

// 1-D area averaging weights. Output cell o covers input interval
// [o * in / out, (o + 1) * in / out); each input pixel contributes its
// overlap length, normalized to sum to one.
struct AreaTap {
  int index = 0;
  double weight = 0.0;
};
std::vector<std::vector<AreaTap>> AreaTaps(int in_size, int out_size);

// Sets pixels under `mask` to `fill` in every channel; all other pixels are
// copied unchanged.
Image Erase(const Image& image, const BoxMask& mask, float fill);

Image CropPatch(const Image& image, const Box& box);

// Returns `image` with `patch` written into `box`. The patch must be
// exactly box.h x box.w with the image's channel count.
Image PastePatch(const Image& image, const Image& patch, const Box& box);

Image ResizeBilinear(const Image& image, int out_height, int out_width);

Image ResizeArea(const Image& image, int out_height, int out_width);

// Crop followed by bilinear resize; stands in for ROI pooling of a single
// rectangular box.
Image RoiResize(const Image& image, const Box& box, int out_height = 64,
                int out_width = 64);

// Cross-fades `composed` into `original` over a frame of `band` pixels just
// inside the box border. A pixel at distance d (0 on the border ring) from
// the box edge takes weight (d + 0.5) / band on `composed`; pixels with
// d >= band are taken from `composed`, pixels outside the box from
// `original`. `band` is clamped to min(w, h) / 2.
Image AlphaBlend(const Image& composed, const Image& original, const Box& box,
                 int band);

// Reflect-pads bottom/right so both dims become multiples of `multiple`.
// Reflection excludes the edge pixel (… c b | a b c …).
Image PadReflectToMultiple(const Image& image, int multiple);

// Top-left height x width region.
Image CropTopLeft(const Image& image, int height, int width);

}  // namespace boxgen

#endif  // BOXGEN_IMAGING_TRANSFORM_H_
