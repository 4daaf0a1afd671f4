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

#ifndef BOXGEN_INFERENCE_STAGES_H_
#define BOXGEN_INFERENCE_STAGES_H_

#include "boxgen/codec/color_codec.h"
#include "boxgen/imaging/box.h"
#include "boxgen/imaging/image.h"

namespace boxgen {

// Colorizer output grid for its 128x128 input.
inline constexpr int kColorizerOutput = 8;

// Crop of a gray (L/100) image, resized to the colorizer input and mapped to
// [-1, 1] as (L - 50) / 50.
Image ColorizerInput(const Image& gray, const Box& box);

// Class targets for the colorizer: the Lab crop area-averaged to the
// output grid, then encoded.
ColorClassMap ColorizerTarget(const Image& rgb, const Box& box, const ColorBinCodec& codec);

// Soft variant of ColorizerTarget, 313 channels.
Image ColorizerSoftTarget(const Image& rgb, const Box& box, const ColorBinCodec& codec);

// Decodes a colorizer distribution into an RGB patch of the box size: the
// distribution is bilinearly upsampled, argmax-decoded to ab, and combined
// with the lightness of `gray_patch` (L/100, box-sized).
Image ColorizePatch(const Image& distribution, const Image& gray_patch,
                    const ColorBinCodec& codec);

// RGB [0,1] -> refiner input [-1,1] and back.
Image ToSigned(const Image& image);
Image FromSigned(const Image& image);

}  // namespace boxgen

#endif  // BOXGEN_INFERENCE_STAGES_H_
