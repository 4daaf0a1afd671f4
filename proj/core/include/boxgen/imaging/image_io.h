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

#ifndef BOXGEN_IMAGING_IMAGE_IO_H_
#define BOXGEN_IMAGING_IMAGE_IO_H_

#include <string>
#include <string_view>

#include "boxgen/imaging/image.h"

namespace boxgen {

// Decodes PNG or JPEG into 3-channel RGB in [0,1] (value / 255).
Image ReadImage(const std::string& path);
Image DecodeImage(std::string_view bytes);

// 8-bit PNG of a 1- or 3-channel image; values are clamped to [0,1] and
// rounded to the nearest of 256 levels. Encoding is deterministic, so equal
// images produce equal bytes.
std::string EncodePng(const Image& image);
void WritePng(const std::string& path, const Image& image);

// Rounds every value to the 8-bit grid (what a PNG round trip yields).
Image QuantizeTo8Bit(const Image& image);

}  // namespace boxgen

#endif  // BOXGEN_IMAGING_IMAGE_IO_H_
