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

#include "boxgen/imaging/image.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "boxgen/base/error.h"

namespace boxgen {

Image::Image(int channels, int height, int width, float fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 1 || height < 1 || width < 1) {
    Fail(ErrorCode::kInvalidArgument, "image dims must be positive, got {}x{}x{}",
         channels, height, width);
  }
  data_.assign(static_cast<size_t>(channels) * height * width, fill);
}

float Image::MinValue() const {
  return data_.empty() ? 0.0f : *std::min_element(data_.begin(), data_.end());
}

float Image::MaxValue() const {
  return data_.empty() ? 0.0f : *std::max_element(data_.begin(), data_.end());
}

bool BitEqual(const Image& a, const Image& b) {
  if (!a.SameShape(b)) return false;
  return std::memcmp(a.data().data(), b.data().data(),
                     a.data().size() * sizeof(float)) == 0;
}

void CheckImage(const Image& image, int channels, float lo, float hi,
                const char* what) {
  if (image.empty() || image.channels() != channels) {
    Fail(ErrorCode::kInvalidArgument, "{}: expected {} channels, got {}", what,
         channels, image.channels());
  }
  for (float v : image.data()) {
    if (!(v >= lo && v <= hi)) {
      Fail(ErrorCode::kInvalidArgument, "{}: value {} outside [{}, {}]", what, v,
           lo, hi);
    }
  }
}

}  // namespace boxgen
