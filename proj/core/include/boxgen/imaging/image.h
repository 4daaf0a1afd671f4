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

#ifndef BOXGEN_IMAGING_IMAGE_H_
#define BOXGEN_IMAGING_IMAGE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace boxgen {

// Planar (channel-major) float image. The same container carries RGB in
// [0,1], grayscale lightness L/100 in [0,1], and CIELab triples; which one
// a given image holds is part of each function's contract.
class Image {
 public:
  Image() = default;
  Image(int channels, int height, int width, float fill = 0.0f);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  size_t plane_size() const { return static_cast<size_t>(height_) * width_; }
  bool empty() const { return data_.empty(); }

  float& at(int c, int y, int x) {
    return data_[(static_cast<size_t>(c) * height_ + y) * width_ + x];
  }
  float at(int c, int y, int x) const {
    return data_[(static_cast<size_t>(c) * height_ + y) * width_ + x];
  }

  std::span<float> plane(int c) {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<const float> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  bool SameShape(const Image& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

  float MinValue() const;
  float MaxValue() const;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

// Shape and bit pattern equality (distinguishes -0.0f from 0.0f).
bool BitEqual(const Image& a, const Image& b);

// Throws kInvalidArgument unless the image has the given channel count and
// every value lies in [lo, hi].
void CheckImage(const Image& image, int channels, float lo, float hi,
                const char* what);

}  // namespace boxgen

#endif  // BOXGEN_IMAGING_IMAGE_H_
