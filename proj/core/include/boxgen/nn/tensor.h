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

#ifndef BOXGEN_NN_TENSOR_H_
#define BOXGEN_NN_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/imaging/image.h"

namespace boxgen::nn {

// NCHW extents. Fully-connected activations use (n, features, 1, 1).
struct Shape {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;

  size_t size() const { return static_cast<size_t>(n) * c * h * w; }
  size_t sample_size() const { return static_cast<size_t>(c) * h * w; }
  std::string ToString() const { return fmt::format("{}x{}x{}x{}", n, c, h, w); }
  friend bool operator==(const Shape&, const Shape&) = default;
};

template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T(0))
      : shape_(shape), data_(shape.size(), fill) {}

  const Shape& shape() const { return shape_; }
  int n() const { return shape_.n; }
  int c() const { return shape_.c; }
  int h() const { return shape_.h; }
  int w() const { return shape_.w; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> span() { return data_; }
  std::span<const T> span() const { return data_; }

  T& operator[](size_t i) { return data_[i]; }
  T operator[](size_t i) const { return data_[i]; }

  T& at(int n, int c, int y, int x) {
    return data_[((static_cast<size_t>(n) * shape_.c + c) * shape_.h + y) *
                     shape_.w + x];
  }
  T at(int n, int c, int y, int x) const {
    return data_[((static_cast<size_t>(n) * shape_.c + c) * shape_.h + y) *
                     shape_.w + x];
  }

  T* sample(int n) { return data_.data() + n * shape_.sample_size(); }
  const T* sample(int n) const { return data_.data() + n * shape_.sample_size(); }

  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  // Same data, new extents of equal total size.
  Tensor Reshaped(Shape shape) const {
    if (shape.size() != size()) {
      Fail(ErrorCode::kShapeMismatch, "cannot reshape {} to {}",
           shape_.ToString(), shape.ToString());
    }
    Tensor out = *this;
    out.shape_ = shape;
    return out;
  }

  template <typename U>
  Tensor<U> Cast() const {
    Tensor<U> out(shape_);
    for (size_t i = 0; i < size(); ++i) out[i] = static_cast<U>(data_[i]);
    return out;
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

// Stacks images of equal shape into one (n, c, h, w) tensor.
template <typename T>
Tensor<T> FromImages(std::span<const Image> images) {
  if (images.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot stack an empty image list");
  }
  const Image& first = images.front();
  Tensor<T> out(Shape{static_cast<int>(images.size()), first.channels(),
                      first.height(), first.width()});
  for (size_t i = 0; i < images.size(); ++i) {
    if (!images[i].SameShape(first)) {
      Fail(ErrorCode::kShapeMismatch, "image {} differs in shape from image 0",
           i);
    }
    std::copy(images[i].data().begin(), images[i].data().end(),
              out.sample(static_cast<int>(i)));
  }
  return out;
}

template <typename T>
Tensor<T> FromImage(const Image& image) {
  return FromImages<T>(std::span<const Image>(&image, 1));
}

template <typename T>
Image ToImage(const Tensor<T>& t, int n = 0) {
  Image out(t.c(), t.h(), t.w());
  const T* src = t.sample(n);
  auto dst = out.data();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<float>(src[i]);
  return out;
}

}  // namespace boxgen::nn

#endif  // BOXGEN_NN_TENSOR_H_
