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

#include "boxgen/imaging/box.h"

#include <charconv>
#include <vector>

#include <fmt/format.h>

#include "boxgen/base/error.h"

namespace boxgen {

std::string Box::ToString() const {
  return fmt::format("{},{},{},{}", x, y, w, h);
}

void CheckBoxInside(const Box& box, int height, int width) {
  if (box.w < 1 || box.h < 1) {
    Fail(ErrorCode::kOutOfRange, "box {} violates w >= 1 and h >= 1",
         box.ToString());
  }
  if (box.x < 0 || box.y < 0) {
    Fail(ErrorCode::kOutOfRange, "box {} violates x >= 0 and y >= 0",
         box.ToString());
  }
  if (box.x + box.w > width) {
    Fail(ErrorCode::kOutOfRange, "box {} violates x + w <= width ({})",
         box.ToString(), width);
  }
  if (box.y + box.h > height) {
    Fail(ErrorCode::kOutOfRange, "box {} violates y + h <= height ({})",
         box.ToString(), height);
  }
}

Box ParseBox(const std::string& text) {
  std::vector<int> parts;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p < end) {
    int v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) break;
    parts.push_back(v);
    p = next;
    if (p < end && *p == ',') ++p;
    else break;
  }
  if (parts.size() != 4 || p != end) {
    Fail(ErrorCode::kInvalidArgument, "box must be \"x,y,w,h\", got \"{}\"",
         text);
  }
  return Box{parts[0], parts[1], parts[2], parts[3]};
}

BoxMask::BoxMask(const Box& box, int height, int width)
    : box_(box), height_(height), width_(width) {
  CheckBoxInside(box, height, width);
}

Image BoxMask::ToImage() const {
  Image out(1, height_, width_, 0.0f);
  for (int y = box_.y; y < box_.y + box_.h; ++y) {
    for (int x = box_.x; x < box_.x + box_.w; ++x) out.at(0, y, x) = 1.0f;
  }
  return out;
}

}  // namespace boxgen
