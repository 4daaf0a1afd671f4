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

#ifndef BOXGEN_IMAGING_BOX_H_
#define BOXGEN_IMAGING_BOX_H_

#include <string>

#include "boxgen/imaging/image.h"

namespace boxgen {

// Axis-aligned integer rectangle in image pixels: columns [x, x+w), rows
// [y, y+h).
struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int area() const { return w * h; }
  bool Contains(int px, int py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
  bool FitsIn(int height, int width) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= width &&
           y + h <= height;
  }
  std::string ToString() const;

  friend bool operator==(const Box&, const Box&) = default;
};

// Throws kOutOfRange naming the violated bound when `box` is empty or does
// not lie fully inside a height x width image.
void CheckBoxInside(const Box& box, int height, int width);

// Parses "x,y,w,h".
Box ParseBox(const std::string& text);

// Rectangular binary mask: 1 inside `box`, 0 elsewhere.
class BoxMask {
 public:
  BoxMask(const Box& box, int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  const Box& box() const { return box_; }
  float at(int y, int x) const { return box_.Contains(x, y) ? 1.0f : 0.0f; }
  long Sum() const { return box_.area(); }

  // Single-channel image of the mask.
  Image ToImage() const;

 private:
  Box box_;
  int height_;
  int width_;
};

inline BoxMask MakeMask(const Box& box, int height, int width) {
  return BoxMask(box, height, width);
}

}  // namespace boxgen

#endif  // BOXGEN_IMAGING_BOX_H_
