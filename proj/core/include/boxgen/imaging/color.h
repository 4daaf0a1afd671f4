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

#ifndef BOXGEN_IMAGING_COLOR_H_
#define BOXGEN_IMAGING_COLOR_H_

#include <array>

#include "boxgen/imaging/image.h"

namespace boxgen {

// sRGB (IEC 61966-2-1 primaries and transfer curve), D65 reference white,
// CIE 1976 L*a*b*. Scalar helpers work in double; the image versions store
// float.

struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

Lab SrgbToLab(double r, double g, double b);

// Same conversion starting from linear-light RGB.
Lab LinearRgbToLab(double r, double g, double b);

// sRGB transfer curve, encoded value -> linear light.
double SrgbDecode(double v);

// Inverse conversion before clipping; components may leave [0,1] for
// out-of-gamut Lab.
std::array<double, 3> LabToSrgbUnclipped(const Lab& lab);

// Inverse conversion with per-channel clipping to [0,1].
std::array<double, 3> LabToSrgb(const Lab& lab);

// d(rgb)/d(l,a,b) of the unclipped inverse, row-major [channel][lab].
std::array<std::array<double, 3>, 3> LabToSrgbJacobian(const Lab& lab);

// 3-channel RGB in [0,1] -> 3-channel (L, a, b).
Image RgbToLab(const Image& rgb);

// 3-channel (L, a, b) -> 3-channel RGB, clipped to [0,1]. Clipping is the
// documented out-of-gamut policy; no gamut projection is attempted.
Image LabToRgb(const Image& lab);

// Grayscale is CIELab lightness scaled to [0,1]: L / 100.
Image RgbToGray(const Image& rgb);

// Builds a Lab image from a gray (L/100) plane and a 2-channel ab plane.
Image ComposeLab(const Image& gray, const Image& ab);

}  // namespace boxgen

#endif  // BOXGEN_IMAGING_COLOR_H_
