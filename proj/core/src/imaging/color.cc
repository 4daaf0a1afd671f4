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

#include "boxgen/imaging/color.h"

#include <algorithm>
#include <cmath>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

constexpr double kRgbToXyz[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                                    {0.2126729, 0.7151522, 0.0721750},
                                    {0.0193339, 0.1191920, 0.9503041}};
constexpr double kXyzToRgb[3][3] = {{3.2404542, -1.5371385, -0.4985314},
                                    {-0.9692660, 1.8760108, 0.0415560},
                                    {0.0556434, -0.2040259, 1.0572252}};

constexpr double kDelta = 6.0 / 29.0;

double SrgbToLinear(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double LinearToSrgb(double v) {
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double LinearToSrgbDerivative(double v) {
  return v <= 0.0031308 ? 12.92 : 1.055 / 2.4 * std::pow(v, 1.0 / 2.4 - 1.0);
}

double LabF(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t)
                                      : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double LabFInverse(double t) {
  return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

double LabFInverseDerivative(double t) {
  return t > kDelta ? 3.0 * t * t : 3.0 * kDelta * kDelta;
}

}  // namespace

Lab SrgbToLab(double r, double g, double b) {
  return LinearRgbToLab(SrgbToLinear(r), SrgbToLinear(g), SrgbToLinear(b));
}

double SrgbDecode(double v) { return SrgbToLinear(v); }

Lab LinearRgbToLab(double r, double g, double b) {
  const double lin[3] = {r, g, b};
  double xyz[3];
  for (int i = 0; i < 3; ++i) {
    xyz[i] = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] +
             kRgbToXyz[i][2] * lin[2];
  }
  const double fx = LabF(xyz[0] / kWhiteX);
  const double fy = LabF(xyz[1] / kWhiteY);
  const double fz = LabF(xyz[2] / kWhiteZ);
  return Lab{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<double, 3> LabToSrgbUnclipped(const Lab& lab) {
  const double fy = (lab.l + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  const double xyz[3] = {kWhiteX * LabFInverse(fx), kWhiteY * LabFInverse(fy),
                         kWhiteZ * LabFInverse(fz)};
  std::array<double, 3> rgb;
  for (int i = 0; i < 3; ++i) {
    const double lin = kXyzToRgb[i][0] * xyz[0] + kXyzToRgb[i][1] * xyz[1] +
                       kXyzToRgb[i][2] * xyz[2];
    rgb[i] = LinearToSrgb(lin);
  }
  return rgb;
}

std::array<double, 3> LabToSrgb(const Lab& lab) {
  auto rgb = LabToSrgbUnclipped(lab);
  for (double& v : rgb) v = std::clamp(v, 0.0, 1.0);
  return rgb;
}

std::array<std::array<double, 3>, 3> LabToSrgbJacobian(const Lab& lab) {
  const double fy = (lab.l + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  // d(fx,fy,fz)/d(l,a,b)
  const double df[3][3] = {{1.0 / 116.0, 1.0 / 500.0, 0.0},
                           {1.0 / 116.0, 0.0, 0.0},
                           {1.0 / 116.0, 0.0, -1.0 / 200.0}};
  const double f[3] = {fx, fy, fz};
  const double white[3] = {kWhiteX, kWhiteY, kWhiteZ};
  double xyz[3];
  double dxyz[3][3];
  for (int i = 0; i < 3; ++i) {
    xyz[i] = white[i] * LabFInverse(f[i]);
    const double d = white[i] * LabFInverseDerivative(f[i]);
    for (int j = 0; j < 3; ++j) dxyz[i][j] = d * df[i][j];
  }
  std::array<std::array<double, 3>, 3> jac{};
  for (int c = 0; c < 3; ++c) {
    const double lin = kXyzToRgb[c][0] * xyz[0] + kXyzToRgb[c][1] * xyz[1] +
                       kXyzToRgb[c][2] * xyz[2];
    const double gamma = LinearToSrgbDerivative(lin);
    for (int j = 0; j < 3; ++j) {
      double dlin = 0.0;
      for (int k = 0; k < 3; ++k) dlin += kXyzToRgb[c][k] * dxyz[k][j];
      jac[c][j] = gamma * dlin;
    }
  }
  return jac;
}

Image RgbToLab(const Image& rgb) {
  if (rgb.channels() != 3) {
    Fail(ErrorCode::kShapeMismatch, "RgbToLab expects 3 channels, got {}",
         rgb.channels());
  }
  Image out(3, rgb.height(), rgb.width());
  const size_t n = rgb.plane_size();
  auto r = rgb.plane(0), g = rgb.plane(1), b = rgb.plane(2);
  auto l = out.plane(0), a = out.plane(1), bb = out.plane(2);
  for (size_t i = 0; i < n; ++i) {
    const Lab lab = SrgbToLab(r[i], g[i], b[i]);
    l[i] = static_cast<float>(lab.l);
    a[i] = static_cast<float>(lab.a);
    bb[i] = static_cast<float>(lab.b);
  }
  return out;
}

Image LabToRgb(const Image& lab) {
  if (lab.channels() != 3) {
    Fail(ErrorCode::kShapeMismatch, "LabToRgb expects 3 channels, got {}",
         lab.channels());
  }
  Image out(3, lab.height(), lab.width());
  const size_t n = lab.plane_size();
  auto l = lab.plane(0), a = lab.plane(1), b = lab.plane(2);
  auto r = out.plane(0), g = out.plane(1), bb = out.plane(2);
  for (size_t i = 0; i < n; ++i) {
    const auto rgb = LabToSrgb(Lab{l[i], a[i], b[i]});
    r[i] = static_cast<float>(rgb[0]);
    g[i] = static_cast<float>(rgb[1]);
    bb[i] = static_cast<float>(rgb[2]);
  }
  return out;
}

Image RgbToGray(const Image& rgb) {
  if (rgb.channels() != 3) {
    Fail(ErrorCode::kShapeMismatch, "RgbToGray expects 3 channels, got {}",
         rgb.channels());
  }
  Image out(1, rgb.height(), rgb.width());
  auto r = rgb.plane(0), g = rgb.plane(1), b = rgb.plane(2);
  auto gray = out.plane(0);
  for (size_t i = 0; i < gray.size(); ++i) {
    const double l = SrgbToLab(r[i], g[i], b[i]).l;
    gray[i] = static_cast<float>(std::clamp(l / 100.0, 0.0, 1.0));
  }
  return out;
}

Image ComposeLab(const Image& gray, const Image& ab) {
  if (gray.channels() != 1 || ab.channels() != 2 ||
      gray.height() != ab.height() || gray.width() != ab.width()) {
    Fail(ErrorCode::kShapeMismatch, "ComposeLab: gray {}x{}x{} vs ab {}x{}x{}",
         gray.channels(), gray.height(), gray.width(), ab.channels(),
         ab.height(), ab.width());
  }
  Image out(3, gray.height(), gray.width());
  auto g = gray.plane(0);
  auto l = out.plane(0);
  for (size_t i = 0; i < g.size(); ++i) l[i] = g[i] * 100.0f;
  std::copy(ab.plane(0).begin(), ab.plane(0).end(), out.plane(1).begin());
  std::copy(ab.plane(1).begin(), ab.plane(1).end(), out.plane(2).begin());
  return out;
}

}  // namespace boxgen
