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

#ifndef BOXGEN_TESTS_TEST_UTIL_H_
#define BOXGEN_TESTS_TEST_UTIL_H_

#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "boxgen/imaging/box.h"
#include "boxgen/imaging/image.h"

namespace boxgen::testing {

inline Image RandomImage(int c, int h, int w, std::mt19937_64& rng, float lo = 0.0f,
                         float hi = 1.0f) {
  std::uniform_real_distribution<float> u(lo, hi);
  Image img(c, h, w);
  for (float& v : img.data()) v = u(rng);
  return img;
}

// 8-bit-representable values, as images read from PNG are.
inline Image RandomImage8(int c, int h, int w, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(0, 255);
  Image img(c, h, w);
  for (float& v : img.data()) v = static_cast<float>(u(rng)) / 255.0f;
  return img;
}

inline Box RandomBox(int h, int w, std::mt19937_64& rng, int min_side = 1) {
  std::uniform_int_distribution<int> bw(min_side, w), bh(min_side, h);
  Box b;
  b.w = bw(rng);
  b.h = bh(rng);
  b.x = std::uniform_int_distribution<int>(0, w - b.w)(rng);
  b.y = std::uniform_int_distribution<int>(0, h - b.h)(rng);
  return b;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("boxgen_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Reference sRGB -> CIELab written from the textbook formulas, kept apart
// from the library implementation.
inline std::array<double, 3> OracleLab(double r, double g, double b) {
  auto lin = [](double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double R = lin(r), G = lin(g), B = lin(b);
  const double X = 0.4124564 * R + 0.3575761 * G + 0.1804375 * B;
  const double Y = 0.2126729 * R + 0.7151522 * G + 0.0721750 * B;
  const double Z = 0.0193339 * R + 0.1191920 * G + 0.9503041 * B;
  const double xn = 0.95047, yn = 1.0, zn = 1.08883;
  auto f = [](double t) {
    const double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
  };
  const double fx = f(X / xn), fy = f(Y / yn), fz = f(Z / zn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

}  // namespace boxgen::testing

#endif  // BOXGEN_TESTS_TEST_UTIL_H_
