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

#ifndef BOXGEN_CODEC_COLOR_CODEC_H_
#define BOXGEN_CODEC_COLOR_CODEC_H_

#include <array>
#include <string>
#include <vector>

#include "boxgen/imaging/image.h"

namespace boxgen {

struct AbPair {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const AbPair&, const AbPair&) = default;
};

// Per-pixel class ids in [0, 313).
struct ColorClassMap {
  int height = 0;
  int width = 0;
  std::vector<int> ids;

  int at(int y, int x) const { return ids[static_cast<size_t>(y) * width + x]; }
  friend bool operator==(const ColorClassMap&, const ColorClassMap&) = default;
};

// Quantized ab plane: a 10-unit grid over [-110, 110) whose cells have
// centres -105, -95, ..., 105. A cell becomes a class when its centre lies
// within one cell diagonal (10 * sqrt(2)) of the (a, b) of some 8-bit sRGB
// colour; that rule yields exactly 313 classes. Class ids follow centre
// order (a ascending, then b ascending). Immutable after construction.
class ColorBinCodec {
 public:
  static constexpr int kNumBins = 313;
  static constexpr int kGridCells = 22;
  static constexpr double kGridMin = -110.0;
  static constexpr double kGridStep = 10.0;
  static constexpr double kReachSquared = 2.0 * kGridStep * kGridStep;

  // Runs the exhaustive 256^3 sweep. Throws kInternal naming the achieved
  // count if it differs from 313.
  static ColorBinCodec FromGamutSweep();

  // Validates that the centres are 313 distinct grid-cell centres.
  static ColorBinCodec FromCenters(std::vector<AbPair> centers);

  // Fixture layout, one item per line:
  //   # boxgen ab-bins v1
  //   313
  //   <a> <b>     (313 lines, class order)
  static ColorBinCodec Load(const std::string& path);
  void Save(const std::string& path) const;

  int count() const { return static_cast<int>(centers_.size()); }
  const std::vector<AbPair>& centers() const { return centers_; }
  const AbPair& center(int id) const { return centers_[id]; }

  // Class of the grid cell (i, j), or -1 when the cell is out of gamut.
  int CellClass(int i, int j) const;

  // Nearest centre in Euclidean ab distance; ties go to the lowest id.
  int Encode(double a, double b) const;

  // Encodes a 2-channel (a, b) image.
  ColorClassMap Encode(const Image& ab) const;

  // Argmax decode of a 313-channel distribution to a 2-channel ab image;
  // ties go to the lowest id.
  Image Decode(const Image& distribution) const;

  // Probability-weighted mean of the centres per pixel.
  Image DecodeExpected(const Image& distribution) const;

  Image DecodeClasses(const ColorClassMap& classes) const;

  // Area-averages the ab planes of a Lab patch to out_height x out_width,
  // then encodes.
  ColorClassMap CeTarget(const Image& lab_patch, int out_height,
                         int out_width) const;

  // Soft target: Gaussian weights (sigma in ab units) over the `neighbors`
  // nearest centres of the area-averaged ab. Off the default training path.
  Image SoftTarget(const Image& lab_patch, int out_height, int out_width,
                   int neighbors = 5, double sigma = 5.0) const;

 private:
  explicit ColorBinCodec(std::vector<AbPair> centers);

  std::vector<AbPair> centers_;
  std::array<int, kGridCells * kGridCells> grid_;
};

// Process-wide codec: the shipped fixture if readable, the sweep otherwise.
const ColorBinCodec& DefaultCodec();

// Checks a 313-channel distribution: values >= 0, per-pixel sum 1 +- 1e-5.
void CheckDistribution(const Image& distribution);

// Grid cell index of an ab value (may fall outside [0, 22)).
int AbCellIndex(double v);

}  // namespace boxgen

#endif  // BOXGEN_CODEC_COLOR_CODEC_H_
