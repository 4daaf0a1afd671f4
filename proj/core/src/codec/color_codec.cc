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

#include "boxgen/codec/color_codec.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/base/hash.h"
#include "boxgen/imaging/color.h"
#include "boxgen/imaging/transform.h"

namespace boxgen {
namespace {

constexpr char kFixtureHeader[] = "# boxgen ab-bins v1";

double CellCenter(int i) {
  return ColorBinCodec::kGridMin + (i + 0.5) * ColorBinCodec::kGridStep;
}

double DistanceSquared(const AbPair& p, double a, double b) {
  const double da = p.a - a;
  const double db = p.b - b;
  return da * da + db * db;
}

}  // namespace

int AbCellIndex(double v) {
  return static_cast<int>(std::floor((v - ColorBinCodec::kGridMin) /
                                     ColorBinCodec::kGridStep));
}

ColorBinCodec::ColorBinCodec(std::vector<AbPair> centers)
    : centers_(std::move(centers)) {
  grid_.fill(-1);
  for (int id = 0; id < count(); ++id) {
    const int i = AbCellIndex(centers_[id].a);
    const int j = AbCellIndex(centers_[id].b);
    grid_[i * kGridCells + j] = id;
  }
}

ColorBinCodec ColorBinCodec::FromGamutSweep() {
  double linear[256];
  for (int v = 0; v < 256; ++v) linear[v] = SrgbDecode(v / 255.0);
  // A centre is kept once any swept colour lands within reach of it; only
  // the 5x5 block of centres around a colour's own cell can qualify.
  std::array<bool, kGridCells * kGridCells> keep{};
  for (int r = 0; r < 256; ++r) {
    for (int g = 0; g < 256; ++g) {
      for (int b = 0; b < 256; ++b) {
        const Lab lab = LinearRgbToLab(linear[r], linear[g], linear[b]);
        const int ci = AbCellIndex(lab.a);
        const int cj = AbCellIndex(lab.b);
        for (int i = std::max(ci - 2, 0); i <= std::min(ci + 2, kGridCells - 1);
             ++i) {
          for (int j = std::max(cj - 2, 0);
               j <= std::min(cj + 2, kGridCells - 1); ++j) {
            bool& k = keep[i * kGridCells + j];
            if (k) continue;
            if (DistanceSquared(AbPair{CellCenter(i), CellCenter(j)}, lab.a,
                                lab.b) <= kReachSquared) {
              k = true;
            }
          }
        }
      }
    }
  }
  std::vector<AbPair> centers;
  for (int i = 0; i < kGridCells; ++i) {
    for (int j = 0; j < kGridCells; ++j) {
      if (keep[i * kGridCells + j]) {
        centers.push_back({CellCenter(i), CellCenter(j)});
      }
    }
  }
  if (static_cast<int>(centers.size()) != kNumBins) {
    Fail(ErrorCode::kInternal,
         "gamut sweep produced {} ab bins, expected {} (calibration bug)",
         centers.size(), kNumBins);
  }
  return ColorBinCodec(std::move(centers));
}

ColorBinCodec ColorBinCodec::FromCenters(std::vector<AbPair> centers) {
  if (static_cast<int>(centers.size()) != kNumBins) {
    Fail(ErrorCode::kDataLoss, "codec needs {} centres, got {}", kNumBins,
         centers.size());
  }
  std::array<bool, kGridCells * kGridCells> seen{};
  for (size_t id = 0; id < centers.size(); ++id) {
    const AbPair& c = centers[id];
    const int i = AbCellIndex(c.a);
    const int j = AbCellIndex(c.b);
    if (i < 0 || i >= kGridCells || j < 0 || j >= kGridCells ||
        c.a != CellCenter(i) || c.b != CellCenter(j)) {
      Fail(ErrorCode::kDataLoss, "codec centre {} ({}, {}) is not a cell centre",
           id, c.a, c.b);
    }
    if (seen[i * kGridCells + j]) {
      Fail(ErrorCode::kDataLoss, "duplicate codec centre ({}, {})", c.a, c.b);
    }
    seen[i * kGridCells + j] = true;
    if (id > 0) {
      const AbPair& p = centers[id - 1];
      if (std::tie(p.a, p.b) >= std::tie(c.a, c.b)) {
        Fail(ErrorCode::kDataLoss, "codec centres out of order at {}", id);
      }
    }
  }
  return ColorBinCodec(std::move(centers));
}

ColorBinCodec ColorBinCodec::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kNotFound, "codec fixture not found: {}", path);
  std::string header;
  std::getline(in, header);
  if (header != kFixtureHeader) {
    Fail(ErrorCode::kDataLoss, "{}: unsupported codec fixture header \"{}\"",
         path, header);
  }
  int n = 0;
  if (!(in >> n)) Fail(ErrorCode::kDataLoss, "{}: missing bin count", path);
  std::vector<AbPair> centers(std::max(n, 0));
  for (AbPair& c : centers) {
    if (!(in >> c.a >> c.b)) {
      Fail(ErrorCode::kDataLoss, "{}: truncated centre list", path);
    }
  }
  return FromCenters(std::move(centers));
}

void ColorBinCodec::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kNotFound, "cannot write codec fixture {}", path);
  out << kFixtureHeader << "\n" << count() << "\n";
  for (const AbPair& c : centers_) out << fmt::format("{} {}\n", c.a, c.b);
}

int ColorBinCodec::CellClass(int i, int j) const {
  if (i < 0 || i >= kGridCells || j < 0 || j >= kGridCells) return -1;
  return grid_[i * kGridCells + j];
}

int ColorBinCodec::Encode(double a, double b) const {
  const int ci = AbCellIndex(a);
  const int cj = AbCellIndex(b);
  int best = -1;
  double best_d = 0.0;
  auto consider = [&](int id) {
    const double d = DistanceSquared(centers_[id], a, b);
    if (best < 0 || d < best_d || (d == best_d && id < best)) {
      best = id;
      best_d = d;
    }
  };
  if (CellClass(ci, cj) >= 0) {
    // The own cell's centre is within half a cell; any tie partner sits in
    // the 3x3 neighbourhood.
    for (int i = ci - 1; i <= ci + 1; ++i) {
      for (int j = cj - 1; j <= cj + 1; ++j) {
        if (const int id = CellClass(i, j); id >= 0) consider(id);
      }
    }
    return best;
  }
  for (int id = 0; id < count(); ++id) consider(id);
  return best;
}

ColorClassMap ColorBinCodec::Encode(const Image& ab) const {
  if (ab.channels() != 2) {
    Fail(ErrorCode::kShapeMismatch, "Encode expects a 2-channel ab image");
  }
  ColorClassMap out{ab.height(), ab.width(), {}};
  out.ids.resize(ab.plane_size());
  auto a = ab.plane(0), b = ab.plane(1);
  for (size_t i = 0; i < out.ids.size(); ++i) out.ids[i] = Encode(a[i], b[i]);
  return out;
}

Image ColorBinCodec::Decode(const Image& distribution) const {
  if (distribution.channels() != count()) {
    Fail(ErrorCode::kShapeMismatch, "Decode expects {} channels, got {}",
         count(), distribution.channels());
  }
  ColorClassMap classes{distribution.height(), distribution.width(), {}};
  classes.ids.assign(distribution.plane_size(), 0);
  for (size_t p = 0; p < classes.ids.size(); ++p) {
    float best = distribution.plane(0)[p];
    for (int k = 1; k < count(); ++k) {
      const float v = distribution.plane(k)[p];
      if (v > best) {
        best = v;
        classes.ids[p] = k;
      }
    }
  }
  return DecodeClasses(classes);
}

Image ColorBinCodec::DecodeExpected(const Image& distribution) const {
  if (distribution.channels() != count()) {
    Fail(ErrorCode::kShapeMismatch, "DecodeExpected expects {} channels, got {}",
         count(), distribution.channels());
  }
  Image out(2, distribution.height(), distribution.width());
  for (size_t p = 0; p < distribution.plane_size(); ++p) {
    double a = 0.0, b = 0.0;
    for (int k = 0; k < count(); ++k) {
      const double w = distribution.plane(k)[p];
      a += w * centers_[k].a;
      b += w * centers_[k].b;
    }
    out.plane(0)[p] = static_cast<float>(a);
    out.plane(1)[p] = static_cast<float>(b);
  }
  return out;
}

Image ColorBinCodec::DecodeClasses(const ColorClassMap& classes) const {
  Image out(2, classes.height, classes.width);
  for (size_t p = 0; p < classes.ids.size(); ++p) {
    const AbPair& c = centers_.at(classes.ids[p]);
    out.plane(0)[p] = static_cast<float>(c.a);
    out.plane(1)[p] = static_cast<float>(c.b);
  }
  return out;
}

namespace {

Image AbPlanes(const Image& lab_patch) {
  if (lab_patch.channels() != 3) {
    Fail(ErrorCode::kShapeMismatch, "expected a 3-channel Lab patch");
  }
  Image ab(2, lab_patch.height(), lab_patch.width());
  std::copy(lab_patch.plane(1).begin(), lab_patch.plane(1).end(),
            ab.plane(0).begin());
  std::copy(lab_patch.plane(2).begin(), lab_patch.plane(2).end(),
            ab.plane(1).begin());
  return ab;
}

}  // namespace

ColorClassMap ColorBinCodec::CeTarget(const Image& lab_patch, int out_height,
                                      int out_width) const {
  return Encode(ResizeArea(AbPlanes(lab_patch), out_height, out_width));
}

Image ColorBinCodec::SoftTarget(const Image& lab_patch, int out_height,
                                int out_width, int neighbors,
                                double sigma) const {
  const Image ab = ResizeArea(AbPlanes(lab_patch), out_height, out_width);
  Image out(count(), out_height, out_width, 0.0f);
  std::vector<int> order(count());
  std::vector<double> dist(count());
  for (size_t p = 0; p < ab.plane_size(); ++p) {
    const double a = ab.plane(0)[p], b = ab.plane(1)[p];
    for (int k = 0; k < count(); ++k) dist[k] = DistanceSquared(centers_[k], a, b);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + neighbors, order.end(),
                      [&](int x, int y) {
                        return dist[x] < dist[y] || (dist[x] == dist[y] && x < y);
                      });
    double total = 0.0;
    std::vector<double> w(neighbors);
    for (int n = 0; n < neighbors; ++n) {
      w[n] = std::exp(-dist[order[n]] / (2.0 * sigma * sigma));
      total += w[n];
    }
    for (int n = 0; n < neighbors; ++n) {
      out.plane(order[n])[p] = static_cast<float>(w[n] / total);
    }
  }
  return out;
}

const ColorBinCodec& DefaultCodec() {
  static const ColorBinCodec codec = [] {
    const std::string fixture = DataDir() + "/ab_bins_313.txt";
    if (std::filesystem::exists(fixture)) return ColorBinCodec::Load(fixture);
    return ColorBinCodec::FromGamutSweep();
  }();
  return codec;
}

void CheckDistribution(const Image& distribution) {
  if (distribution.channels() != ColorBinCodec::kNumBins) {
    Fail(ErrorCode::kShapeMismatch, "distribution needs {} channels, got {}",
         ColorBinCodec::kNumBins, distribution.channels());
  }
  for (size_t p = 0; p < distribution.plane_size(); ++p) {
    double sum = 0.0;
    for (int k = 0; k < distribution.channels(); ++k) {
      const float v = distribution.plane(k)[p];
      if (!(v >= 0.0f)) {
        Fail(ErrorCode::kInvalidArgument, "negative probability at pixel {}", p);
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-5) {
      Fail(ErrorCode::kInvalidArgument, "pixel {} probabilities sum to {}", p,
           sum);
    }
  }
}

}  // namespace boxgen
