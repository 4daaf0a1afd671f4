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

#include "boxgen/training/losses.h"

#include <algorithm>
#include <cmath>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

double ClampScore(double s) {
  return std::clamp(s, kScoreEpsilon, 1.0 - kScoreEpsilon);
}

double MeanAbsDiff(const Image& a, const Image& b, const char* what) {
  if (!a.SameShape(b)) {
    Fail(ErrorCode::kShapeMismatch, "{}: {}x{}x{} vs {}x{}x{}", what, a.channels(),
         a.height(), a.width(), b.channels(), b.height(), b.width());
  }
  double total = 0.0;
  auto da = a.data(), db = b.data();
  for (size_t i = 0; i < da.size(); ++i) total += std::abs(double{da[i]} - db[i]);
  return total / static_cast<double>(da.size());
}

}  // namespace

double ShapeLoss(const Image& pred, const Image& target) {
  return MeanAbsDiff(pred, target, "ShapeLoss");
}

double ColorLoss(const Image& distribution, const ColorClassMap& target) {
  if (distribution.height() != target.height || distribution.width() != target.width) {
    Fail(ErrorCode::kShapeMismatch, "ColorLoss: distribution {}x{} vs targets {}x{}",
         distribution.height(), distribution.width(), target.height, target.width);
  }
  double total = 0.0;
  const size_t plane = distribution.plane_size();
  for (size_t i = 0; i < plane; ++i) {
    const int k = target.ids[i];
    if (k < 0 || k >= distribution.channels()) {
      Fail(ErrorCode::kOutOfRange, "ColorLoss: class {} outside [0,{})", k,
           distribution.channels());
    }
    const double p = distribution.plane(k)[i];
    total -= std::log(std::max(p, nn::kMinProbability));
  }
  return total / static_cast<double>(plane);
}

double RefineLoss(const Image& pred, const Image& target, double d_score,
                  double lambda_l1, double adv_weight) {
  return adv_weight * -std::log(ClampScore(d_score)) +
         lambda_l1 * MeanAbsDiff(pred, target, "RefineLoss");
}

double DiscLoss(std::span<const double> d_real, std::span<const double> d_fake) {
  if (d_real.empty() || d_real.size() != d_fake.size()) {
    Fail(ErrorCode::kShapeMismatch, "DiscLoss: {} real vs {} fake scores", d_real.size(),
         d_fake.size());
  }
  double total = 0.0;
  for (size_t i = 0; i < d_real.size(); ++i) {
    total += -std::log(ClampScore(d_real[i])) - std::log(1.0 - ClampScore(d_fake[i]));
  }
  return total / static_cast<double>(d_real.size());
}

double DiscLoss(double d_real, double d_fake) {
  return DiscLoss(std::span<const double>(&d_real, 1), std::span<const double>(&d_fake, 1));
}

}  // namespace boxgen
