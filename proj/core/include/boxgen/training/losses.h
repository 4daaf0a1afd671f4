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

#ifndef BOXGEN_TRAINING_LOSSES_H_
#define BOXGEN_TRAINING_LOSSES_H_

#include <span>

#include "boxgen/codec/color_codec.h"
#include "boxgen/imaging/image.h"
#include "boxgen/nn/ops.h"

namespace boxgen {

// Score clamp for the log terms.
inline constexpr double kScoreEpsilon = 1e-7;

// Plain-value losses.

// Mean |pred - target| over all pixels.
double ShapeLoss(const Image& pred, const Image& target);

// Mean over pixels of -log p[target class].
double ColorLoss(const Image& distribution, const ColorClassMap& target);

// adv_weight * -log(d_score) + lambda_l1 * mean |pred - target|, with the
// score clamped to [eps, 1 - eps].
double RefineLoss(const Image& pred, const Image& target, double d_score,
                  double lambda_l1, double adv_weight);

// Batch mean of -log(d_real) - log(1 - d_fake), scores clamped.
double DiscLoss(std::span<const double> d_real, std::span<const double> d_fake);
double DiscLoss(double d_real, double d_fake);

// Differentiable forms over discriminator logits. Clamping the logit to
// +-log((1 - eps) / eps) equals clamping the score to [eps, 1 - eps].

template <typename T>
nn::Var<T> DiscLossFromLogits(const nn::Var<T>& real_logits,
                              const nn::Var<T>& fake_logits) {
  return nn::Add(nn::NegLogSigmoid(real_logits, T(1)),
                 nn::NegLogSigmoid(fake_logits, T(-1)));
}

// Non-saturating generator objective plus weighted reconstruction.
template <typename T>
nn::Var<T> RefineLossFromLogits(const nn::Var<T>& pred, const nn::Var<T>& target,
                                const nn::Var<T>& fake_logits, T lambda_l1,
                                T adv_weight) {
  return nn::Add(nn::Scale(nn::NegLogSigmoid(fake_logits, T(1)), adv_weight),
                 nn::Scale(nn::L1Mean(pred, target), lambda_l1));
}

}  // namespace boxgen

#endif  // BOXGEN_TRAINING_LOSSES_H_
