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

#ifndef BOXGEN_TRAINING_TRAINER_H_
#define BOXGEN_TRAINING_TRAINER_H_

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "boxgen/dataset/samples.h"
#include "boxgen/networks/checkpoint.h"
#include "boxgen/networks/network.h"
#include "boxgen/nn/adam.h"
#include "boxgen/training/config.h"
#include "boxgen/training/loss_log.h"

namespace boxgen {

// Receives every LossRecord as it is produced (e.g. a LossLog).
using RecordSink = std::function<void(const LossRecord&)>;

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<LossRecord> records;
};

// Minimizes the mean L1 between the shape network's output and the gray
// target over config.shape_steps Adam steps. With `resume` holding a shape
// graph, training continues from it. A non-finite loss throws kNumerical.
TrainResult PretrainShape(const std::vector<TrainingSample>& samples,
                          const TrainingConfig& config,
                          const Checkpoint* resume = nullptr,
                          const RecordSink& sink = {});

// Minimizes colour cross-entropy of the colorizer on real gray patches.
TrainResult PretrainColorizer(const std::vector<TrainingSample>& samples,
                              const TrainingConfig& config,
                              const Checkpoint* resume = nullptr,
                              const RecordSink& sink = {});

// Sanity phase: trains the discriminator alone to separate real scenes from
// copies whose box is zero-filled, for config.disc_steps steps.
TrainResult TrainDiscriminatorSanity(const std::vector<TrainingSample>& samples,
                                     const TrainingConfig& config,
                                     const RecordSink& sink = {});

// Fraction of correct decisions (score > 0.5 on real, < 0.5 on zero-filled
// fakes) over all samples.
double ZeroFillAccuracy(const Network<float>& disc,
                        const std::vector<TrainingSample>& samples);

// One joint iteration, split so each update can be driven on its own.
// Shape and colorizer are frozen unless config.finetune_generators is set.
class JointTrainer {
 public:
  // `pretrained` must hold the shape and colorizer graphs; refiner and
  // discriminator are resumed from it when both are present.
  JointTrainer(const TrainingConfig& config, const Checkpoint& pretrained);

  // Runs the generator chain on samples[idx] and keeps the graph.
  void Forward(const std::vector<TrainingSample>& samples, const std::vector<size_t>& idx);

  // Adam step of the discriminator on real vs detached composed images.
  // Returns its loss. Generator weights are untouched.
  double DiscriminatorStep(long step);

  // Adam step of the refiner (plus shape and colorizer when fine-tuning)
  // with the discriminator frozen. Returns {adversarial, L1}. Needs a fresh
  // Forward afterwards.
  std::pair<double, double> GeneratorStep(long step);

  double shape_l1() const { return shape_l1_; }
  long start_step() const { return start_; }
  const Network<float>& shape() const { return shape_; }
  const Network<float>& colorizer() const { return colorizer_; }
  const Network<float>& refiner() const { return refiner_; }
  const Network<float>& discriminator() const { return disc_; }

  Checkpoint Export(const std::vector<TrainingSample>& samples, long steps) const;

 private:
  TrainingConfig config_;
  Checkpoint pretrained_;
  Network<float> shape_, colorizer_, refiner_, disc_;
  std::optional<nn::Adam<float>> opt_shape_, opt_colorizer_, opt_refiner_, opt_disc_;
  long start_ = 0;
  std::vector<Box> boxes_;
  nn::Var<float> real_, composed_;
  double shape_l1_ = 0.0;
};

// Joint adversarial phase. `pretrained` must hold the shape and colorizer
// graphs; refiner and discriminator are resumed from it when present. Each
// step updates the discriminator on real vs composed (detached) pairs, then
// the refiner on the generator loss. Shape and colorizer stay frozen unless
// config.finetune_generators is set.
TrainResult TrainJoint(const std::vector<TrainingSample>& samples,
                       const TrainingConfig& config, const Checkpoint& pretrained,
                       const RecordSink& sink = {});

// Erase value: config.fill, or the stats mean when it is negative.
float ResolveFill(const TrainingConfig& config, double mean_gray);

}  // namespace boxgen

#endif  // BOXGEN_TRAINING_TRAINER_H_
