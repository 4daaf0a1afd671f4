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

#include "boxgen/training/trainer.h"

#include <cmath>

#include "boxgen/base/error.h"
#include "boxgen/codec/color_codec.h"
#include "boxgen/imaging/transform.h"
#include "boxgen/inference/stages.h"
#include "boxgen/nn/adam.h"
#include "boxgen/training/losses.h"

namespace boxgen {
namespace {

using nn::Tensor;
using nn::Var;
using Net = Network<float>;

void CheckSamples(const std::vector<TrainingSample>& samples) {
  if (samples.empty()) Fail(ErrorCode::kInvalidArgument, "no training samples");
}

template <typename Get>
Var<float> Stack(const std::vector<TrainingSample>& samples,
                 const std::vector<size_t>& idx, Get get) {
  std::vector<Image> images;
  images.reserve(idx.size());
  for (size_t i : idx) images.push_back(get(samples[i]));
  return nn::Constant(nn::FromImages<float>(images));
}

double CheckFinite(const Var<float>& loss, const char* phase, long step) {
  const double v = loss->value[0];
  if (!std::isfinite(v)) {
    Fail(ErrorCode::kNumerical, "{} diverged at step {}: loss is {}", phase, step, v);
  }
  return v;
}

// Loads a graph from `from` when present, otherwise builds it fresh.
Net LoadOrBuild(const Checkpoint* from, GraphKind kind, const TrainingConfig& config) {
  if (from != nullptr) {
    if (const GraphState* state = from->Find(kind)) return Net::Import(*state);
  }
  return Net::Build(kind, config.arch(), config.seed);
}

nn::AdamOptions AdamWith(double lr) {
  nn::AdamOptions o;
  o.learning_rate = lr;
  return o;
}

// Advances the batch stream past batches consumed by an earlier run.
BatchStream ResumedStream(size_t count, const TrainingConfig& config, long done,
                          uint64_t salt) {
  BatchStream stream(count, config.batch_size, config.seed ^ salt);
  for (long i = 0; i < done; ++i) stream.Next();
  return stream;
}

Var<float> LocalPatches(const Var<float>& images, const std::vector<Box>& boxes) {
  std::vector<Var<float>> parts;
  for (size_t i = 0; i < boxes.size(); ++i) {
    parts.push_back(nn::ResizeBilinear(
        nn::CropBox(nn::SliceSample(images, static_cast<int>(i)), boxes[i]),
        kLocalPatchSize, kLocalPatchSize));
  }
  return nn::StackSamples(parts);
}

Image ZeroFilled(const TrainingSample& s) {
  return Erase(s.rgb_target, BoxMask(s.box, s.rgb_target.height(), s.rgb_target.width()),
               0.0f);
}

Checkpoint StartFrom(const Checkpoint* resume, const TrainingConfig& config,
                     const std::vector<TrainingSample>& samples) {
  Checkpoint out = resume != nullptr ? *resume : Checkpoint{};
  out.config_hash = config.Hash();
  out.fill = samples.front().fill;
  return out;
}

}  // namespace

float ResolveFill(const TrainingConfig& config, double mean_gray) {
  return static_cast<float>(config.fill >= 0.0 ? config.fill : mean_gray);
}

TrainResult PretrainShape(const std::vector<TrainingSample>& samples,
                          const TrainingConfig& config, const Checkpoint* resume,
                          const RecordSink& sink) {
  config.Validate();
  CheckSamples(samples);
  Net net = LoadOrBuild(resume, GraphKind::kShape, config);
  const long start = (resume && resume->Find(GraphKind::kShape)) ? resume->step : 0;
  nn::Adam<float> opt(net.Parameters(), AdamWith(config.lr_shape));
  BatchStream stream = ResumedStream(samples.size(), config, start, 0x5a);
  TrainResult result;
  for (long step = 1; step <= config.shape_steps; ++step) {
    const std::vector<size_t> idx = stream.Next();
    Var<float> input = Stack(samples, idx, [](const TrainingSample& s) { return s.masked_input; });
    Var<float> target = Stack(samples, idx, [](const TrainingSample& s) { return s.gray_target; });
    opt.ZeroGrad();
    Var<float> loss = nn::L1Mean(net.Forward(input), target);
    LossRecord rec;
    rec.step = start + step;
    rec.shape_l1 = CheckFinite(loss, "shape pretraining", rec.step);
    nn::Backward(loss);
    opt.Step();
    result.records.push_back(rec);
    if (sink) sink(rec);
    if (config.stop_below > 0.0 && *rec.shape_l1 < config.stop_below) break;
  }
  result.checkpoint = StartFrom(resume, config, samples);
  result.checkpoint.step = start + static_cast<long>(result.records.size());
  result.checkpoint.Put(net.Export());
  return result;
}

TrainResult PretrainColorizer(const std::vector<TrainingSample>& samples,
                              const TrainingConfig& config, const Checkpoint* resume,
                              const RecordSink& sink) {
  config.Validate();
  CheckSamples(samples);
  const ColorBinCodec& codec = DefaultCodec();
  Net net = LoadOrBuild(resume, GraphKind::kColorizer, config);
  const bool resumed = resume && resume->Find(GraphKind::kColorizer);
  if (!resumed && !config.backbone_weights.empty()) {
    const Checkpoint backbone = LoadCheckpoint(config.backbone_weights);
    if (!backbone.graphs.empty()) LoadBackboneConvs(net, backbone.graphs.front().tensors);
  }
  const long start = resumed ? resume->step : 0;

  // Inputs and targets are fixed per sample; build them once.
  std::vector<Image> inputs;
  std::vector<ColorClassMap> targets;
  std::vector<Image> soft;
  for (const TrainingSample& s : samples) {
    inputs.push_back(ColorizerInput(s.gray_target, s.box));
    targets.push_back(ColorizerTarget(s.rgb_target, s.box, codec));
    if (config.soft_targets) soft.push_back(ColorizerSoftTarget(s.rgb_target, s.box, codec));
  }

  nn::Adam<float> opt(net.Parameters(), AdamWith(config.lr_colorizer));
  BatchStream stream = ResumedStream(samples.size(), config, start, 0xc0);
  TrainResult result;
  for (long step = 1; step <= config.colorizer_steps; ++step) {
    const std::vector<size_t> idx = stream.Next();
    std::vector<Image> batch;
    std::vector<int> ids;
    for (size_t i : idx) {
      batch.push_back(inputs[i]);
      ids.insert(ids.end(), targets[i].ids.begin(), targets[i].ids.end());
    }
    opt.ZeroGrad();
    Var<float> logits = net.ForwardLogits(nn::Constant(nn::FromImages<float>(batch)));
    Var<float> loss;
    if (config.soft_targets) {
      std::vector<Image> soft_batch;
      for (size_t i : idx) soft_batch.push_back(soft[i]);
      loss = nn::SoftCrossEntropy(nn::SoftmaxChannels(logits),
                                  nn::FromImages<float>(soft_batch));
    } else {
      loss = nn::CrossEntropyFromLogits<float>(logits, ids);
    }
    LossRecord rec;
    rec.step = start + step;
    rec.color_ce = CheckFinite(loss, "colorizer pretraining", rec.step);
    nn::Backward(loss);
    opt.Step();
    result.records.push_back(rec);
    if (sink) sink(rec);
    if (config.stop_below > 0.0 && *rec.color_ce < config.stop_below) break;
  }
  result.checkpoint = StartFrom(resume, config, samples);
  result.checkpoint.step = start + static_cast<long>(result.records.size());
  result.checkpoint.Put(net.Export());
  return result;
}

TrainResult TrainDiscriminatorSanity(const std::vector<TrainingSample>& samples,
                                     const TrainingConfig& config, const RecordSink& sink) {
  config.Validate();
  CheckSamples(samples);
  Net disc = Net::Build(GraphKind::kDiscriminator, config.arch(), config.seed);
  nn::Adam<float> opt(disc.Parameters(), AdamWith(config.lr_disc));
  BatchStream stream(samples.size(), config.batch_size, config.seed ^ 0xd5);
  TrainResult result;
  for (long step = 1; step <= config.disc_steps; ++step) {
    const std::vector<size_t> idx = stream.Next();
    std::vector<Box> boxes;
    for (size_t i : idx) boxes.push_back(samples[i].box);
    Var<float> real = Stack(samples, idx, [](const TrainingSample& s) { return s.rgb_target; });
    Var<float> fake = Stack(samples, idx, ZeroFilled);
    opt.ZeroGrad();
    Var<float> loss = DiscLossFromLogits(disc.Discriminate(real, LocalPatches(real, boxes)),
                                         disc.Discriminate(fake, LocalPatches(fake, boxes)));
    LossRecord rec;
    rec.step = step;
    rec.disc_loss = CheckFinite(loss, "discriminator sanity training", step);
    nn::Backward(loss);
    opt.Step();
    result.records.push_back(rec);
    if (sink) sink(rec);
  }
  result.checkpoint = StartFrom(nullptr, config, samples);
  result.checkpoint.step = config.disc_steps;
  result.checkpoint.Put(disc.Export());
  return result;
}

double ZeroFillAccuracy(const Net& disc, const std::vector<TrainingSample>& samples) {
  CheckSamples(samples);
  nn::NoGradGuard no_grad;
  long correct = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const std::vector<size_t> idx = {i};
    const std::vector<Box> boxes = {samples[i].box};
    Var<float> real = Stack(samples, idx, [](const TrainingSample& s) { return s.rgb_target; });
    Var<float> fake = Stack(samples, idx, ZeroFilled);
    if (disc.Score(real, LocalPatches(real, boxes))->value[0] > 0.5f) ++correct;
    if (disc.Score(fake, LocalPatches(fake, boxes))->value[0] < 0.5f) ++correct;
  }
  return static_cast<double>(correct) / (2.0 * static_cast<double>(samples.size()));
}

JointTrainer::JointTrainer(const TrainingConfig& config, const Checkpoint& pretrained)
    : config_(config), pretrained_(pretrained) {
  config.Validate();
  pretrained.Require({GraphKind::kShape, GraphKind::kColorizer});
  shape_ = Net::Import(*pretrained.Find(GraphKind::kShape));
  colorizer_ = Net::Import(*pretrained.Find(GraphKind::kColorizer));
  const bool resumed = pretrained.Find(GraphKind::kRefiner) != nullptr &&
                       pretrained.Find(GraphKind::kDiscriminator) != nullptr;
  refiner_ = LoadOrBuild(&pretrained, GraphKind::kRefiner, config);
  disc_ = LoadOrBuild(&pretrained, GraphKind::kDiscriminator, config);
  start_ = resumed ? pretrained.step : 0;
  shape_.SetTrainable(config.finetune_generators);
  colorizer_.SetTrainable(config.finetune_generators);
  opt_refiner_.emplace(refiner_.Parameters(), AdamWith(config.lr_refiner));
  opt_shape_.emplace(shape_.Parameters(), AdamWith(config.lr_shape));
  opt_colorizer_.emplace(colorizer_.Parameters(), AdamWith(config.lr_colorizer));
  opt_disc_.emplace(disc_.Parameters(), AdamWith(config.lr_disc));
}

void JointTrainer::Forward(const std::vector<TrainingSample>& samples,
                           const std::vector<size_t>& idx) {
  const ColorBinCodec& codec = DefaultCodec();
  boxes_.clear();
  for (size_t i : idx) boxes_.push_back(samples[i].box);
  Var<float> masked = Stack(samples, idx, [](const TrainingSample& s) { return s.masked_input; });
  Var<float> gray_target = Stack(samples, idx, [](const TrainingSample& s) { return s.gray_target; });
  real_ = Stack(samples, idx, [](const TrainingSample& s) { return s.rgb_target; });

  // Shape completion, colourization of the box, paste into the real image,
  // refinement, composition.
  Var<float> gray = shape_.Forward(masked);
  std::vector<Var<float>> color_parts;
  for (size_t i = 0; i < idx.size(); ++i) {
    const Box& box = boxes_[i];
    Var<float> patch = nn::CropBox(nn::SliceSample(gray, static_cast<int>(i)), box);
    Var<float> lightness =
        nn::Affine(nn::ResizeBilinear(patch, kColorizerInput, kColorizerInput), 2.0f, -1.0f);
    Var<float> probs = colorizer_.Forward(lightness);
    Var<float> ab = nn::ExpectedAb(nn::ResizeBilinear(probs, box.h, box.w), codec);
    Var<float> rgb = nn::LabToRgb(nn::ConcatChannels<float>({nn::Scale(patch, 100.0f), ab}));
    color_parts.push_back(nn::PasteBox(nn::SliceSample(real_, static_cast<int>(i)), rgb, box));
  }
  Var<float> color_stage = nn::StackSamples(color_parts);
  Var<float> refined =
      nn::Affine(refiner_.Forward(nn::Affine(color_stage, 2.0f, -1.0f)), 0.5f, 0.5f);
  std::vector<Var<float>> composed_parts;
  for (size_t i = 0; i < idx.size(); ++i) {
    const int n = static_cast<int>(i);
    composed_parts.push_back(
        nn::Compose(nn::SliceSample(real_, n), nn::SliceSample(refined, n), boxes_[i]));
  }
  composed_ = nn::StackSamples(composed_parts);
  nn::NoGradGuard no_grad;
  shape_l1_ = nn::L1Mean(gray, gray_target)->value[0];
}

double JointTrainer::DiscriminatorStep(long step) {
  if (!composed_) Fail(ErrorCode::kFailedPrecondition, "DiscriminatorStep before Forward");
  disc_.SetTrainable(true);
  opt_disc_->ZeroGrad();
  Var<float> fake = nn::Detach(composed_);
  Var<float> loss = DiscLossFromLogits(disc_.Discriminate(real_, LocalPatches(real_, boxes_)),
                                       disc_.Discriminate(fake, LocalPatches(fake, boxes_)));
  const double v = CheckFinite(loss, "joint training (discriminator)", step);
  nn::Backward(loss);
  opt_disc_->Step();
  disc_.SetTrainable(false);
  return v;
}

std::pair<double, double> JointTrainer::GeneratorStep(long step) {
  if (!composed_) Fail(ErrorCode::kFailedPrecondition, "GeneratorStep before Forward");
  disc_.SetTrainable(false);
  opt_refiner_->ZeroGrad();
  opt_shape_->ZeroGrad();
  opt_colorizer_->ZeroGrad();
  Var<float> fake_logits = disc_.Discriminate(composed_, LocalPatches(composed_, boxes_));
  Var<float> adv = nn::NegLogSigmoid(fake_logits, 1.0f);
  Var<float> l1 = nn::L1Mean(composed_, real_);
  Var<float> loss = nn::Add(nn::Scale(adv, static_cast<float>(config_.adv_weight)),
                            nn::Scale(l1, static_cast<float>(config_.lambda_l1)));
  const double adv_v = CheckFinite(adv, "joint training (generator)", step);
  const double l1_v = CheckFinite(l1, "joint training (reconstruction)", step);
  nn::Backward(loss);
  opt_refiner_->Step();
  if (config_.finetune_generators) {
    opt_shape_->Step();
    opt_colorizer_->Step();
  }
  // The tape holds the pre-update generator; a new Forward is required.
  composed_ = nullptr;
  return {adv_v, l1_v};
}

Checkpoint JointTrainer::Export(const std::vector<TrainingSample>& samples, long steps) const {
  Checkpoint out = StartFrom(&pretrained_, config_, samples);
  out.step = start_ + steps;
  out.Put(shape_.Export());
  out.Put(colorizer_.Export());
  out.Put(refiner_.Export());
  out.Put(disc_.Export());
  return out;
}

TrainResult TrainJoint(const std::vector<TrainingSample>& samples,
                       const TrainingConfig& config, const Checkpoint& pretrained,
                       const RecordSink& sink) {
  CheckSamples(samples);
  JointTrainer trainer(config, pretrained);
  BatchStream stream = ResumedStream(samples.size(), config, trainer.start_step(), 0x70);
  TrainResult result;
  for (long step = 1; step <= config.joint_steps; ++step) {
    LossRecord rec;
    rec.step = trainer.start_step() + step;
    trainer.Forward(samples, stream.Next());
    rec.shape_l1 = trainer.shape_l1();
    // Discriminator first on real vs detached composed images, then the
    // refiner against the updated, now frozen, discriminator.
    rec.disc_loss = trainer.DiscriminatorStep(rec.step);
    const auto [adv, l1] = trainer.GeneratorStep(rec.step);
    rec.gen_adv = adv;
    rec.refine_l1 = l1;
    result.records.push_back(rec);
    if (sink) sink(rec);
  }
  result.checkpoint = trainer.Export(samples, config.joint_steps);
  return result;
}

}  // namespace boxgen
