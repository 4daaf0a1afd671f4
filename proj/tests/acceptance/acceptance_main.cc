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

// Acceptance runner: one PASS/FAIL line per primary criterion. Tolerances
// are pinned below. Exits non-zero when any criterion fails.
//
//   boxgen_acceptance [--only SUBSTRING] [--list]

#include <sys/wait.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "boxgen/base/error.h"
#include "boxgen/base/hash.h"
#include "boxgen/codec/color_codec.h"
#include "boxgen/dataset/prepare.h"
#include "boxgen/dataset/samples.h"
#include "boxgen/evaluation/fid.h"
#include "boxgen/evaluation/matching.h"
#include "boxgen/imaging/color.h"
#include "boxgen/imaging/image_io.h"
#include "boxgen/inference/generator.h"
#include "boxgen/networks/network.h"
#include "boxgen/nn/ops.h"
#include "boxgen/training/losses.h"
#include "boxgen/training/trainer.h"
#include "grad_check.h"
#include "test_util.h"
#include "toy_checkpoint.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;
using testing::DVar;
using testing::GradCheck;
using testing::Miniature;
using testing::Params;
using testing::RandomTensor;

// ------------------------------------------------------------ tolerances

constexpr int kPreservationPairs = 100;
constexpr int kCodecSamples = 10000;
constexpr double kCodecQuantBound = 5.0 * M_SQRT2;  // half a cell diagonal
constexpr int kColorSamples = 10000;
constexpr double kRoundTripTol = 1.0 / 255.0;
constexpr double kAnchorTol = 0.1;
constexpr double kSimplexTol = 1e-4;
constexpr double kGradTol = 1e-3;
// Central-difference step for the 313-way softmax: its many tiny gradient
// entries drown in roundoff at 1e-6, and the O(h^2) error at 1e-4 is ~1e-8.
constexpr double kCeStep = 1e-4;
constexpr double kLossUnitTol = 1e-6;
constexpr double kShapeTarget = 0.05;
constexpr long kShapeSteps = 500;
constexpr double kColorTarget = 0.5;
constexpr long kColorSteps = 1000;
constexpr double kDiscTarget = 0.95;
constexpr long kDiscSteps = 200;
constexpr double kFidIdentityTol = 1e-6;
constexpr double kFidAnalyticTol = 1e-6;
constexpr double kFidSampledRel = 0.02;
constexpr long kFidSamples = 100000;
constexpr double kRecallTol = 0.005;  // percentage points

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Accumulates sub-check failures into one outcome.
class Checks {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string& s) { notes_.push_back(s); }
  Outcome Done() const {
    std::string detail;
    const auto& parts = failures_.empty() ? notes_ : failures_;
    for (size_t i = 0; i < parts.size(); ++i) detail += (i ? "; " : "") + parts[i];
    return {failures_.empty(), detail};
  }

 private:
  std::vector<std::string> failures_, notes_;
};

bool OutsideBitEqual(const Image& a, const Image& b, const Box& box) {
  if (!a.SameShape(b)) return false;
  for (int c = 0; c < a.channels(); ++c) {
    for (int y = 0; y < a.height(); ++y) {
      for (int x = 0; x < a.width(); ++x) {
        if (box.Contains(x, y)) continue;
        if (std::bit_cast<uint32_t>(a.at(c, y, x)) != std::bit_cast<uint32_t>(b.at(c, y, x))) {
          return false;
        }
      }
    }
  }
  return true;
}

// ------------------------------------------------------------- criteria

Outcome PixelPreservation() {
  const Generator gen(testing::ToyCheckpoint(11, 16, 0.45f));
  std::mt19937_64 rng(101);
  int exact = 0;
  for (int i = 0; i < kPreservationPairs; ++i) {
    // Every tenth pair at the prepared size, the rest at random sizes.
    const bool full = i % 10 == 0;
    const int h = full ? kPreparedHeight : std::uniform_int_distribution<int>(12, 120)(rng);
    const int w = full ? kPreparedWidth : std::uniform_int_distribution<int>(12, 200)(rng);
    const Image img = testing::RandomImage(3, h, w, rng);
    GenerationRequest req{img, testing::RandomBox(h, w, rng), {}};
    req.options.override_size_filter = true;
    exact += OutsideBitEqual(gen.Generate(req).composed, img, req.box);
  }
  return {exact == kPreservationPairs,
          fmt::format("{}/{} pairs bit-exact outside the box", exact, kPreservationPairs)};
}

Outcome Codec() {
  Checks c;
  const ColorBinCodec& codec = DefaultCodec();
  c.Expect(codec.count() == 313, fmt::format("fixture has {} bins", codec.count()));
  const ColorBinCodec swept = ColorBinCodec::FromGamutSweep();
  c.Expect(swept.centers() == codec.centers(), "gamut sweep differs from the cached fixture");
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(0, 1);
  int mismatches = 0;
  double worst = 0;
  for (int t = 0; t < kCodecSamples; ++t) {
    const Lab lab = SrgbToLab(u(rng), u(rng), u(rng));
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < codec.count(); ++k) {
      const double da = codec.center(k).a - lab.a, db = codec.center(k).b - lab.b;
      if (da * da + db * db < best_d) {
        best_d = da * da + db * db;
        best = k;
      }
    }
    const int got = codec.Encode(lab.a, lab.b);
    mismatches += got != best;
    worst = std::max(worst, std::hypot(codec.center(got).a - lab.a, codec.center(got).b - lab.b));
  }
  c.Expect(mismatches == 0, fmt::format("{} encode mismatches vs linear scan", mismatches));
  c.Expect(worst <= kCodecQuantBound + 1e-9,
           fmt::format("max quantization error {:.4f} > {:.4f}", worst, kCodecQuantBound));
  c.Note(fmt::format("313 bins; {} samples match linear scan; max error {:.3f} <= {:.3f}",
                     kCodecSamples, worst, kCodecQuantBound));
  return c.Done();
}

Outcome Colorimetry() {
  Checks c;
  std::mt19937_64 rng(103);
  const Image rgb = testing::RandomImage(3, 1, kColorSamples, rng);
  const Image back = LabToRgb(RgbToLab(rgb));
  double worst = 0;
  for (size_t i = 0; i < rgb.data().size(); ++i) {
    worst = std::max(worst, static_cast<double>(std::abs(rgb.data()[i] - back.data()[i])));
  }
  c.Expect(worst <= kRoundTripTol, fmt::format("round trip error {:.2e}", worst));
  double anchor = 0;
  for (const auto& px : std::vector<std::array<double, 3>>{{1, 1, 1}, {0, 0, 0}, {1, 0, 0}}) {
    const Lab lab = SrgbToLab(px[0], px[1], px[2]);
    const auto want = testing::OracleLab(px[0], px[1], px[2]);
    anchor = std::max({anchor, std::abs(lab.l - want[0]), std::abs(lab.a - want[1]),
                       std::abs(lab.b - want[2])});
  }
  c.Expect(anchor <= kAnchorTol, fmt::format("anchor deviation {:.3f}", anchor));
  c.Note(fmt::format("round trip max {:.2e} over {} pixels; anchors within {:.1e}", worst,
                     kColorSamples, anchor));
  return c.Done();
}

Outcome ShapeContracts() {
  Checks c;
  nn::NoGradGuard no_grad;
  std::mt19937_64 rng(104);
  const ArchOptions full;
  std::ifstream in(DataDir() + "/architectures.json");
  const nlohmann::json params = nlohmann::json::parse(in)["parameters"];

  const auto shape = Network<float>::Build(GraphKind::kShape, full, 1);
  const auto s = shape.Forward(nn::Constant(
      nn::FromImage<float>(testing::RandomImage(2, kPreparedHeight, kPreparedWidth, rng))));
  c.Expect(s->value.shape() == nn::Shape{1, 1, kPreparedHeight, kPreparedWidth},
           "shape network output size");
  c.Expect(std::all_of(s->value.span().begin(), s->value.span().end(),
                       [](float v) { return v >= 0.0f && v <= 1.0f; }),
           "shape network output outside [0, 1]");

  const auto colorizer = Network<float>::Build(GraphKind::kColorizer, full, 1);
  const auto d = colorizer.Forward(
      nn::Constant(nn::FromImage<float>(testing::RandomImage(1, 128, 128, rng, -1, 1))));
  c.Expect(d->value.shape() == nn::Shape{1, 313, 8, 8}, "colorizer output size");
  double simplex = 0;
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double sum = 0;
      for (int k = 0; k < 313; ++k) {
        const float v = d->value.at(0, k, y, x);
        if (v < 0) simplex = 1;
        sum += v;
      }
      simplex = std::max(simplex, std::abs(sum - 1.0));
    }
  }
  c.Expect(simplex <= kSimplexTol, fmt::format("colorizer off the simplex by {:.2e}", simplex));

  const auto refiner = Network<float>::Build(GraphKind::kRefiner, full, 1);
  const auto r = refiner.Forward(nn::Constant(nn::FromImage<float>(
      testing::RandomImage(3, kPreparedHeight, kPreparedWidth, rng, -1, 1))));
  c.Expect(r->value.shape() == nn::Shape{1, 3, kPreparedHeight, kPreparedWidth},
           "refiner output size");
  c.Expect(std::all_of(r->value.span().begin(), r->value.span().end(),
                       [](float v) { return std::abs(v) <= 1.0f; }),
           "refiner output outside [-1, 1]");

  const auto disc = Network<float>::Build(GraphKind::kDiscriminator, full, 1);
  const auto score = disc.Score(
      nn::Constant(nn::FromImage<float>(
          testing::RandomImage(3, kPreparedHeight, kPreparedWidth, rng, -1, 1))),
      nn::Constant(nn::FromImage<float>(testing::RandomImage(3, 64, 64, rng, -1, 1))));
  c.Expect(score->value.size() == 1 && score->value[0] > 0 && score->value[0] < 1,
           "discriminator score not a scalar in (0, 1)");

  const std::pair<const char*, const Network<float>*> nets[] = {
      {"shape", &shape}, {"colorizer", &colorizer}, {"refiner", &refiner},
      {"discriminator", &disc}};
  std::string counts;
  for (const auto& [name, net] : nets) {
    const int64_t want = params[name].get<int64_t>();
    c.Expect(net->ParameterCount() == want,
             fmt::format("{} has {} parameters, fixture {}", name, net->ParameterCount(), want));
    counts += fmt::format("{}{}={}", counts.empty() ? "" : " ", name, net->ParameterCount());
  }
  c.Note("all four contracts hold; " + counts);
  return c.Done();
}

Outcome GradientChecks() {
  std::mt19937_64 rng(105);
  std::vector<std::pair<std::string, double>> errs;

  {
    const auto net = Miniature(2, 1, Activation::kSigmoid, rng);
    const DVar x = nn::Constant(RandomTensor(nn::Shape{2, 2, 6, 6}, rng));
    const DVar y = nn::Constant(RandomTensor(nn::Shape{2, 1, 3, 3}, rng, 0, 1));
    errs.emplace_back("shape L1", GradCheck([&] { return nn::L1Mean(net.Forward(x), y); },
                                            Params(net)));
  }
  {
    const auto net = Miniature(1, 313, Activation::kSoftmax, rng);
    const DVar x = nn::Constant(RandomTensor(nn::Shape{1, 1, 6, 6}, rng));
    std::vector<int> ids(9);
    for (int& id : ids) id = std::uniform_int_distribution<int>(0, 312)(rng);
    errs.emplace_back("colour CE", GradCheck(
                                       [&] {
                                         return nn::CrossEntropyFromLogits<double>(
                                             net.Forward(x, false), ids);
                                       },
                                       Params(net), kCeStep));
  }
  const auto gen = Miniature(3, 3, Activation::kTanh, rng);
  const auto disc = Sequential<double>({{LayerKind::kConv, 4, 3, 2, 1, Activation::kLeakyRelu},
                                        {LayerKind::kLinear, 1, 1, 1, 1, Activation::kNone}},
                                       3, 3, 3, rng);
  const DVar x = nn::Constant(RandomTensor(nn::Shape{2, 3, 6, 6}, rng));
  const DVar real = nn::Constant(RandomTensor(nn::Shape{2, 3, 3, 3}, rng));
  auto disc_params = Params(disc);
  errs.emplace_back("disc", GradCheck(
                                [&] {
                                  const DVar fake = nn::Detach(gen.Forward(x));
                                  return DiscLossFromLogits(disc.Forward(real), disc.Forward(fake));
                                },
                                disc_params));
  for (auto& p : disc_params) {
    p->requires_grad = false;
    p->ZeroGrad();
  }
  errs.emplace_back("refine", GradCheck(
                                  [&] {
                                    const DVar fake = gen.Forward(x);
                                    return RefineLossFromLogits(fake, real, disc.Forward(fake),
                                                                0.1, 1.0);
                                  },
                                  Params(gen)));
  Checks c;
  std::string detail;
  for (const auto& [name, e] : errs) {
    c.Expect(e <= kGradTol, fmt::format("{} relative error {:.2e}", name, e));
    detail += fmt::format("{}{} {:.1e}", detail.empty() ? "" : ", ", name, e);
  }
  c.Note("max relative error: " + detail);
  return c.Done();
}

Outcome LossUnitValues() {
  Checks c;
  std::mt19937_64 rng(106);
  const Image a = testing::RandomImage(1, 9, 13, rng);
  const double ls = ShapeLoss(a, a);
  Image uniform(313, 4, 4, 1.0f / 313.0f);
  ColorClassMap target{4, 4, {}};
  for (int i = 0; i < 16; ++i) target.ids.push_back(std::uniform_int_distribution<int>(0, 312)(rng));
  const double ce = ColorLoss(uniform, target);
  const double dl = DiscLoss(0.5, 0.5);
  c.Expect(ls == 0.0, fmt::format("L_S(I, I) = {}", ls));
  c.Expect(std::abs(ce - std::log(313.0)) <= kLossUnitTol,
           fmt::format("uniform CE {:.9f} vs ln 313", ce));
  c.Expect(std::abs(dl - 2 * std::log(2.0)) <= kLossUnitTol,
           fmt::format("disc loss {:.9f} vs 2 ln 2", dl));
  c.Note(fmt::format("L_S=0, CE-ln313={:.1e}, D-2ln2={:.1e}", ce - std::log(313.0),
                     dl - 2 * std::log(2.0)));
  return c.Done();
}

std::vector<TrainingSample> TenSamples(int h, int w, uint64_t seed) {
  std::vector<TrainingSample> samples = MakeSamples(SyntheticScenes(8, h, w, seed), 0.5f);
  if (samples.size() < 10) Fail(ErrorCode::kInternal, "only {} synthetic samples", samples.size());
  samples.resize(10);
  return samples;
}

// Settings from the pilot runs in docs/pilot_runs.md.
Outcome ToyLearning() {
  Checks c;
  const auto start = std::chrono::steady_clock::now();
  const auto secs = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  TrainingConfig shape;
  shape.width_divisor = 4;
  shape.image_height = 32;
  shape.image_width = 32;
  shape.batch_size = 10;
  shape.lr_shape = 1e-3;
  shape.shape_steps = kShapeSteps;
  shape.seed = 1;
  const TrainResult s = PretrainShape(TenSamples(32, 32, 1), shape);
  const double ls = *s.records.back().shape_l1;
  c.Expect(ls < kShapeTarget, fmt::format("shape L1 {:.4f} after {} steps", ls, kShapeSteps));
  const double t_shape = secs();

  TrainingConfig color = shape;
  color.width_divisor = 8;
  color.lr_colorizer = 1e-3;
  color.colorizer_steps = kColorSteps;
  color.stop_below = kColorTarget;
  const TrainResult col = PretrainColorizer(TenSamples(32, 32, 2), color);
  const double ce = *col.records.back().color_ce;
  const long ce_steps = col.records.back().step;
  c.Expect(ce < kColorTarget, fmt::format("colour CE {:.4f} after {} steps", ce, ce_steps));
  const double t_color = secs() - t_shape;

  TrainingConfig dc;
  dc.width_divisor = 8;
  dc.image_height = 32;
  dc.image_width = 48;
  dc.batch_size = 10;
  dc.lr_disc = 1e-4;
  dc.disc_steps = kDiscSteps;
  dc.seed = 3;
  const std::vector<TrainingSample> ds = TenSamples(32, 48, 3);
  const TrainResult d = TrainDiscriminatorSanity(ds, dc);
  const double acc = ZeroFillAccuracy(
      Network<float>::Import(*d.checkpoint.Find(GraphKind::kDiscriminator)), ds);
  c.Expect(acc > kDiscTarget, fmt::format("zero-fill accuracy {:.3f}", acc));
  c.Note(fmt::format("shape L1 {:.4f} @{} ({:.0f}s); CE {:.4f} @{} ({:.0f}s); disc acc {:.3f} @{}",
                     ls, kShapeSteps, t_shape, ce, ce_steps, t_color, acc, kDiscSteps));
  return c.Done();
}

Outcome DatasetRules() {
  Checks c;
  int wrong = 0;
  for (int w = 1; w <= 80; ++w) {
    for (int h = 1; h <= 60; ++h) {
      wrong += PassesSizeFilter(w, h) != (w >= 10 && w <= 64 && h >= 10 && h <= 50);
    }
  }
  c.Expect(wrong == 0, fmt::format("{} filter disagreements", wrong));
  // Coordinates on the 4-pixel grid scale exactly by 0.25.
  std::mt19937_64 rng(107);
  int inexact = 0;
  for (int i = 0; i < 5000; ++i) {
    const int x = 4 * std::uniform_int_distribution<int>(0, 310)(rng);
    const int y = 4 * std::uniform_int_distribution<int>(0, 170)(rng);
    const int w = 4 * std::uniform_int_distribution<int>(1, (1280 - x) / 4)(rng);
    const int h = 4 * std::uniform_int_distribution<int>(1, (720 - y) / 4)(rng);
    const auto b = ScaleBox({double(x), double(y), double(x + w), double(y + h)}, 720, 1280,
                            kPreparedHeight, kPreparedWidth);
    inexact += !b || *b != Box{x / 4, y / 4, w / 4, h / 4};
  }
  c.Expect(inexact == 0, fmt::format("{} boxes not scaled exactly", inexact));
  c.Note("filter equals brute force over 80x60; 5000 x0.25 boxes exact");
  return c.Done();
}

Eigen::MatrixXd DenmanBeaversSqrt(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd y = a, z = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  for (int i = 0; i < 100; ++i) {
    const Eigen::MatrixXd yi = y.inverse(), zi = z.inverse();
    y = 0.5 * (y + zi);
    z = 0.5 * (z + yi);
  }
  return y;
}

FeatureSet Gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, long n,
                    std::mt19937_64& rng) {
  const Eigen::MatrixXd l = cov.llt().matrixL();
  std::normal_distribution<double> normal;
  FeatureSet s{"acceptance", Eigen::MatrixXd(n, mean.size())};
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd z(mean.size());
    for (long k = 0; k < z.size(); ++k) z[k] = normal(rng);
    s.features.row(i) = (mean + l * z).transpose();
  }
  return s;
}

Outcome FidCriterion() {
  Checks c;
  std::mt19937_64 rng(108);
  const FeatureSet x = Gaussian(Eigen::VectorXd::Zero(6), Eigen::MatrixXd::Identity(6, 6), 500, rng);
  const double self = Fid(x, x);
  c.Expect(std::abs(self) <= kFidIdentityTol, fmt::format("fid(X, X) = {:.2e}", self));

  const FeatureSet one = Gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 2.0),
                                  1000, rng);
  double analytic = 0;
  for (double d : {0.5, 2.0, -3.0}) {
    FeatureSet shifted = one;
    shifted.features.array() += d;
    analytic = std::max(analytic, std::abs(Fid(one, shifted) - d * d));
  }
  c.Expect(analytic <= kFidAnalyticTol, fmt::format("1-D shift error {:.2e}", analytic));

  Eigen::Matrix3d sa, sb;
  sa << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5;
  sb << 1.0, -0.4, 0.0, -0.4, 1.5, 0.3, 0.0, 0.3, 0.8;
  const Eigen::Vector3d ma(0.0, 1.0, -1.0), mb(0.5, -0.5, 2.0);
  const double want = (ma - mb).squaredNorm() + (sa + sb - 2.0 * DenmanBeaversSqrt(sa * sb)).trace();
  const double got = Fid(Gaussian(ma, sa, kFidSamples, rng), Gaussian(mb, sb, kFidSamples, rng));
  const double rel = std::abs(got - want) / want;
  c.Expect(rel <= kFidSampledRel, fmt::format("3-D sampled {:.4f} vs {:.4f}", got, want));

  FeatureSet noise = Gaussian(Eigen::VectorXd::Zero(6), Eigen::MatrixXd::Identity(6, 6), 500, rng);
  std::vector<double> curve;
  for (double sigma : {0.0, 0.1, 0.5, 1.0}) {
    FeatureSet y = x;
    y.features += sigma * noise.features;
    curve.push_back(Fid(x, y));
  }
  c.Expect(std::is_sorted(curve.begin(), curve.end(), std::less_equal<>()) &&
               std::adjacent_find(curve.begin(), curve.end()) == curve.end(),
           fmt::format("noise curve not increasing: {}", fmt::join(curve, ", ")));
  c.Note(fmt::format("self {:.1e}; 1-D err {:.1e}; 3-D rel err {:.2f}%; noise curve {:.4f}", self,
                     analytic, 100 * rel, fmt::join(curve, " < ")));
  return c.Done();
}

Outcome RecallHarness() {
  Checks c;
  using Dets = std::vector<std::vector<Detection>>;
  using Targets = std::vector<std::vector<Box>>;
  // Ground-truth echo on synthetic scenes.
  Targets gt;
  Dets echo;
  for (const AnnotatedScene& s : SyntheticScenes(6, 64, 96, 7)) {
    gt.push_back(s.boxes);
    echo.emplace_back();
    for (const Box& b : s.boxes) echo.back().push_back({b, 1.0, "car"});
  }
  for (double t : {0.12, 0.3}) {
    const double r = Recall(echo, gt, t);
    c.Expect(r == 100.0, fmt::format("echo recall {} at {}", r, t));
  }
  // Three targets; two matched by cars at confidence 0.2.
  const Targets three = {{{0, 0, 20, 20}, {40, 0, 20, 20}}, {{10, 10, 30, 30}}};
  const Dets hits = {{{{1, 1, 20, 20}, 0.2, "car"}, {{40, 0, 20, 20}, 0.95, "truck"}},
                     {{{10, 10, 30, 29}, 0.2, "car"}}};
  const double r12 = Recall(hits, three, 0.12), r30 = Recall(hits, three, 0.3);
  c.Expect(std::abs(r12 - 66.67) <= kRecallTol, fmt::format("3-target recall(0.12) = {}", r12));
  c.Expect(r30 == 0.0, fmt::format("3-target recall(0.3) = {}", r30));
  // Monotonicity over random detection sets.
  std::mt19937_64 rng(109);
  std::uniform_int_distribution<int> pos(0, 40), len(4, 20), jitter(0, 3);
  std::uniform_real_distribution<double> conf(0, 1);
  const std::vector<double> grid = {0.0, 0.12, 0.3, 0.5, 0.7, 1.0};
  int violations = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Targets t(2);
    Dets d(2);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 3; ++k) {
        const Box b{pos(rng), pos(rng), len(rng), len(rng)};
        t[i].push_back(b);
        d[i].push_back({{b.x + jitter(rng), b.y + jitter(rng), b.w, b.h}, conf(rng), "car"});
        d[i].push_back({{pos(rng), pos(rng), len(rng), len(rng)}, conf(rng), "car"});
      }
    }
    for (size_t k = 0; k + 1 < grid.size(); ++k) {
      violations += Recall(d, t, grid[k]) < Recall(d, t, grid[k + 1]);
      violations += Recall(d, t, 0.12, grid[k]) < Recall(d, t, 0.12, grid[k + 1]);
    }
  }
  c.Expect(violations == 0, fmt::format("{} monotonicity violations", violations));
  c.Note(fmt::format("echo 100/100; 3-target {:.2f}/{:.2f}; monotone over 300 random sets", r12,
                     r30));
  return c.Done();
}

// ---------------------------------------------------------- determinism

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int RunCli(const std::vector<std::string>& args, const fs::path& log) {
  std::string cmd = BOXGEN_CLI_PATH;
  for (const std::string& a : args) cmd += " '" + a + "'";
  cmd += " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Every regular file under `dir`, relative path -> bytes.
std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() != ".out") {
      out[fs::relative(e.path(), dir).string()] = Slurp(e.path());
    }
  }
  return out;
}

// Runs every command of the toy pipeline into `root`.
std::string RunPipeline(const fs::path& root) {
  fs::create_directories(root / "raw");
  std::mt19937_64 rng(110);
  WritePng((root / "raw/a.png").string(), testing::RandomImage8(3, 72, 128, rng));
  WritePng((root / "input.png").string(), testing::RandomImage8(3, 32, 48, rng));
  std::ofstream(root / "labels.json") << R"([{"name": "a.png", "labels": [
      {"category": "car", "box2d": {"x1": 10, "y1": 10, "x2": 30, "y2": 24}}]}])";
  const std::string cfg = std::string(BOXGEN_SOURCE_DIR) + "/configs/toy.cfg";
  const auto p = [&](const std::string& s) { return (root / s).string(); };
  const std::vector<std::vector<std::string>> steps = {
      {"prepare", "--annotations", p("labels.json"), "--images", p("raw"), "--out", p("prepared")},
      {"--config", cfg, "train-shape", "--synthetic", "4", "--out", p("shape.ckpt"), "--log",
       p("shape.csv")},
      {"--config", cfg, "train-colorizer", "--synthetic", "4", "--resume", p("shape.ckpt"),
       "--out", p("pre.ckpt"), "--log", p("color.csv")},
      {"--config", cfg, "train-joint", "--synthetic", "4", "--pretrained", p("pre.ckpt"), "--out",
       p("full.ckpt"), "--log", p("joint.csv")},
      {"--config", cfg, "train-disc", "--synthetic", "4", "--out", p("disc.ckpt"), "--log",
       p("disc.csv")},
      {"generate", "--image", p("input.png"), "--box", "8,6,24,16", "--checkpoint",
       p("full.ckpt"), "--alpha-band", "3", "--seed", "4", "--out", p("gen")},
      {"--config", cfg, "substitute", "--synthetic", "3", "--image-id", "synthetic_0002",
       "--checkpoint", p("full.ckpt"), "--out", p("sub")},
      {"--config", cfg, "eval", "--synthetic", "3", "--checkpoint", p("full.ckpt"),
       "--extractor-size", "16", "--extractor-dim", "8", "--out", p("eval")},
  };
  for (size_t i = 0; i < steps.size(); ++i) {
    const int status = RunCli(steps[i], root / fmt::format("step{}.out", i));
    if (status != 0) {
      const std::string& command = steps[i][steps[i][0] == "--config" ? 2 : 0];
      return fmt::format("{} exited {}", command, status);
    }
  }
  return "";
}

Outcome Determinism() {
  testing::TempDir dir;
  Checks c;
  for (const char* run : {"a", "b"}) {
    const std::string err = RunPipeline(dir.path() / run);
    c.Expect(err.empty(), err);
  }
  const auto a = Snapshot(dir.path() / "a"), b = Snapshot(dir.path() / "b");
  c.Expect(a.size() == b.size(), "runs wrote different file sets");
  int pngs = 0, logs = 0;
  for (const auto& [name, bytes] : a) {
    auto it = b.find(name);
    c.Expect(it != b.end() && it->second == bytes, name + " differs");
    pngs += name.ends_with(".png");
    logs += name.ends_with(".csv");
  }
  c.Note(fmt::format("{} files identical across two runs ({} loss logs, {} PNGs)", a.size(), logs,
                     pngs));
  return c.Done();
}

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

int Main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"pixel-preservation", PixelPreservation},
      {"codec", Codec},
      {"colorimetry", Colorimetry},
      {"shape-contracts", ShapeContracts},
      {"gradient-checks", GradientChecks},
      {"loss-unit-values", LossUnitValues},
      {"toy-learning", ToyLearning},
      {"dataset-rules", DatasetRules},
      {"fid", FidCriterion},
      {"recall-harness", RecallHarness},
      {"determinism", Determinism},
  };
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const Criterion& c : criteria) std::cout << c.name << '\n';
      return 0;
    }
    if (arg == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::cerr << "usage: boxgen_acceptance [--only SUBSTRING] [--list]\n";
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && c.name.find(only) == std::string::npos) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << fmt::format("{} {} ({:.1f}s): {}\n", o.pass ? "PASS" : "FAIL", c.name, secs,
                             o.detail)
              << std::flush;
  }
  std::cout << fmt::format("{}/{} criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace boxgen

int main(int argc, char** argv) { return boxgen::Main(argc, argv); }
