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

#include "boxgen/inference/generator.h"

#include <chrono>

#include "boxgen/base/error.h"
#include "boxgen/codec/color_codec.h"
#include "boxgen/imaging/color.h"
#include "boxgen/imaging/transform.h"
#include "boxgen/inference/stages.h"
#include "boxgen/nn/autograd.h"
#include "boxgen/nn/tensor.h"

namespace boxgen {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Network graphs need both dims divisible by four.
constexpr int kPadMultiple = 4;

std::vector<Image> Unstack(const nn::Tensor<float>& t, int height, int width) {
  std::vector<Image> out;
  for (int n = 0; n < t.n(); ++n) out.push_back(CropTopLeft(nn::ToImage(t, n), height, width));
  return out;
}

nn::Var<float> Batch(const std::vector<Image>& images) {
  return nn::Constant(nn::FromImages<float>(images));
}

}  // namespace

void ValidateRequest(const GenerationRequest& request) {
  CheckImage(request.image, 3, 0.0f, 1.0f, "request image");
  CheckBoxInside(request.box, request.image.height(), request.image.width());
  if (!request.options.override_size_filter) {
    CheckSizeFilter(request.box, request.options.bounds);
  }
  if (request.options.alpha_band < 0) {
    Fail(ErrorCode::kInvalidArgument, "alpha_band must be >= 0, got {}",
         request.options.alpha_band);
  }
}

Generator::Generator(const Checkpoint& checkpoint) {
  checkpoint.Require({GraphKind::kShape, GraphKind::kColorizer, GraphKind::kRefiner});
  try {
    shape_ = Network<float>::Import(*checkpoint.Find(GraphKind::kShape));
    colorizer_ = Network<float>::Import(*checkpoint.Find(GraphKind::kColorizer));
    refiner_ = Network<float>::Import(*checkpoint.Find(GraphKind::kRefiner));
  } catch (const Error& e) {
    Fail(ErrorCode::kDataLoss, "checkpoint graphs do not load: {}", e.what());
  }
  shape_.SetTrainable(false);
  colorizer_.SetTrainable(false);
  refiner_.SetTrainable(false);
  fill_ = checkpoint.fill;
  hash_ = CheckpointHash(checkpoint);
}

GenerationResult Generator::Generate(const GenerationRequest& request,
                                     StageTimings* timings) const {
  return Run({request}, timings).front();
}

std::vector<GenerationResult> Generator::GenerateBatch(
    const std::vector<GenerationRequest>& requests) const {
  if (requests.empty()) return {};
  return Run(requests, nullptr);
}

GenerationResult Generator::SubstituteExisting(const AnnotatedScene& scene, size_t index,
                                               const GenerationOptions& options) const {
  if (index >= scene.boxes.size()) {
    Fail(ErrorCode::kOutOfRange, "box index {} out of range for scene '{}' with {} boxes",
         index, scene.image_id, scene.boxes.size());
  }
  return Generate({scene.image, scene.boxes[index], options});
}

std::vector<GenerationResult> Generator::Run(const std::vector<GenerationRequest>& requests,
                                             StageTimings* timings) const {
  const int h = requests.front().image.height();
  const int w = requests.front().image.width();
  for (const GenerationRequest& r : requests) {
    ValidateRequest(r);
    if (r.image.height() != h || r.image.width() != w) {
      Fail(ErrorCode::kInvalidArgument,
           "batched requests must share one image size: {}x{} vs {}x{}", h, w,
           r.image.height(), r.image.width());
    }
  }
  nn::NoGradGuard no_grad;
  const ColorBinCodec& codec = DefaultCodec();
  const size_t n = requests.size();
  std::vector<GenerationResult> results(n);
  const auto start = Clock::now();

  // Gray completion of the erased box.
  std::vector<Image> gray(n), masked(n);
  for (size_t i = 0; i < n; ++i) {
    const GenerationRequest& r = requests[i];
    results[i].box = r.box;
    gray[i] = RgbToGray(r.image);
    const BoxMask mask(r.box, h, w);
    const Image erased = Erase(gray[i], mask, fill_);
    const Image m = mask.ToImage();
    Image input(2, h, w);
    std::copy(erased.data().begin(), erased.data().end(), input.plane(0).begin());
    std::copy(m.data().begin(), m.data().end(), input.plane(1).begin());
    masked[i] = PadReflectToMultiple(input, kPadMultiple);
  }
  const std::vector<Image> completed = Unstack(shape_.Forward(Batch(masked))->value, h, w);
  const double shape_ms = MillisSince(start);

  // Colourization of the completed box.
  const auto color_start = Clock::now();
  std::vector<Image> gray_patches(n), lightness(n);
  for (size_t i = 0; i < n; ++i) {
    const Box& box = requests[i].box;
    gray_patches[i] = CropPatch(completed[i], box);
    results[i].gray_stage = PastePatch(gray[i], gray_patches[i], box);
    lightness[i] = ColorizerInput(results[i].gray_stage, box);
  }
  const nn::Tensor<float> dist = colorizer_.Forward(Batch(lightness))->value;
  std::vector<Image> signed_color(n);
  for (size_t i = 0; i < n; ++i) {
    const Image rgb = ColorizePatch(nn::ToImage(dist, static_cast<int>(i)), gray_patches[i], codec);
    results[i].color_stage = PastePatch(requests[i].image, rgb, requests[i].box);
    signed_color[i] = ToSigned(PadReflectToMultiple(results[i].color_stage, kPadMultiple));
  }
  const double colorize_ms = MillisSince(color_start);

  // Refinement, then composition: only the box is taken from the refiner.
  const auto refine_start = Clock::now();
  const std::vector<Image> refined =
      Unstack(refiner_.Forward(Batch(signed_color))->value, h, w);
  for (size_t i = 0; i < n; ++i) {
    const GenerationRequest& r = requests[i];
    const Image patch = FromSigned(CropPatch(refined[i], r.box));
    results[i].composed = PastePatch(r.image, patch, r.box);
    if (r.options.alpha_band > 0) {
      results[i].blended = AlphaBlend(results[i].composed, r.image, r.box, r.options.alpha_band);
    }
  }
  if (timings != nullptr) {
    timings->shape_ms = shape_ms;
    timings->colorize_ms = colorize_ms;
    timings->refine_ms = MillisSince(refine_start);
    timings->total_ms = MillisSince(start);
  }
  return results;
}

nlohmann::json GenerationManifest(const GenerationRequest& request,
                                  const GenerationResult& result,
                                  const std::string& checkpoint_hash,
                                  const StageTimings& timings) {
  const Box& b = result.box;
  return {
      {"box", {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}},
      {"seed", request.options.seed},
      {"alpha_band", request.options.alpha_band},
      {"override_size_filter", request.options.override_size_filter},
      {"image", {{"height", request.image.height()}, {"width", request.image.width()}}},
      {"checkpoint", checkpoint_hash},
      {"timings_ms",
       {{"shape", timings.shape_ms},
        {"colorize", timings.colorize_ms},
        {"refine", timings.refine_ms},
        {"total", timings.total_ms}}},
  };
}

}  // namespace boxgen
