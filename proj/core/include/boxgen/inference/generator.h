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

#ifndef BOXGEN_INFERENCE_GENERATOR_H_
#define BOXGEN_INFERENCE_GENERATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxgen/dataset/annotations.h"
#include "boxgen/dataset/prepare.h"
#include "boxgen/imaging/box.h"
#include "boxgen/imaging/image.h"
#include "boxgen/networks/checkpoint.h"
#include "boxgen/networks/network.h"

namespace boxgen {

inline constexpr int kDefaultAlphaBand = 3;

struct GenerationOptions {
  // Width of the blended border frame; 0 disables blending.
  int alpha_band = 0;
  // Echoed in the manifest. The pipeline itself draws no random numbers.
  uint64_t seed = 0;
  bool override_size_filter = false;
  SizeBounds bounds;
};

struct GenerationRequest {
  Image image;  // RGB in [0, 1]
  Box box;
  GenerationOptions options;
};

struct GenerationResult {
  Image composed;     // refined box pasted into the input; outside bit-exact
  Image gray_stage;   // input lightness with the completed box
  Image color_stage;  // input RGB with the colourized box
  std::optional<Image> blended;  // composed after alpha blending, if asked
  Box box;
};

// Wall-clock milliseconds per pipeline stage.
struct StageTimings {
  double shape_ms = 0.0;
  double colorize_ms = 0.0;
  double refine_ms = 0.0;
  double total_ms = 0.0;
};

// Runs the frozen shape, colorizer and refiner graphs of a checkpoint.
// Const methods are safe to call concurrently.
class Generator {
 public:
  // Throws kDataLoss when a required graph is missing or malformed.
  explicit Generator(const Checkpoint& checkpoint);

  GenerationResult Generate(const GenerationRequest& request,
                            StageTimings* timings = nullptr) const;

  // All images must share one size. Matches sequential Generate within
  // floating tolerance.
  std::vector<GenerationResult> GenerateBatch(const std::vector<GenerationRequest>& requests) const;

  // Regenerates the vehicle at scene.boxes[index].
  GenerationResult SubstituteExisting(const AnnotatedScene& scene, size_t index,
                                      const GenerationOptions& options = {}) const;

  const std::string& checkpoint_hash() const { return hash_; }
  float fill() const { return fill_; }

 private:
  std::vector<GenerationResult> Run(const std::vector<GenerationRequest>& requests,
                                    StageTimings* timings) const;

  Network<float> shape_;
  Network<float> colorizer_;
  Network<float> refiner_;
  float fill_ = 0.5f;
  std::string hash_;
};

// Throws kSizeFilter / kOutOfRange naming the violated bound.
void ValidateRequest(const GenerationRequest& request);

// {box, seed, alpha_band, checkpoint, image dims, timings}.
nlohmann::json GenerationManifest(const GenerationRequest& request,
                                  const GenerationResult& result,
                                  const std::string& checkpoint_hash,
                                  const StageTimings& timings);

}  // namespace boxgen

#endif  // BOXGEN_INFERENCE_GENERATOR_H_
