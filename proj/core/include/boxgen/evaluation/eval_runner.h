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

#ifndef BOXGEN_EVALUATION_EVAL_RUNNER_H_
#define BOXGEN_EVALUATION_EVAL_RUNNER_H_

#include <map>
#include <string>
#include <vector>

#include "boxgen/dataset/annotations.h"
#include "boxgen/evaluation/adapters.h"
#include "boxgen/evaluation/report.h"
#include "boxgen/inference/generator.h"

namespace boxgen {

struct EvalOptions {
  std::vector<double> thresholds = {0.12, 0.3};
  double iou_threshold = kDefaultIouThreshold;
  // Also run the detector on the untouched scenes.
  bool include_original = true;
  GenerationOptions generation;
};

// Image id of the scene with box `index` regenerated.
std::string GeneratedImageId(const std::string& scene_id, size_t index);

// Boxes of every scene under its own id and, for each box, the single
// target of its generated image. Feeds GroundTruthEchoDetector.
std::map<std::string, std::vector<Box>> EvalGroundTruth(const std::vector<AnnotatedScene>& scenes);

// Regenerates every box of every scene, measures detector recall on the
// generated images (target: the regenerated box only) and FID between
// generated and real box patches. Adapter failures abort with kAdapter and
// a count of the boxes already processed.
EvalReport RunEval(const std::vector<AnnotatedScene>& scenes, const Generator& generator,
                   const Detector& detector, const FeatureExtractor& extractor,
                   const EvalOptions& options = {});

}  // namespace boxgen

#endif  // BOXGEN_EVALUATION_EVAL_RUNNER_H_
