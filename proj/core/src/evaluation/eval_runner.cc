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

#include "boxgen/evaluation/eval_runner.h"

#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/imaging/transform.h"

namespace boxgen {
namespace {

RecallRow MakeRow(const std::string& method, const std::vector<std::vector<Detection>>& dets,
                  const std::vector<std::vector<Box>>& targets, const EvalOptions& options) {
  RecallRow row;
  row.method = method;
  for (double t : options.thresholds) {
    const RecallCount c = CountRecall(dets, targets, t, options.iou_threshold);
    row.targets = c.targets;
    row.matched[t] = c.matched;
    row.percent[t] = c.percent();
  }
  return row;
}

Box WholePatch(const Image& patch) { return {0, 0, patch.width(), patch.height()}; }

}  // namespace

std::string GeneratedImageId(const std::string& scene_id, size_t index) {
  return fmt::format("{}_gen{}", scene_id, index);
}

std::map<std::string, std::vector<Box>> EvalGroundTruth(const std::vector<AnnotatedScene>& scenes) {
  std::map<std::string, std::vector<Box>> out;
  for (const AnnotatedScene& s : scenes) {
    out[s.image_id] = s.boxes;
    for (size_t k = 0; k < s.boxes.size(); ++k) out[GeneratedImageId(s.image_id, k)] = {s.boxes[k]};
  }
  return out;
}

EvalReport RunEval(const std::vector<AnnotatedScene>& scenes, const Generator& generator,
                   const Detector& detector, const FeatureExtractor& extractor,
                   const EvalOptions& options) {
  if (options.thresholds.empty()) Fail(ErrorCode::kInvalidArgument, "no confidence thresholds");
  long total = 0;
  for (const AnnotatedScene& s : scenes) total += static_cast<long>(s.boxes.size());
  if (total == 0) Fail(ErrorCode::kInvalidArgument, "no boxes to evaluate");

  std::vector<std::vector<Detection>> gen_dets, orig_dets;
  std::vector<std::vector<Box>> gen_targets, orig_targets;
  std::vector<Image> gen_patches, real_patches;
  std::vector<Box> patch_boxes;
  std::vector<std::string> patch_ids;
  long done = 0;
  for (const AnnotatedScene& scene : scenes) {
    if (scene.boxes.empty()) continue;
    std::vector<Image> composed;
    std::vector<std::string> ids;
    for (size_t k = 0; k < scene.boxes.size(); ++k) {
      const Box& box = scene.boxes[k];
      const GenerationResult r = generator.SubstituteExisting(scene, k, options.generation);
      const Image& shown = r.blended ? *r.blended : r.composed;
      gen_patches.push_back(CropPatch(shown, box));
      real_patches.push_back(CropPatch(scene.image, box));
      patch_boxes.push_back(WholePatch(gen_patches.back()));
      patch_ids.push_back(GeneratedImageId(scene.image_id, k));
      composed.push_back(shown);
      ids.push_back(patch_ids.back());
      gen_targets.push_back({box});
    }
    try {
      for (auto& d : detector.Detect(composed, ids)) gen_dets.push_back(std::move(d));
      if (options.include_original) {
        orig_dets.push_back(detector.Detect({scene.image}, {scene.image_id}).at(0));
        orig_targets.push_back(scene.boxes);
      }
    } catch (const Error& e) {
      Fail(ErrorCode::kAdapter, "detector failed on scene '{}' after {} of {} boxes: {}",
           scene.image_id, done, total, e.what());
    }
    if (gen_dets.size() != gen_targets.size()) {
      Fail(ErrorCode::kAdapter, "detector returned {} lists for {} images on scene '{}'",
           gen_dets.size(), gen_targets.size(), scene.image_id);
    }
    done += static_cast<long>(scene.boxes.size());
  }

  EvalReport report;
  report.thresholds = options.thresholds;
  report.iou_threshold = options.iou_threshold;
  report.recall.push_back(MakeRow("generated", gen_dets, gen_targets, options));
  if (options.include_original) {
    report.recall.push_back(MakeRow("original", orig_dets, orig_targets, options));
  }
  report.detector_id = detector.id();
  report.extractor_id = extractor.id();
  report.checkpoint_hash = generator.checkpoint_hash();
  if (total >= 2) {
    report.fid = Fid(ExtractPatchFeatures(gen_patches, patch_boxes, patch_ids, extractor),
                     ExtractPatchFeatures(real_patches, patch_boxes, patch_ids, extractor));
  }
  report.config = {{"n_scenes", scenes.size()},
                   {"n_boxes", total},
                   {"override_size_filter", options.generation.override_size_filter},
                   {"alpha_band", options.generation.alpha_band},
                   {"include_original", options.include_original}};
  return report;
}

}  // namespace boxgen
