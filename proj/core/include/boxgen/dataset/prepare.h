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

#ifndef BOXGEN_DATASET_PREPARE_H_
#define BOXGEN_DATASET_PREPARE_H_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxgen/dataset/annotations.h"

namespace boxgen {

inline constexpr int kPreparedHeight = 180;
inline constexpr int kPreparedWidth = 320;

// Vehicle box size limits in prepared-image pixels, all inclusive.
struct SizeBounds {
  int min_width = 10;
  int min_height = 10;
  int max_width = 64;
  int max_height = 50;

  nlohmann::json ToJson() const;
  friend bool operator==(const SizeBounds&, const SizeBounds&) = default;
};

bool PassesSizeFilter(int width, int height, const SizeBounds& bounds = {});

// Throws kSizeFilter naming the first violated bound.
void CheckSizeFilter(const Box& box, const SizeBounds& bounds = {});

// Scales a source box to a target resolution: each edge is multiplied by
// target/source, rounded half-up, then clipped to the image. Returns
// nullopt when the result has zero width or height.
std::optional<Box> ScaleBox(const SourceBox& box, int source_height, int source_width,
                            int target_height, int target_width);

struct PrepareCounters {
  long boxes_total = 0;
  long boxes_degenerate = 0;
};

// Bilinear resize to target size plus box scaling. Degenerate boxes are
// dropped and counted.
AnnotatedScene PrepareScene(const std::string& image_id, const Image& source,
                            const std::vector<SourceBox>& boxes,
                            PrepareCounters* counters = nullptr,
                            int target_height = kPreparedHeight,
                            int target_width = kPreparedWidth);

// Keeps boxes passing the size filter, in their original order.
AnnotatedScene FilterBoxes(AnnotatedScene scene, const SizeBounds& bounds = {});

struct DatasetStats {
  long n_scenes = 0;
  long n_boxes_total = 0;
  long n_boxes_kept = 0;
  long n_boxes_degenerate = 0;
  double mean_gray = 0.5;

  nlohmann::json ToJson() const;
  static DatasetStats FromJson(const nlohmann::json& j);
};

// Mean of L/100 over every pixel of every scene.
double MeanGray(const std::vector<AnnotatedScene>& scenes);

struct Dataset {
  std::vector<AnnotatedScene> scenes;  // filtered
  DatasetStats stats;
};

struct PrepareReport {
  DatasetStats stats;
  std::vector<std::string> errors;  // one line per failed image
};

// Reads every annotated image, prepares and filters it, and writes
// <out_dir>/images/<id>.png, <out_dir>/annotations.json and
// <out_dir>/stats.json. Per-image failures are collected, not thrown.
PrepareReport PrepareDataset(const std::string& annotations_path,
                             const std::string& out_dir,
                             const SizeBounds& bounds = {},
                             const std::string& image_dir = "");

// Loads the output of PrepareDataset.
Dataset LoadPreparedDataset(const std::string& dir);

}  // namespace boxgen

#endif  // BOXGEN_DATASET_PREPARE_H_
