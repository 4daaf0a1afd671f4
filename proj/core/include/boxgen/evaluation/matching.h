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

#ifndef BOXGEN_EVALUATION_MATCHING_H_
#define BOXGEN_EVALUATION_MATCHING_H_

#include <string>
#include <vector>

#include "boxgen/imaging/box.h"

namespace boxgen {

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr char kVehicleClass[] = "car";

struct Detection {
  Box box;
  double confidence = 0.0;  // in [0, 1]
  std::string label;        // compared to "car" ignoring case
};

double Iou(const Box& a, const Box& b);

struct RecallCount {
  long targets = 0;
  long matched = 0;
  double percent() const;
};

// Counts targets found by a vehicle detection with confidence >=
// conf_threshold and IoU >= iou_threshold. Per image, detections are taken
// in decreasing confidence (ties in input order) and each claims the
// unmatched target it overlaps most. Unmatched detections are ignored.
RecallCount CountRecall(const std::vector<std::vector<Detection>>& detections,
                        const std::vector<std::vector<Box>>& targets,
                        double conf_threshold,
                        double iou_threshold = kDefaultIouThreshold);

// CountRecall as a percentage; throws kInvalidArgument without targets.
double Recall(const std::vector<std::vector<Detection>>& detections,
              const std::vector<std::vector<Box>>& targets, double conf_threshold,
              double iou_threshold = kDefaultIouThreshold);

}  // namespace boxgen

#endif  // BOXGEN_EVALUATION_MATCHING_H_
