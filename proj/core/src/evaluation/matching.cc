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

#include "boxgen/evaluation/matching.h"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

bool IsVehicle(const std::string& label) {
  const std::string want = kVehicleClass;
  return std::equal(label.begin(), label.end(), want.begin(), want.end(),
                    [](char a, char b) {
                      return std::tolower(static_cast<unsigned char>(a)) == b;
                    });
}

void CheckThreshold(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "{} must lie in [0, 1], got {}", name, v);
  }
}

}  // namespace

double Iou(const Box& a, const Box& b) {
  const long ix = std::max(0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const long iy = std::max(0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const long inter = ix * iy;
  const long uni = static_cast<long>(a.area()) + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

double RecallCount::percent() const {
  if (targets == 0) Fail(ErrorCode::kInvalidArgument, "recall is undefined without targets");
  return 100.0 * static_cast<double>(matched) / static_cast<double>(targets);
}

RecallCount CountRecall(const std::vector<std::vector<Detection>>& detections,
                        const std::vector<std::vector<Box>>& targets,
                        double conf_threshold, double iou_threshold) {
  CheckThreshold(conf_threshold, "confidence threshold");
  CheckThreshold(iou_threshold, "IoU threshold");
  if (detections.size() != targets.size()) {
    Fail(ErrorCode::kInvalidArgument, "{} detection lists for {} target lists",
         detections.size(), targets.size());
  }
  RecallCount count;
  for (size_t img = 0; img < targets.size(); ++img) {
    const std::vector<Detection>& dets = detections[img];
    const std::vector<Box>& boxes = targets[img];
    count.targets += static_cast<long>(boxes.size());
    std::vector<size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return dets[a].confidence > dets[b].confidence;
    });
    std::vector<bool> taken(boxes.size(), false);
    for (size_t d : order) {
      const Detection& det = dets[d];
      if (det.confidence < conf_threshold || !IsVehicle(det.label)) continue;
      int best = -1;
      double best_iou = iou_threshold;
      for (size_t t = 0; t < boxes.size(); ++t) {
        if (taken[t]) continue;
        const double v = Iou(det.box, boxes[t]);
        if (v >= best_iou && (best < 0 || v > best_iou)) {
          best = static_cast<int>(t);
          best_iou = v;
        }
      }
      if (best >= 0) {
        taken[best] = true;
        ++count.matched;
      }
    }
  }
  return count;
}

double Recall(const std::vector<std::vector<Detection>>& detections,
              const std::vector<std::vector<Box>>& targets, double conf_threshold,
              double iou_threshold) {
  return CountRecall(detections, targets, conf_threshold, iou_threshold).percent();
}

}  // namespace boxgen
