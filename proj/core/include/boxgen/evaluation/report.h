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

#ifndef BOXGEN_EVALUATION_REPORT_H_
#define BOXGEN_EVALUATION_REPORT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace boxgen {

// Detector recall of one image source at every confidence threshold.
struct RecallRow {
  std::string method;  // "generated" or "original"
  long targets = 0;
  std::map<double, long> matched;   // threshold -> matched targets
  std::map<double, double> percent;  // threshold -> recall in %
};

struct EvalReport {
  std::vector<double> thresholds;
  double iou_threshold = 0.5;
  std::vector<RecallRow> recall;
  std::optional<double> fid;  // generated vs real patches
  std::string detector_id;
  std::string extractor_id;
  std::string checkpoint_hash;
  nlohmann::json config = nlohmann::json::object();

  const RecallRow* Row(const std::string& method) const;

  nlohmann::json ToJson() const;
  static EvalReport FromJson(const nlohmann::json& j);
  // Recall table (methods x thresholds) followed by the FID row.
  std::string ToText() const;
};

}  // namespace boxgen

#endif  // BOXGEN_EVALUATION_REPORT_H_
