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

#include "boxgen/evaluation/report.h"

#include <fmt/format.h>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

// JSON object keys must be strings; thresholds print as "0.12".
std::string Key(double threshold) { return fmt::format("{}", threshold); }

}  // namespace

const RecallRow* EvalReport::Row(const std::string& method) const {
  for (const RecallRow& r : recall) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const RecallRow& r : recall) {
    nlohmann::json matched = nlohmann::json::object();
    nlohmann::json percent = nlohmann::json::object();
    for (const auto& [t, m] : r.matched) matched[Key(t)] = m;
    for (const auto& [t, p] : r.percent) percent[Key(t)] = p;
    rows.push_back({{"method", r.method},
                    {"n_targets", r.targets},
                    {"n_matched", matched},
                    {"recall_by_threshold", percent}});
  }
  return {{"thresholds", thresholds},
          {"iou_threshold", iou_threshold},
          {"recall", rows},
          {"fid", fid ? nlohmann::json(*fid) : nlohmann::json(nullptr)},
          {"detector", detector_id},
          {"extractor", extractor_id},
          {"checkpoint", checkpoint_hash},
          {"config", config}};
}

EvalReport EvalReport::FromJson(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.thresholds = j.at("thresholds").get<std::vector<double>>();
    r.iou_threshold = j.at("iou_threshold").get<double>();
    for (const nlohmann::json& row : j.at("recall")) {
      RecallRow out;
      out.method = row.at("method").get<std::string>();
      out.targets = row.at("n_targets").get<long>();
      for (double t : r.thresholds) {
        out.matched[t] = row.at("n_matched").at(Key(t)).get<long>();
        out.percent[t] = row.at("recall_by_threshold").at(Key(t)).get<double>();
      }
      r.recall.push_back(std::move(out));
    }
    if (!j.at("fid").is_null()) r.fid = j.at("fid").get<double>();
    r.detector_id = j.at("detector").get<std::string>();
    r.extractor_id = j.at("extractor").get<std::string>();
    r.checkpoint_hash = j.at("checkpoint").get<std::string>();
    r.config = j.at("config");
    return r;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, "malformed eval report: {}", e.what());
  }
}

std::string EvalReport::ToText() const {
  std::string out = fmt::format("Detector recall (%), IoU >= {}\n", iou_threshold);
  out += fmt::format("{:<12}{:>10}", "method", "targets");
  for (double t : thresholds) out += fmt::format("{:>14}", fmt::format("conf {}", t));
  out += '\n';
  for (const RecallRow& r : recall) {
    out += fmt::format("{:<12}{:>10}", r.method, r.targets);
    for (double t : thresholds) {
      auto it = r.percent.find(t);
      out += it == r.percent.end() ? fmt::format("{:>14}", "-")
                                   : fmt::format("{:>14.2f}", it->second);
    }
    out += '\n';
  }
  out += '\n';
  out += fmt::format("{:<12}{:>10}\n", "method", "FID");
  out += fid ? fmt::format("{:<12}{:>10.3f}\n", "generated", *fid)
             : fmt::format("{:<12}{:>10}\n", "generated", "n/a");
  out += fmt::format("features: {}\ndetector: {}\n", extractor_id, detector_id);
  return out;
}

}  // namespace boxgen
