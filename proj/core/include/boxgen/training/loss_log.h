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

#ifndef BOXGEN_TRAINING_LOSS_LOG_H_
#define BOXGEN_TRAINING_LOSS_LOG_H_

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace boxgen {

// One optimizer step. Losses a phase does not compute stay empty.
struct LossRecord {
  long step = 0;
  std::optional<double> shape_l1;
  std::optional<double> color_ce;
  std::optional<double> refine_l1;
  std::optional<double> disc_loss;
  std::optional<double> gen_adv;

  friend bool operator==(const LossRecord&, const LossRecord&) = default;
};

inline constexpr const char* kLossLogHeader =
    "step,shape_l1,color_ce,refine_l1,disc_loss,gen_adv";

// CSV row; values printed with 9 significant digits, empty cells for
// absent losses.
std::string FormatLossRecord(const LossRecord& record);
LossRecord ParseLossRecord(const std::string& line);

// Append-only CSV. The header is written when the file is new or empty.
class LossLog {
 public:
  explicit LossLog(const std::string& path);
  void Append(const LossRecord& record);

 private:
  std::ofstream out_;
};

std::vector<LossRecord> ReadLossLog(const std::string& path);

}  // namespace boxgen

#endif  // BOXGEN_TRAINING_LOSS_LOG_H_
