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

#include "boxgen/training/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/base/hash.h"

namespace boxgen {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename N>
N ParseNumber(std::string_view key, std::string_view text) {
  N value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    Fail(ErrorCode::kInvalidArgument, "config key '{}': '{}' is not a valid number", key,
         text);
  }
  return value;
}

bool ParseBool(std::string_view key, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  Fail(ErrorCode::kInvalidArgument, "config key '{}': expected true or false, got '{}'",
       key, text);
}

std::string Unquote(std::string_view text) {
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return std::string(text.substr(1, text.size() - 2));
  }
  return std::string(text);
}

}  // namespace

void TrainingConfig::Validate() const {
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      Fail(ErrorCode::kInvalidArgument, "{} must be > 0, got {}", name, v);
    }
  };
  positive("lr_shape", lr_shape);
  positive("lr_colorizer", lr_colorizer);
  positive("lr_refiner", lr_refiner);
  positive("lr_disc", lr_disc);
  if (!(lambda_l1 >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "lambda_l1 must be >= 0, got {}", lambda_l1);
  }
  if (!(adv_weight >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "adv_weight must be >= 0, got {}", adv_weight);
  }
  if (batch_size < 1) {
    Fail(ErrorCode::kInvalidArgument, "batch_size must be >= 1, got {}", batch_size);
  }
  if (shape_steps < 0 || colorizer_steps < 0 || joint_steps < 0 || disc_steps < 0) {
    Fail(ErrorCode::kInvalidArgument, "step counts must be >= 0");
  }
  if (fill > 1.0) Fail(ErrorCode::kInvalidArgument, "fill must be <= 1, got {}", fill);
  CheckArchOptions(arch());
}

std::string TrainingConfig::ToText() const {
  std::string out;
  auto line = [&](std::string_view key, const auto& v) {
    out += fmt::format("{} = {}\n", key, v);
  };
  line("lr_shape", lr_shape);
  line("lr_colorizer", lr_colorizer);
  line("lr_refiner", lr_refiner);
  line("lr_disc", lr_disc);
  line("lambda_l1", lambda_l1);
  line("adv_weight", adv_weight);
  line("batch_size", batch_size);
  line("shape_steps", shape_steps);
  line("colorizer_steps", colorizer_steps);
  line("joint_steps", joint_steps);
  line("disc_steps", disc_steps);
  line("seed", seed);
  line("fill", fill);
  line("width_divisor", width_divisor);
  line("image_height", image_height);
  line("image_width", image_width);
  line("soft_targets", soft_targets);
  line("finetune_generators", finetune_generators);
  line("stop_below", stop_below);
  out += fmt::format("backbone_weights = \"{}\"\n", backbone_weights);
  return out;
}

uint64_t TrainingConfig::Hash() const {
  Fnv1a64 h;
  h.Update(ToText());
  return h.digest();
}

void TrainingConfig::Set(std::string_view key, std::string_view raw) {
  const std::string_view v = Trim(raw);
  if (key == "lr_shape") lr_shape = ParseNumber<double>(key, v);
  else if (key == "lr_colorizer") lr_colorizer = ParseNumber<double>(key, v);
  else if (key == "lr_refiner") lr_refiner = ParseNumber<double>(key, v);
  else if (key == "lr_disc") lr_disc = ParseNumber<double>(key, v);
  else if (key == "lambda_l1") lambda_l1 = ParseNumber<double>(key, v);
  else if (key == "adv_weight") adv_weight = ParseNumber<double>(key, v);
  else if (key == "batch_size") batch_size = ParseNumber<int>(key, v);
  else if (key == "shape_steps") shape_steps = ParseNumber<long>(key, v);
  else if (key == "colorizer_steps") colorizer_steps = ParseNumber<long>(key, v);
  else if (key == "joint_steps") joint_steps = ParseNumber<long>(key, v);
  else if (key == "disc_steps") disc_steps = ParseNumber<long>(key, v);
  else if (key == "seed") seed = ParseNumber<uint64_t>(key, v);
  else if (key == "fill") fill = ParseNumber<double>(key, v);
  else if (key == "width_divisor") width_divisor = ParseNumber<int>(key, v);
  else if (key == "image_height") image_height = ParseNumber<int>(key, v);
  else if (key == "image_width") image_width = ParseNumber<int>(key, v);
  else if (key == "soft_targets") soft_targets = ParseBool(key, v);
  else if (key == "finetune_generators") finetune_generators = ParseBool(key, v);
  else if (key == "stop_below") stop_below = ParseNumber<double>(key, v);
  else if (key == "backbone_weights") backbone_weights = Unquote(v);
  else Fail(ErrorCode::kInvalidArgument, "unknown config key '{}'", key);
}

TrainingConfig ParseConfig(std::string_view text) {
  TrainingConfig config;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    // Strip comments outside quotes.
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      Fail(ErrorCode::kInvalidArgument, "config line {}: sections are not supported", line_no);
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorCode::kInvalidArgument, "config line {}: expected 'key = value'", line_no);
    }
    try {
      config.Set(Trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      Fail(ErrorCode::kInvalidArgument, "config line {}: {}", line_no, e.what());
    }
  }
  return config;
}

TrainingConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kNotFound, "config file not found: {}", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

void ApplyOverride(TrainingConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    Fail(ErrorCode::kInvalidArgument, "override '{}' is not key=value", assignment);
  }
  config.Set(Trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

}  // namespace boxgen
