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

#ifndef BOXGEN_TRAINING_CONFIG_H_
#define BOXGEN_TRAINING_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "boxgen/networks/architectures.h"

namespace boxgen {

// Every knob of the three training phases. Defaults are the reference
// settings; the toy runs shrink steps, widths and image size.
struct TrainingConfig {
  double lr_shape = 1e-4;
  double lr_colorizer = 1e-4;
  double lr_refiner = 1e-4;
  double lr_disc = 1e-4;
  double lambda_l1 = 0.1;   // weight of the refiner's reconstruction term
  double adv_weight = 1.0;  // weight of the refiner's adversarial term
  int batch_size = 16;
  long shape_steps = 20000;
  long colorizer_steps = 20000;
  long joint_steps = 20000;
  long disc_steps = 200;  // discriminator-only sanity phase
  uint64_t seed = 0;
  double fill = -1.0;  // erase value; negative means "dataset mean gray"

  int width_divisor = 1;
  int image_height = 180;
  int image_width = 320;

  bool soft_targets = false;      // Gaussian soft colour targets
  bool finetune_generators = false;  // train shape/colorizer in the joint phase
  double stop_below = 0.0;  // end a pretraining phase once its loss drops below
  std::string backbone_weights;  // optional colorizer conv weights

  ArchOptions arch() const {
    return {width_divisor, image_height, image_width};
  }

  // Throws kInvalidArgument naming the first bad field.
  void Validate() const;

  // Canonical `key = value` text of every field, in declaration order.
  std::string ToText() const;

  // FNV-1a 64 of ToText().
  uint64_t Hash() const;

  // Sets one field from its text form; unknown keys throw.
  void Set(std::string_view key, std::string_view value);
};

// Flat TOML subset: `key = value` lines, `#` comments, blank lines,
// optional double quotes around strings. Section headers are rejected.
TrainingConfig ParseConfig(std::string_view text);
TrainingConfig LoadConfig(const std::string& path);

// Applies "key=value".
void ApplyOverride(TrainingConfig& config, std::string_view assignment);

}  // namespace boxgen

#endif  // BOXGEN_TRAINING_CONFIG_H_
