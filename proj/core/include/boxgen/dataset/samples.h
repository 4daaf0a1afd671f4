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

#ifndef BOXGEN_DATASET_SAMPLES_H_
#define BOXGEN_DATASET_SAMPLES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "boxgen/dataset/annotations.h"

namespace boxgen {

// One vacated box of one scene.
struct TrainingSample {
  std::string image_id;
  Box box;
  Image masked_input;  // 2 channels: gray with the box set to fill; mask
  Image gray_target;   // 1 channel, L/100
  Image rgb_target;    // 3 channels
  float fill = 0.5f;   // erase value used for masked_input
};

TrainingSample MakeSample(const AnnotatedScene& scene, const Box& box, float fill);

// One sample per box of every scene, in scene then box order.
std::vector<TrainingSample> MakeSamples(const std::vector<AnnotatedScene>& scenes,
                                        float fill);

// Endless stream of index batches over `count` items. Each epoch is a fresh
// seeded shuffle of [0, count) cut into batch_size chunks (the last one may
// be shorter), so every item appears exactly once per epoch.
class BatchStream {
 public:
  BatchStream(size_t count, int batch_size, uint64_t seed);

  std::vector<size_t> Next();
  int epoch() const { return epoch_; }

  // All batches of one epoch, without advancing the stream.
  static std::vector<std::vector<size_t>> Epoch(size_t count, int batch_size,
                                                uint64_t seed, int epoch);

 private:
  size_t count_;
  int batch_size_;
  uint64_t seed_;
  int epoch_ = 0;
  std::vector<std::vector<size_t>> pending_;
  size_t next_ = 0;
};

// Procedural road scenes with box-shaped "vehicles": a sky band, a grey
// road with lane marks and a few coloured bodies with dark windows and
// wheels. Deterministic in `seed`. Used for toy training, smoke tests and
// the demo image store; not a substitute for real data.
std::vector<AnnotatedScene> SyntheticScenes(int count, int height, int width,
                                            uint64_t seed, int max_vehicles = 3);

}  // namespace boxgen

#endif  // BOXGEN_DATASET_SAMPLES_H_
