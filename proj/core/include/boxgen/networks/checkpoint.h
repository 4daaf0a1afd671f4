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

#ifndef BOXGEN_NETWORKS_CHECKPOINT_H_
#define BOXGEN_NETWORKS_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "boxgen/networks/architectures.h"
#include "boxgen/nn/tensor.h"

namespace boxgen {

struct NamedTensor {
  std::string name;
  nn::Shape shape;
  std::vector<float> data;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

// Parameters of one graph plus the options needed to rebuild it.
struct GraphState {
  GraphKind kind = GraphKind::kShape;
  ArchOptions options;
  std::vector<NamedTensor> tensors;

  friend bool operator==(const GraphState&, const GraphState&) = default;
};

// Container layout (all integers little-endian, floats IEEE-754 binary32):
//   "BXGCKPT\0"  u32 version  i64 step  u64 config_hash  f32 fill
//   u32 graph_count
//   per graph:   str name  i32 width_divisor  i32 image_height
//                i32 image_width  u32 tensor_count
//   per tensor:  str name  i32 n c h w  f32[n*c*h*w]
// where str is u32 byte length followed by UTF-8 bytes.
struct Checkpoint {
  static constexpr uint32_t kVersion = 1;

  int64_t step = 0;
  uint64_t config_hash = 0;
  // Gray value the shape network saw inside erased boxes during training.
  float fill = 0.5f;
  std::vector<GraphState> graphs;

  // Null when the graph is absent.
  const GraphState* Find(GraphKind kind) const;
  // Adds or replaces the graph of the same kind.
  void Put(GraphState state);

  // Throws kDataLoss naming the first missing graph.
  void Require(std::initializer_list<GraphKind> kinds) const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string SerializeCheckpoint(const Checkpoint& checkpoint);
// Throws kDataLoss on truncation, bad magic or unsupported version.
Checkpoint ParseCheckpoint(std::string_view bytes);

void SaveCheckpoint(const Checkpoint& checkpoint, const std::string& path);
// kNotFound when the file cannot be opened, kDataLoss when it does not parse.
Checkpoint LoadCheckpoint(const std::string& path);

// FNV-1a 64 of the serialized bytes, 16 hex digits.
std::string CheckpointHash(const Checkpoint& checkpoint);

}  // namespace boxgen

#endif  // BOXGEN_NETWORKS_CHECKPOINT_H_
