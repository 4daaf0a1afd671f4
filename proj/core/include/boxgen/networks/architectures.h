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

#ifndef BOXGEN_NETWORKS_ARCHITECTURES_H_
#define BOXGEN_NETWORKS_ARCHITECTURES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace boxgen {

enum class LayerKind { kConv, kConvTranspose, kMaxPool, kLinear };
enum class Activation { kNone, kLeakyRelu, kSigmoid, kTanh, kSoftmax };

std::string_view LayerKindName(LayerKind kind);
std::string_view ActivationName(Activation activation);
LayerKind ParseLayerKind(std::string_view name);
Activation ParseActivation(std::string_view name);

struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  int out_channels = 0;
  int kernel = 3;
  int stride = 1;
  int dilation = 1;
  Activation activation = Activation::kLeakyRelu;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// The four trained graphs, named by role.
enum class GraphKind { kShape, kColorizer, kRefiner, kDiscriminator };

std::string_view GraphName(GraphKind kind);
GraphKind ParseGraphKind(std::string_view name);

// Size knobs shared by all builders. `width_divisor` divides every hidden
// channel count (and the discriminator branch embeddings), leaving the
// output layers intact; 1 gives the reference widths. The discriminator's
// global branch is sized for image_height x image_width inputs.
struct ArchOptions {
  int width_divisor = 1;
  int image_height = 180;
  int image_width = 320;

  friend bool operator==(const ArchOptions&, const ArchOptions&) = default;
};

inline constexpr double kLeakySlope = 0.2;
inline constexpr int kColorizerInput = 128;
inline constexpr int kLocalPatchSize = 64;
inline constexpr int kBranchEmbedding = 512;

// Reference layer tables (width_divisor = 1).
std::vector<LayerSpec> ShapeNetLayers();
std::vector<LayerSpec> ColorizerLayers();
std::vector<LayerSpec> RefinerLayers();
// Discriminator parts: conv stack + embedding for the full image, the same
// for the 64x64 patch, and the fusion head over the concatenated embeddings.
std::vector<LayerSpec> GlobalBranchLayers();
std::vector<LayerSpec> LocalBranchLayers();
std::vector<LayerSpec> FusionHeadLayers();

// Applies the width divisor: layers get max(1, out_channels / divisor),
// except the last one when `keep_output` is set.
std::vector<LayerSpec> ScaleWidths(std::vector<LayerSpec> layers, int divisor,
                                   bool keep_output = true);

// Input channel counts of the single-input graphs.
int InputChannels(GraphKind kind);

// Tables as JSON, the layout of the shipped architecture fixture.
nlohmann::json LayerTableJson(const std::vector<LayerSpec>& layers);
std::vector<LayerSpec> LayerTableFromJson(const nlohmann::json& j);
nlohmann::json ArchitectureTablesJson();

void CheckArchOptions(const ArchOptions& options);

}  // namespace boxgen

#endif  // BOXGEN_NETWORKS_ARCHITECTURES_H_
