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

#include "boxgen/networks/architectures.h"

#include <algorithm>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

constexpr Activation kLeaky = Activation::kLeakyRelu;

LayerSpec Conv(int out, int kernel = 3, int stride = 1, int dilation = 1,
               Activation act = kLeaky) {
  return {LayerKind::kConv, out, kernel, stride, dilation, act};
}

LayerSpec Up(int out) {
  return {LayerKind::kConvTranspose, out, 4, 2, 1, kLeaky};
}

LayerSpec Pool() { return {LayerKind::kMaxPool, 0, 2, 2, 1, Activation::kNone}; }

LayerSpec Dense(int out, Activation act) {
  return {LayerKind::kLinear, out, 1, 1, 1, act};
}

}  // namespace

std::string_view LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kConvTranspose: return "transposed-conv";
    case LayerKind::kMaxPool: return "maxpool";
    case LayerKind::kLinear: return "linear";
  }
  return "unknown";
}

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kNone: return "none";
    case Activation::kLeakyRelu: return "leaky-relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
    case Activation::kSoftmax: return "softmax";
  }
  return "unknown";
}

LayerKind ParseLayerKind(std::string_view name) {
  for (LayerKind k : {LayerKind::kConv, LayerKind::kConvTranspose,
                      LayerKind::kMaxPool, LayerKind::kLinear}) {
    if (LayerKindName(k) == name) return k;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown layer kind '{}'", name);
}

Activation ParseActivation(std::string_view name) {
  for (Activation a : {Activation::kNone, Activation::kLeakyRelu,
                       Activation::kSigmoid, Activation::kTanh,
                       Activation::kSoftmax}) {
    if (ActivationName(a) == name) return a;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown activation '{}'", name);
}

std::string_view GraphName(GraphKind kind) {
  switch (kind) {
    case GraphKind::kShape: return "shape";
    case GraphKind::kColorizer: return "colorizer";
    case GraphKind::kRefiner: return "refiner";
    case GraphKind::kDiscriminator: return "discriminator";
  }
  return "unknown";
}

GraphKind ParseGraphKind(std::string_view name) {
  for (GraphKind k : {GraphKind::kShape, GraphKind::kColorizer,
                      GraphKind::kRefiner, GraphKind::kDiscriminator}) {
    if (GraphName(k) == name) return k;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown graph '{}'", name);
}

std::vector<LayerSpec> ShapeNetLayers() {
  return {
      Conv(64, 5),
      Conv(128, 3, 2),
      Conv(128),
      Conv(256, 3, 2),
      Conv(256),
      Conv(256),
      Conv(256, 3, 1, 2),
      Conv(256, 3, 1, 4),
      Conv(256, 3, 1, 8),
      Conv(256, 3, 1, 16),
      Conv(256),
      Conv(256),
      Up(128),
      Conv(128),
      Up(64),
      Conv(64),
      Conv(32),
      Conv(1, 3, 1, 1, Activation::kSigmoid),
  };
}

std::vector<LayerSpec> ColorizerLayers() {
  return {
      Conv(64), Conv(64), Pool(),
      Conv(128), Conv(128), Pool(),
      Conv(256), Conv(256), Conv(256), Pool(),
      Conv(512), Conv(512), Conv(512), Conv(512), Pool(),
      Conv(512), Conv(512), Conv(512), Conv(512), Pool(),
      Up(256),
      Conv(256, 2),
      Conv(313, 1, 1, 1, Activation::kSoftmax),
  };
}

std::vector<LayerSpec> RefinerLayers() {
  return {
      Conv(64, 5),
      Conv(128, 3, 2),
      Conv(128),
      Conv(256, 3, 2),
      Conv(256),
      Conv(256),
      Conv(256, 3, 1, 2),
      Conv(256, 3, 1, 4),
      Conv(256),
      Conv(256),
      Up(128),
      Conv(128),
      Up(64),
      Conv(64),
      Conv(32),
      Conv(3, 3, 1, 1, Activation::kTanh),
  };
}

std::vector<LayerSpec> GlobalBranchLayers() {
  return {
      Conv(64, 3, 2),  Conv(128, 3, 2), Conv(256, 3, 2),
      Conv(512, 3, 2), Conv(512, 3, 2), Dense(kBranchEmbedding, Activation::kNone),
  };
}

std::vector<LayerSpec> LocalBranchLayers() {
  return {
      Conv(64, 3, 2),  Conv(128, 3, 2), Conv(256, 3, 2),
      Conv(512, 3, 2), Dense(kBranchEmbedding, Activation::kNone),
  };
}

std::vector<LayerSpec> FusionHeadLayers() {
  return {Dense(1, Activation::kSigmoid)};
}

std::vector<LayerSpec> ScaleWidths(std::vector<LayerSpec> layers, int divisor,
                                   bool keep_output) {
  if (divisor < 1) {
    Fail(ErrorCode::kInvalidArgument, "width divisor must be >= 1, got {}", divisor);
  }
  const size_t scaled = keep_output && !layers.empty() ? layers.size() - 1 : layers.size();
  for (size_t i = 0; i < scaled; ++i) {
    if (layers[i].kind != LayerKind::kMaxPool) {
      layers[i].out_channels = std::max(1, layers[i].out_channels / divisor);
    }
  }
  return layers;
}

int InputChannels(GraphKind kind) {
  switch (kind) {
    case GraphKind::kShape: return 2;
    case GraphKind::kColorizer: return 1;
    case GraphKind::kRefiner: return 3;
    case GraphKind::kDiscriminator: return 3;
  }
  return 0;
}

nlohmann::json LayerTableJson(const std::vector<LayerSpec>& layers) {
  nlohmann::json out = nlohmann::json::array();
  for (const LayerSpec& l : layers) {
    out.push_back({{"kind", LayerKindName(l.kind)},
                   {"out_channels", l.out_channels},
                   {"kernel", l.kernel},
                   {"stride", l.stride},
                   {"dilation", l.dilation},
                   {"activation", ActivationName(l.activation)}});
  }
  return out;
}

std::vector<LayerSpec> LayerTableFromJson(const nlohmann::json& j) {
  std::vector<LayerSpec> out;
  for (const auto& row : j) {
    out.push_back({ParseLayerKind(row.at("kind").get<std::string>()),
                   row.at("out_channels").get<int>(), row.at("kernel").get<int>(),
                   row.at("stride").get<int>(), row.at("dilation").get<int>(),
                   ParseActivation(row.at("activation").get<std::string>())});
  }
  return out;
}

nlohmann::json ArchitectureTablesJson() {
  return {
      {"shape", LayerTableJson(ShapeNetLayers())},
      {"colorizer", LayerTableJson(ColorizerLayers())},
      {"refiner", LayerTableJson(RefinerLayers())},
      {"discriminator",
       {{"global", LayerTableJson(GlobalBranchLayers())},
        {"local", LayerTableJson(LocalBranchLayers())},
        {"head", LayerTableJson(FusionHeadLayers())}}},
  };
}

void CheckArchOptions(const ArchOptions& options) {
  if (options.width_divisor < 1) {
    Fail(ErrorCode::kInvalidArgument, "width_divisor must be >= 1, got {}",
         options.width_divisor);
  }
  if (options.image_height < 32 || options.image_width < 32) {
    Fail(ErrorCode::kInvalidArgument,
         "discriminator image size {}x{} below the 32x32 minimum",
         options.image_height, options.image_width);
  }
}

}  // namespace boxgen
