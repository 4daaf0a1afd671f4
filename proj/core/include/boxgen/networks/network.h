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

#ifndef BOXGEN_NETWORKS_NETWORK_H_
#define BOXGEN_NETWORKS_NETWORK_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/networks/architectures.h"
#include "boxgen/networks/checkpoint.h"
#include "boxgen/nn/conv.h"
#include "boxgen/nn/ops.h"

namespace boxgen {

// A feed-forward layer stack. Shapes are traced once at construction from
// the declared input (channels, height, width); height and width only
// matter when the stack contains linear layers.
template <typename T>
class Sequential {
 public:
  Sequential() = default;

  Sequential(std::vector<LayerSpec> layers, int in_channels, int in_height,
             int in_width, std::mt19937_64& rng)
      : in_channels_(in_channels) {
    int c = in_channels, h = in_height, w = in_width;
    for (const LayerSpec& spec : layers) {
      if (spec.kernel < 1 || spec.stride < 1 || spec.dilation < 1) {
        Fail(ErrorCode::kInvalidArgument, "invalid layer: kernel {}, stride {}, dilation {}",
             spec.kernel, spec.stride, spec.dilation);
      }
      Layer layer;
      layer.spec = spec;
      int fan_in = 0;
      switch (spec.kind) {
        case LayerKind::kConv:
          layer.geometry = nn::ConvGeometry::Same(spec.kernel, spec.stride, spec.dilation);
          layer.weight = nn::Parameter(nn::Tensor<T>(
              nn::Shape{spec.out_channels, c, spec.kernel, spec.kernel}));
          fan_in = c * spec.kernel * spec.kernel;
          h = layer.geometry.OutputSize(h);
          w = layer.geometry.OutputSize(w);
          c = spec.out_channels;
          break;
        case LayerKind::kConvTranspose: {
          const int total = spec.kernel - spec.stride;
          layer.geometry = {spec.kernel, spec.stride, 1, total / 2, total - total / 2};
          layer.weight = nn::Parameter(nn::Tensor<T>(
              nn::Shape{c, spec.out_channels, spec.kernel, spec.kernel}));
          fan_in = c * spec.kernel * spec.kernel / (spec.stride * spec.stride);
          h *= spec.stride;
          w *= spec.stride;
          c = spec.out_channels;
          break;
        }
        case LayerKind::kMaxPool:
          h /= spec.kernel;
          w /= spec.kernel;
          break;
        case LayerKind::kLinear:
          fan_in = c * h * w;
          layer.weight = nn::Parameter(
              nn::Tensor<T>(nn::Shape{spec.out_channels, fan_in, 1, 1}));
          c = spec.out_channels;
          h = w = 1;
          break;
      }
      if (layer.weight) {
        // He initialization over the fan-in, zero biases.
        std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
        for (size_t i = 0; i < layer.weight->value.size(); ++i) {
          layer.weight->value[i] = static_cast<T>(normal(rng));
        }
        layer.bias = nn::Parameter(nn::Tensor<T>(nn::Shape{1, c, 1, 1}));
      }
      layers_.push_back(std::move(layer));
    }
    out_channels_ = c;
  }

  // Runs the stack. With `final_activation` false the last layer's
  // activation is skipped (logits for the softmax / sigmoid heads).
  nn::Var<T> Forward(nn::Var<T> x, bool final_activation = true) const {
    if (x->value.c() != in_channels_) {
      Fail(ErrorCode::kShapeMismatch, "expected {} input channels, got {}",
           in_channels_, x->value.c());
    }
    for (size_t i = 0; i < layers_.size(); ++i) {
      const Layer& l = layers_[i];
      switch (l.spec.kind) {
        case LayerKind::kConv:
          x = nn::Conv2d(x, l.weight, l.bias, l.geometry);
          break;
        case LayerKind::kConvTranspose:
          x = nn::ConvTranspose2d(x, l.weight, l.bias, l.geometry);
          break;
        case LayerKind::kMaxPool:
          x = nn::MaxPool2d(x, l.spec.kernel);
          break;
        case LayerKind::kLinear:
          x = nn::Linear(x, l.weight, l.bias);
          break;
      }
      if (i + 1 < layers_.size() || final_activation) x = Activate(x, l.spec.activation);
    }
    return x;
  }

  static nn::Var<T> Activate(const nn::Var<T>& x, Activation activation) {
    switch (activation) {
      case Activation::kNone: return x;
      case Activation::kLeakyRelu: return nn::LeakyRelu(x, static_cast<T>(kLeakySlope));
      case Activation::kSigmoid: return nn::Sigmoid(x);
      case Activation::kTanh: return nn::Tanh(x);
      case Activation::kSoftmax: return nn::SoftmaxChannels(x);
    }
    return x;
  }

  std::vector<LayerSpec> layers() const {
    std::vector<LayerSpec> out;
    for (const Layer& l : layers_) out.push_back(l.spec);
    return out;
  }

  void AppendParameters(const std::string& prefix,
                        std::vector<std::pair<std::string, nn::Var<T>>>& out) const {
    for (size_t i = 0; i < layers_.size(); ++i) {
      if (!layers_[i].weight) continue;
      out.emplace_back(fmt::format("{}layer{}.weight", prefix, i), layers_[i].weight);
      out.emplace_back(fmt::format("{}layer{}.bias", prefix, i), layers_[i].bias);
    }
  }

  int in_channels() const { return in_channels_; }
  int out_channels() const { return out_channels_; }

 private:
  struct Layer {
    LayerSpec spec;
    nn::ConvGeometry geometry;
    nn::Var<T> weight;
    nn::Var<T> bias;
  };

  std::vector<Layer> layers_;
  int in_channels_ = 0;
  int out_channels_ = 0;
};

namespace internal {

inline uint64_t GraphSeed(uint64_t seed, GraphKind kind) {
  // splitmix64 step over (seed, kind) so each graph draws its own stream.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(kind) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Spatial size after `count` stride-2, kernel-3, pad-1 convolutions.
inline int HalvedSize(int size, int count) {
  for (int i = 0; i < count; ++i) size = (size - 1) / 2 + 1;
  return size;
}

}  // namespace internal

// One of the four trained graphs. Copies share parameters; use Clone() for
// an independent copy.
template <typename T>
class Network {
 public:
  Network() = default;

  static Network Build(GraphKind kind, const ArchOptions& options, uint64_t seed) {
    CheckArchOptions(options);
    Network net;
    net.kind_ = kind;
    net.options_ = options;
    std::mt19937_64 rng(internal::GraphSeed(seed, kind));
    const int d = options.width_divisor;
    switch (kind) {
      case GraphKind::kShape:
        net.parts_.emplace_back(ScaleWidths(ShapeNetLayers(), d), 2, 0, 0, rng);
        break;
      case GraphKind::kColorizer:
        net.parts_.emplace_back(ScaleWidths(ColorizerLayers(), d), 1, kColorizerInput,
                                kColorizerInput, rng);
        break;
      case GraphKind::kRefiner:
        net.parts_.emplace_back(ScaleWidths(RefinerLayers(), d), 3, 0, 0, rng);
        break;
      case GraphKind::kDiscriminator: {
        Sequential<T> global(ScaleWidths(GlobalBranchLayers(), d, false), 3,
                             options.image_height, options.image_width, rng);
        Sequential<T> local(ScaleWidths(LocalBranchLayers(), d, false), 3,
                            kLocalPatchSize, kLocalPatchSize, rng);
        const int fused = global.out_channels() + local.out_channels();
        Sequential<T> head(FusionHeadLayers(), fused, 1, 1, rng);
        net.parts_ = {std::move(global), std::move(local), std::move(head)};
        break;
      }
    }
    return net;
  }

  GraphKind kind() const { return kind_; }
  const ArchOptions& options() const { return options_; }
  const std::vector<Sequential<T>>& parts() const { return parts_; }

  // Validates input dims against the graph's contract.
  void CheckInput(const nn::Shape& s) const {
    if (kind_ == GraphKind::kDiscriminator) {
      Fail(ErrorCode::kInvalidArgument, "discriminator takes (image, patch); use Discriminate");
    }
    const int channels = InputChannels(kind_);
    if (s.c != channels) {
      Fail(ErrorCode::kShapeMismatch, "{} expects {} input channels, got {}",
           GraphName(kind_), channels, s.c);
    }
    if (kind_ == GraphKind::kColorizer) {
      if (s.h != kColorizerInput || s.w != kColorizerInput) {
        Fail(ErrorCode::kShapeMismatch, "colorizer expects {}x{} input, got {}x{}",
             kColorizerInput, kColorizerInput, s.h, s.w);
      }
    } else if (s.h % 4 != 0 || s.w % 4 != 0 || s.h < 4 || s.w < 4) {
      Fail(ErrorCode::kShapeMismatch,
           "{} input dims must be positive multiples of 4, got {}x{}", GraphName(kind_),
           s.h, s.w);
    }
  }

  // Bounded output: sigmoid for shape, softmax for colorizer, tanh for
  // refiner.
  nn::Var<T> Forward(const nn::Var<T>& x) const {
    CheckInput(x->value.shape());
    return parts_[0].Forward(x, true);
  }

  // Output before the final activation.
  nn::Var<T> ForwardLogits(const nn::Var<T>& x) const {
    CheckInput(x->value.shape());
    return parts_[0].Forward(x, false);
  }

  // Real/fake logits, shape (n, 1, 1, 1).
  nn::Var<T> Discriminate(const nn::Var<T>& image, const nn::Var<T>& patch) const {
    if (kind_ != GraphKind::kDiscriminator) {
      Fail(ErrorCode::kInvalidArgument, "{} is not a discriminator", GraphName(kind_));
    }
    const nn::Shape& is = image->value.shape();
    const nn::Shape& ps = patch->value.shape();
    if (is.c != 3 || is.h != options_.image_height || is.w != options_.image_width) {
      Fail(ErrorCode::kShapeMismatch, "discriminator image must be 3x{}x{}, got {}",
           options_.image_height, options_.image_width, is.ToString());
    }
    if (ps.c != 3 || ps.h != kLocalPatchSize || ps.w != kLocalPatchSize || ps.n != is.n) {
      Fail(ErrorCode::kShapeMismatch, "discriminator patch must be {}x3x{}x{}, got {}",
           is.n, kLocalPatchSize, kLocalPatchSize, ps.ToString());
    }
    nn::Var<T> global = parts_[0].Forward(image);
    nn::Var<T> local = parts_[1].Forward(patch);
    return parts_[2].Forward(nn::ConcatChannels<T>({global, local}), false);
  }

  // Sigmoid scores in (0, 1).
  nn::Var<T> Score(const nn::Var<T>& image, const nn::Var<T>& patch) const {
    return nn::Sigmoid(Discriminate(image, patch));
  }

  std::vector<std::pair<std::string, nn::Var<T>>> NamedParameters() const {
    std::vector<std::pair<std::string, nn::Var<T>>> out;
    if (kind_ == GraphKind::kDiscriminator) {
      parts_[0].AppendParameters("global.", out);
      parts_[1].AppendParameters("local.", out);
      parts_[2].AppendParameters("head.", out);
    } else {
      parts_[0].AppendParameters("", out);
    }
    return out;
  }

  std::vector<nn::Var<T>> Parameters() const {
    std::vector<nn::Var<T>> out;
    for (auto& [name, p] : NamedParameters()) out.push_back(p);
    return out;
  }

  int64_t ParameterCount() const {
    int64_t total = 0;
    for (auto& [name, p] : NamedParameters()) total += static_cast<int64_t>(p->value.size());
    return total;
  }

  // Frozen parameters take no gradient and record no tape.
  void SetTrainable(bool trainable) const {
    for (auto& [name, p] : NamedParameters()) {
      p->requires_grad = trainable;
      if (!trainable) p->ZeroGrad();
    }
  }

  GraphState Export() const {
    GraphState state{kind_, options_, {}};
    for (auto& [name, p] : NamedParameters()) {
      NamedTensor t{name, p->value.shape(), {}};
      t.data.resize(p->value.size());
      for (size_t i = 0; i < t.data.size(); ++i) t.data[i] = static_cast<float>(p->value[i]);
      state.tensors.push_back(std::move(t));
    }
    return state;
  }

  // Rebuilds the graph from a state and copies every tensor in; names and
  // shapes must match exactly.
  static Network Import(const GraphState& state) {
    Network net = Build(state.kind, state.options, 0);
    auto params = net.NamedParameters();
    if (params.size() != state.tensors.size()) {
      Fail(ErrorCode::kDataLoss, "{} graph expects {} tensors, checkpoint has {}",
           GraphName(state.kind), params.size(), state.tensors.size());
    }
    for (size_t i = 0; i < params.size(); ++i) {
      const NamedTensor& t = state.tensors[i];
      auto& [name, p] = params[i];
      if (t.name != name || !(t.shape == p->value.shape())) {
        Fail(ErrorCode::kDataLoss, "{} tensor {}: expected {} {}, found {} {}",
             GraphName(state.kind), i, name, p->value.shape().ToString(), t.name,
             t.shape.ToString());
      }
      for (size_t k = 0; k < t.data.size(); ++k) p->value[k] = static_cast<T>(t.data[k]);
    }
    return net;
  }

  Network Clone() const {
    auto src = NamedParameters();
    Network fresh = Build(kind_, options_, 0);
    auto dst = fresh.NamedParameters();
    for (size_t i = 0; i < src.size(); ++i) {
      dst[i].second->value = src[i].second->value;
      dst[i].second->requires_grad = src[i].second->requires_grad;
    }
    return fresh;
  }

 private:
  GraphKind kind_ = GraphKind::kShape;
  ArchOptions options_;
  std::vector<Sequential<T>> parts_;
};

// Spatial grid reached by the global branch for an image of the given size.
inline std::pair<int, int> GlobalBranchGrid(int height, int width) {
  return {internal::HalvedSize(height, 5), internal::HalvedSize(width, 5)};
}

// Copies conv weights from an external backbone (e.g. pretrained VGG-19
// tensors, weight then bias per conv) into the colorizer's conv layers in
// order, stopping at the first shape mismatch. Returns the number of conv
// layers initialized.
template <typename T>
int LoadBackboneConvs(const Network<T>& colorizer, const std::vector<NamedTensor>& tensors) {
  if (colorizer.kind() != GraphKind::kColorizer) {
    Fail(ErrorCode::kInvalidArgument, "backbone weights only apply to the colorizer");
  }
  auto params = colorizer.NamedParameters();
  int loaded = 0;
  for (size_t i = 0; i + 1 < params.size() && 2 * loaded + 1 < static_cast<int>(tensors.size());
       i += 2) {
    const NamedTensor& w = tensors[2 * loaded];
    const NamedTensor& b = tensors[2 * loaded + 1];
    nn::Var<T>& pw = params[i].second;
    nn::Var<T>& pb = params[i + 1].second;
    if (!(w.shape == pw->value.shape()) || b.data.size() != pb->value.size()) break;
    for (size_t k = 0; k < w.data.size(); ++k) pw->value[k] = static_cast<T>(w.data[k]);
    for (size_t k = 0; k < b.data.size(); ++k) pb->value[k] = static_cast<T>(b.data[k]);
    ++loaded;
  }
  return loaded;
}

}  // namespace boxgen

#endif  // BOXGEN_NETWORKS_NETWORK_H_
