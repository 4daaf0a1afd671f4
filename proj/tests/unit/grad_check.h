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


#ifndef BOXGEN_TESTS_GRAD_CHECK_H_
#define BOXGEN_TESTS_GRAD_CHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "boxgen/nn/autograd.h"
#include "boxgen/nn/tensor.h"
#include "boxgen/networks/network.h"

namespace boxgen::testing {

using DVar = nn::Var<double>;

inline nn::Tensor<double> RandomTensor(nn::Shape shape, std::mt19937_64& rng,
                                       double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  nn::Tensor<double> t(shape);
  for (size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  return t;
}

// sum_i w_i x_i with fixed weights: turns any output into a scalar whose
// gradient exercises every element differently.
inline DVar WeightedSum(const DVar& x, const std::vector<double>& w) {
  double total = 0;
  for (size_t i = 0; i < x->value.size(); ++i) total += w[i] * x->value[i];
  return nn::MakeNode<double>(nn::Tensor<double>(nn::Shape{1, 1, 1, 1}, total), {x},
                              [w](nn::Node<double>& self) {
                                auto& d = self.parents[0]->EnsureGrad();
                                for (size_t i = 0; i < d.size(); ++i) {
                                  d[i] += self.grad[0] * w[i];
                                }
                              });
}

inline std::vector<double> RandomWeights(size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> w(n);
  for (double& v : w) v = u(rng);
  return w;
}

// Worst relative error between the tape gradient and central differences,
// over every element of every input. Relative to max(|analytic|, |numeric|,
// floor).
inline double GradCheck(const std::function<DVar()>& loss, const std::vector<DVar>& inputs,
                        double h = 1e-6, double floor = 1e-6) {
  for (const DVar& x : inputs) x->ZeroGrad();
  const DVar root = loss();
  nn::Backward(root);
  double worst = 0.0;
  for (const DVar& x : inputs) {
    const nn::Tensor<double> analytic =
        x->grad.empty() ? nn::Tensor<double>(x->value.shape()) : x->grad;
    for (size_t i = 0; i < x->value.size(); ++i) {
      const double saved = x->value[i];
      x->value[i] = saved + h;
      const double up = loss()->value[0];
      x->value[i] = saved - h;
      const double down = loss()->value[0];
      x->value[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
    }
  }
  return worst;
}

// conv -> leaky -> conv -> leaky -> conv on 6x6 inputs, in double.
inline Sequential<double> Miniature(int in_c, int out_c, Activation head, std::mt19937_64& rng) {
  return Sequential<double>({{LayerKind::kConv, 4, 3, 1, 1, Activation::kLeakyRelu},
                             {LayerKind::kConv, 4, 3, 2, 1, Activation::kLeakyRelu},
                             {LayerKind::kConv, out_c, 3, 1, 2, head}},
                            in_c, 6, 6, rng);
}

inline std::vector<DVar> Params(const Sequential<double>& net) {
  std::vector<std::pair<std::string, DVar>> named;
  net.AppendParameters("", named);
  std::vector<DVar> out;
  for (auto& [n, p] : named) out.push_back(p);
  return out;
}

}  // namespace boxgen::testing

#endif  // BOXGEN_TESTS_GRAD_CHECK_H_
