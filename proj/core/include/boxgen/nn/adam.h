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

#ifndef BOXGEN_NN_ADAM_H_
#define BOXGEN_NN_ADAM_H_

#include <cmath>
#include <vector>

#include "boxgen/nn/autograd.h"

namespace boxgen::nn {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Owns the moment buffers of a fixed parameter
// list; parameters without a gradient this step are left untouched.
template <typename T>
class Adam {
 public:
  Adam(std::vector<Var<T>> params, AdamOptions options)
      : params_(std::move(params)), options_(options) {
    for (const Var<T>& p : params_) {
      m_.emplace_back(p->value.size(), 0.0);
      v_.emplace_back(p->value.size(), 0.0);
    }
  }

  void ZeroGrad() {
    for (const Var<T>& p : params_) p->ZeroGrad();
  }

  void Step() {
    ++step_;
    const double b1 = options_.beta1;
    const double b2 = options_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
    const double lr = options_.learning_rate;
    for (size_t k = 0; k < params_.size(); ++k) {
      Node<T>& p = *params_[k];
      if (p.grad.empty()) continue;
      std::vector<double>& m = m_[k];
      std::vector<double>& v = v_[k];
      for (size_t i = 0; i < p.value.size(); ++i) {
        const double g = p.grad[i];
        m[i] = b1 * m[i] + (1.0 - b1) * g;
        v[i] = b2 * v[i] + (1.0 - b2) * g * g;
        const double update = lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + options_.epsilon);
        p.value[i] = static_cast<T>(p.value[i] - update);
      }
    }
  }

  long step() const { return step_; }
  const std::vector<Var<T>>& params() const { return params_; }

 private:
  std::vector<Var<T>> params_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long step_ = 0;
};

}  // namespace boxgen::nn

#endif  // BOXGEN_NN_ADAM_H_
