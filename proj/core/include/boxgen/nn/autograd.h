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

#ifndef BOXGEN_NN_AUTOGRAD_H_
#define BOXGEN_NN_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include "boxgen/nn/tensor.h"

namespace boxgen::nn {

// Reverse-mode differentiation over a dynamically recorded graph. Each op
// returns a node holding its value; when any input requires a gradient the
// node also keeps its inputs and a closure that pushes the output gradient
// back into them. Nodes without a gradient path keep nothing, so inference
// under NoGradGuard (or with frozen inputs) allocates no tape.
template <typename T>
struct Node {
  Tensor<T> value;
  Tensor<T> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  Tensor<T>& EnsureGrad() {
    if (grad.empty()) grad = Tensor<T>(value.shape());
    return grad;
  }
  void ZeroGrad() { grad = Tensor<T>(); }
};

template <typename T>
using Var = std::shared_ptr<Node<T>>;

namespace internal {
inline thread_local bool grad_enabled = true;
}  // namespace internal

inline bool GradEnabled() { return internal::grad_enabled; }

// Disables tape recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard() : previous_(internal::grad_enabled) {
    internal::grad_enabled = false;
  }
  ~NoGradGuard() { internal::grad_enabled = previous_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

template <typename T>
Var<T> Constant(Tensor<T> value) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  return node;
}

template <typename T>
Var<T> Parameter(Tensor<T> value) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  node->requires_grad = true;
  return node;
}

// Cuts the gradient path: same value, no parents.
template <typename T>
Var<T> Detach(const Var<T>& x) {
  return Constant(x->value);
}

// Creates an op node. `backward` runs only when the node ends up on a
// gradient path.
template <typename T>
Var<T> MakeNode(Tensor<T> value, std::vector<Var<T>> parents,
                std::function<void(Node<T>&)> backward) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  bool needs = false;
  if (GradEnabled()) {
    for (const auto& p : parents) needs = needs || p->requires_grad;
  }
  if (needs) {
    node->requires_grad = true;
    node->parents = std::move(parents);
    node->backward = std::move(backward);
  }
  return node;
}

// Seeds d(root)/d(root) = 1 for every element of `root` (callers pass a
// scalar loss) and accumulates gradients into every reachable node that
// requires one. Parameter gradients accumulate across calls until zeroed.
template <typename T>
void Backward(const Var<T>& root) {
  if (!root->requires_grad) return;
  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> visited;
  std::vector<std::pair<Node<T>*, size_t>> stack = {{root.get(), 0}};
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node<T>* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) {
        stack.push_back({parent, 0});
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  root->EnsureGrad().Fill(T(1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<T>* node = *it;
    if (node->backward && !node->grad.empty()) node->backward(*node);
  }
}

}  // namespace boxgen::nn

#endif  // BOXGEN_NN_AUTOGRAD_H_
