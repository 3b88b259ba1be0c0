// Copyright 2026 The DNSC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DNSC_NN_AUTOGRAD_HPP_
#define DNSC_NN_AUTOGRAD_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nn/tensor.hpp"

namespace dnsc::nn {

// A named trainable array with its accumulated gradient.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

struct Node {
  Tensor value;
  Tensor grad;  // lazily allocated
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Propagates this node's grad into its parents' grads.
  std::function<void(Node&)> backward;
  // Set on parameter leaves; gradients are summed into param->grad.
  std::shared_ptr<Parameter> param;

  Tensor& EnsureGrad();
};

// Handle to a node of the recorded computation graph.
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  const Tensor& value() const { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_->requires_grad; }
  const std::shared_ptr<Node>& node() const { return node_; }
  bool valid() const { return node_ != nullptr; }

 private:
  std::shared_ptr<Node> node_;
};

Var Constant(Tensor value);
Var Leaf(const std::shared_ptr<Parameter>& param);

// Runs reverse-mode accumulation from a scalar loss. Parameter gradients are
// added to (not overwritten in) Parameter::grad.
void Backward(const Var& loss);

// ---- Elementwise and structural ops ----

Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& a, double s);
// x: C x T, bias: C (or C x 1). Adds bias[c] to every time step of row c.
Var AddChannelBias(const Var& x, const Var& bias);
// a: Ca x T, b: Cb x T -> (Ca + Cb) x T.
Var ConcatChannels(const Var& a, const Var& b);
// x: C x T -> C x (T * factor), nearest-neighbour repeat.
Var RepeatTime(const Var& x, std::size_t factor);
// Identity gradient inside [lo, hi], zero outside.
Var Clamp(const Var& x, double lo, double hi);

enum class Activation { kIdentity, kRelu, kSilu, kTanh, kElu };
Var Activate(const Var& x, Activation kind);

// ---- Learned maps ----

// x: Cin x T, W: Cout x Cin, b: Cout (optional) -> Cout x T.
Var Linear(const Var& x, const Var& weight, const Var* bias = nullptr);

struct ConvOptions {
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::size_t dilation = 1;
};

// x: Cin x T, K: Cout x Cin x k -> Cout x Tout with zero padding on both
// sides. Tout = (T + 2p - d(k-1) - 1) / s + 1.
Var Conv1d(const Var& x, const Var& kernel, const Var* bias, ConvOptions opts);

// x: Cin x T, K: Cin x Cout x k -> Cout x ((T-1)s + k - 2p).
Var ConvTranspose1d(const Var& x, const Var& kernel, const Var* bias,
                    std::size_t stride, std::size_t padding);

// ---- Reductions (scalar outputs) ----

Var Sum(const Var& a);
Var MeanSquaredError(const Var& a, const Var& b);
Var MeanAbsoluteError(const Var& a, const Var& b);

namespace detail {
// Graph surgery for structural tests only.
void AddParent(const Var& child, const Var& parent);
}  // namespace detail

}  // namespace dnsc::nn

#endif  // DNSC_NN_AUTOGRAD_HPP_
