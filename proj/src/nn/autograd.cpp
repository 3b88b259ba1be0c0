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

#include "nn/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Core>

#include "common/error.hpp"

namespace dnsc::nn {
namespace {

using Index = std::ptrdiff_t;

Var MakeNode(const char* op, Tensor value, std::vector<std::shared_ptr<Node>> parents,
             std::function<void(Node&)> backward) {
  if (!value.AllFinite()) {
    Fail(ErrorKind::kNumeric, std::string("non-finite value produced by ") + op);
  }
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad =
      std::any_of(parents.begin(), parents.end(), [](const auto& p) { return p->requires_grad; });
  if (node->requires_grad) {
    node->parents = std::move(parents);
    node->backward = std::move(backward);
  }
  return Var(std::move(node));
}

void RequireSameShape(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    Fail(ErrorKind::kShape, std::string(op) + ": shapes " + ShapeString(a.shape()) +
                                " and " + ShapeString(b.shape()) + " differ");
  }
}

void RequireRank2(const Var& a, const char* op) {
  if (a.value().rank() != 2) {
    Fail(ErrorKind::kShape, std::string(op) + ": expected a rank-2 tensor, got " +
                                ShapeString(a.shape()));
  }
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> Map(const double* data, Index rows, Index cols) {
  return Eigen::Map<const RowMatrix>(data, rows, cols);
}

Eigen::Map<RowMatrix> MapMut(double* data, Index rows, Index cols) {
  return Eigen::Map<RowMatrix>(data, rows, cols);
}

void AddRowBias(Eigen::Map<RowMatrix>& y, const Tensor& bias) {
  for (Index o = 0; o < y.rows(); ++o) y.row(o).array() += bias[o];
}

// Plain left-to-right sums. Eigen reductions peel by address, which would make
// results depend on where the allocator put the buffer.
inline double RowSum(std::span<const double> r) {
  double acc = 0;
  for (double v : r) acc += v;
  return acc;
}

void AddRowSums(Tensor& grad, const Tensor& dy) {
  for (std::size_t o = 0; o < dy.rows(); ++o) grad[o] += RowSum(dy.row(o));
}

// Range of t with 0 <= t*s + off < limit, intersected with [0, count).
inline std::pair<Index, Index> ValidRange(Index off, Index s, Index limit, Index count) {
  const Index t0 = off >= 0 ? 0 : (-off + s - 1) / s;
  Index t1 = limit - 1 - off < 0 ? 0 : (limit - 1 - off) / s + 1;
  t1 = std::min(t1, count);
  return {t0, std::max(t0, t1)};
}

}  // namespace

Tensor& Node::EnsureGrad() {
  if (grad.empty() && !value.empty()) grad = Tensor(value.shape(), 0.0);
  return grad;
}

Var Constant(Tensor value) { return MakeNode("constant", std::move(value), {}, nullptr); }

Var Leaf(const std::shared_ptr<Parameter>& param) {
  auto node = std::make_shared<Node>();
  node->value = param->value;
  node->requires_grad = true;
  node->param = param;
  return Var(std::move(node));
}

void Backward(const Var& loss) {
  Require(loss.valid(), ErrorKind::kStructure, "backward on an empty variable");
  Require(loss.value().size() == 1, ErrorKind::kShape, "loss must be a scalar");
  if (!loss.requires_grad()) return;

  // Iterative DFS producing a post-order; a grey node seen again is a cycle.
  enum Colour : std::uint8_t { kGrey = 1, kBlack = 2 };
  std::unordered_map<Node*, std::uint8_t> colour;
  std::vector<Node*> order;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  colour[loss.node().get()] = kGrey;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (!parent->requires_grad) continue;
      auto it = colour.find(parent);
      if (it == colour.end()) {
        colour[parent] = kGrey;
        stack.emplace_back(parent, 0);
      } else if (it->second == kGrey) {
        Fail(ErrorKind::kStructure, "cycle in computation graph");
      }
    } else {
      colour[node] = kBlack;
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node* n : order) n->grad = Tensor();
  loss.node()->EnsureGrad()[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->grad.empty()) continue;
    if (n->backward) n->backward(*n);
    if (n->param) {
      if (!n->grad.AllFinite()) {
        Fail(ErrorKind::kNumeric, "non-finite gradient for " + n->param->name);
      }
      Tensor& g = n->param->grad;
      if (g.empty()) g = Tensor(n->param->value.shape(), 0.0);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += n->grad[i];
    }
  }
}

Var Add(const Var& a, const Var& b) {
  RequireSameShape(a, b, "add");
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += b.value()[i];
  return MakeNode("add", std::move(y), {a.node(), b.node()}, [](Node& self) {
    for (auto& p : self.parents) {
      if (!p->requires_grad) continue;
      Tensor& g = p->EnsureGrad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Var Sub(const Var& a, const Var& b) {
  RequireSameShape(a, b, "sub");
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= b.value()[i];
  return MakeNode("sub", std::move(y), {a.node(), b.node()}, [](Node& self) {
    for (std::size_t k = 0; k < 2; ++k) {
      auto& p = self.parents[k];
      if (!p->requires_grad) continue;
      const double sign = k == 0 ? 1.0 : -1.0;
      Tensor& g = p->EnsureGrad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += sign * self.grad[i];
    }
  });
}

Var Mul(const Var& a, const Var& b) {
  RequireSameShape(a, b, "mul");
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= b.value()[i];
  return MakeNode("mul", std::move(y), {a.node(), b.node()}, [](Node& self) {
    auto& pa = self.parents[0];
    auto& pb = self.parents[1];
    if (pa->requires_grad) {
      Tensor& g = pa->EnsureGrad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * pb->value[i];
    }
    if (pb->requires_grad) {
      Tensor& g = pb->EnsureGrad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * pa->value[i];
    }
  });
}

Var Scale(const Var& a, double s) {
  Tensor y = a.value();
  for (double& v : y.data()) v *= s;
  return MakeNode("scale", std::move(y), {a.node()}, [s](Node& self) {
    Tensor& g = self.parents[0]->EnsureGrad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += s * self.grad[i];
  });
}

Var AddChannelBias(const Var& x, const Var& bias) {
  RequireRank2(x, "add_channel_bias");
  const std::size_t channels = x.value().rows();
  const std::size_t steps = x.value().cols();
  Require(bias.value().size() == channels, ErrorKind::kShape,
          "add_channel_bias: bias has " + std::to_string(bias.value().size()) +
              " entries for " + std::to_string(channels) + " channels");
  Tensor y = x.value();
  for (std::size_t c = 0; c < channels; ++c) {
    const double b = bias.value()[c];
    for (double& v : y.row(c)) v += b;
  }
  return MakeNode("add_channel_bias", std::move(y), {x.node(), bias.node()},
                  [channels, steps](Node& self) {
                    auto& px = self.parents[0];
                    auto& pb = self.parents[1];
                    if (px->requires_grad) {
                      Tensor& g = px->EnsureGrad();
                      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                    }
                    if (pb->requires_grad) {
                      Tensor& g = pb->EnsureGrad();
                      for (std::size_t c = 0; c < channels; ++c) {
                        g[c] += RowSum(self.grad.row(c));
                      }
                    }
                    (void)steps;
                  });
}

Var ConcatChannels(const Var& a, const Var& b) {
  RequireRank2(a, "concat");
  RequireRank2(b, "concat");
  Require(a.value().cols() == b.value().cols(), ErrorKind::kShape,
          "concat: time lengths differ");
  const std::size_t ca = a.value().rows(), cb = b.value().rows(), t = a.value().cols();
  Tensor y({ca + cb, t});
  std::copy(a.value().data().begin(), a.value().data().end(), y.data().begin());
  std::copy(b.value().data().begin(), b.value().data().end(),
            y.data().begin() + static_cast<Index>(ca * t));
  return MakeNode("concat", std::move(y), {a.node(), b.node()}, [ca, t](Node& self) {
    const std::size_t split = ca * t;
    if (self.parents[0]->requires_grad) {
      Tensor& g = self.parents[0]->EnsureGrad();
      for (std::size_t i = 0; i < split; ++i) g[i] += self.grad[i];
    }
    if (self.parents[1]->requires_grad) {
      Tensor& g = self.parents[1]->EnsureGrad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[split + i];
    }
  });
}

Var RepeatTime(const Var& x, std::size_t factor) {
  RequireRank2(x, "repeat_time");
  Require(factor >= 1, ErrorKind::kShape, "repeat factor must be >= 1");
  const std::size_t c = x.value().rows(), t = x.value().cols();
  Tensor y({c, t * factor});
  for (std::size_t r = 0; r < c; ++r) {
    auto src = x.value().row(r);
    auto dst = y.row(r);
    for (std::size_t i = 0; i < t; ++i) {
      std::fill_n(dst.begin() + static_cast<Index>(i * factor), factor, src[i]);
    }
  }
  return MakeNode("repeat_time", std::move(y), {x.node()}, [c, t, factor](Node& self) {
    Tensor& g = self.parents[0]->EnsureGrad();
    for (std::size_t r = 0; r < c; ++r) {
      auto src = self.grad.row(r);
      for (std::size_t i = 0; i < t; ++i) {
        double acc = 0;
        for (std::size_t k = 0; k < factor; ++k) acc += src[i * factor + k];
        g.at(r, i) += acc;
      }
    }
  });
}

Var Clamp(const Var& x, double lo, double hi) {
  Tensor y = x.value();
  for (double& v : y.data()) v = std::clamp(v, lo, hi);
  return MakeNode("clamp", std::move(y), {x.node()}, [lo, hi](Node& self) {
    auto& p = self.parents[0];
    Tensor& g = p->EnsureGrad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = p->value[i];
      if (v >= lo && v <= hi) g[i] += self.grad[i];
    }
  });
}

Var Activate(const Var& x, Activation kind) {
  if (kind == Activation::kIdentity) return x;
  Tensor y = x.value();
  for (double& v : y.data()) {
    switch (kind) {
      case Activation::kRelu: v = v > 0 ? v : 0.0; break;
      case Activation::kSilu: v = v / (1.0 + std::exp(-v)); break;
      case Activation::kTanh: v = std::tanh(v); break;
      case Activation::kElu: v = v > 0 ? v : std::expm1(v); break;
      case Activation::kIdentity: break;
    }
  }
  return MakeNode("activation", std::move(y), {x.node()}, [kind](Node& self) {
    auto& p = self.parents[0];
    Tensor& g = p->EnsureGrad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double in = p->value[i];
      double d = 1.0;
      switch (kind) {
        case Activation::kRelu: d = in > 0 ? 1.0 : 0.0; break;
        case Activation::kSilu: {
          const double s = 1.0 / (1.0 + std::exp(-in));
          d = s * (1.0 + in * (1.0 - s));
          break;
        }
        case Activation::kTanh: d = 1.0 - self.value[i] * self.value[i]; break;
        case Activation::kElu: d = in > 0 ? 1.0 : std::exp(in); break;
        case Activation::kIdentity: break;
      }
      g[i] += d * self.grad[i];
    }
  });
}

Var Linear(const Var& x, const Var& weight, const Var* bias) {
  RequireRank2(x, "linear");
  RequireRank2(weight, "linear");
  const Index cin = static_cast<Index>(x.value().rows());
  const Index t = static_cast<Index>(x.value().cols());
  const Index cout = static_cast<Index>(weight.value().rows());
  if (static_cast<Index>(weight.value().cols()) != cin) {
    Fail(ErrorKind::kShape, "linear: weight " + ShapeString(weight.shape()) +
                                " does not accept input " + ShapeString(x.shape()));
  }
  if (bias != nullptr) {
    Require(bias->value().size() == static_cast<std::size_t>(cout), ErrorKind::kShape,
            "linear: bias size mismatch");
  }
  Tensor y({static_cast<std::size_t>(cout), static_cast<std::size_t>(t)});
  auto ym = MapMut(y.data().data(), cout, t);
  ym.noalias() = Map(weight.value().data().data(), cout, cin) * Map(x.value().data().data(), cin, t);
  if (bias != nullptr) AddRowBias(ym, bias->value());

  std::vector<std::shared_ptr<Node>> parents = {x.node(), weight.node()};
  if (bias != nullptr) parents.push_back(bias->node());
  return MakeNode("linear", std::move(y), std::move(parents), [cin, cout, t](Node& self) {
    auto& px = self.parents[0];
    auto& pw = self.parents[1];
    const auto dy = Map(self.grad.data().data(), cout, t);
    if (px->requires_grad) {
      MapMut(px->EnsureGrad().data().data(), cin, t).noalias() +=
          Map(pw->value.data().data(), cout, cin).transpose() * dy;
    }
    if (pw->requires_grad) {
      MapMut(pw->EnsureGrad().data().data(), cout, cin).noalias() +=
          dy * Map(px->value.data().data(), cin, t).transpose();
    }
    if (self.parents.size() > 2 && self.parents[2]->requires_grad) {
      AddRowSums(self.parents[2]->EnsureGrad(), self.grad);
    }
  });
}

namespace {

// Column matrix for a strided, dilated, zero-padded convolution:
// cols[(i * width + j), t] = x[i, t * s + j * d - p].
struct Im2ColGeometry {
  Index channels, t_in, width, stride, dilation, padding, t_out;
};

RowMatrix Im2Col(const double* x, const Im2ColGeometry& g) {
  RowMatrix cols = RowMatrix::Zero(g.channels * g.width, g.t_out);
  for (Index i = 0; i < g.channels; ++i) {
    const double* xr = x + i * g.t_in;
    for (Index j = 0; j < g.width; ++j) {
      const Index off = j * g.dilation - g.padding;
      const auto [t0, t1] = ValidRange(off, g.stride, g.t_in, g.t_out);
      double* cr = cols.data() + (i * g.width + j) * g.t_out;
      if (g.stride == 1) {
        std::copy(xr + t0 + off, xr + t1 + off, cr + t0);
      } else {
        for (Index t = t0; t < t1; ++t) cr[t] = xr[t * g.stride + off];
      }
    }
  }
  return cols;
}

// Adjoint of Im2Col: x[i, t * s + j * d - p] += cols[(i * width + j), t].
void Col2ImAdd(const RowMatrix& cols, const Im2ColGeometry& g, double* x) {
  for (Index i = 0; i < g.channels; ++i) {
    double* xr = x + i * g.t_in;
    for (Index j = 0; j < g.width; ++j) {
      const Index off = j * g.dilation - g.padding;
      const auto [t0, t1] = ValidRange(off, g.stride, g.t_in, g.t_out);
      const double* cr = cols.data() + (i * g.width + j) * g.t_out;
      for (Index t = t0; t < t1; ++t) xr[t * g.stride + off] += cr[t];
    }
  }
}

}  // namespace

Var Conv1d(const Var& x, const Var& kernel, const Var* bias, ConvOptions opts) {
  RequireRank2(x, "conv1d");
  const Tensor& k = kernel.value();
  if (k.rank() != 3 || k.dim(1) != x.value().rows()) {
    Fail(ErrorKind::kShape, "conv1d: kernel " + ShapeString(k.shape()) +
                                " does not accept input " + ShapeString(x.shape()));
  }
  Require(opts.stride >= 1 && opts.dilation >= 1, ErrorKind::kShape,
          "conv1d: stride and dilation must be >= 1");
  const Index cin = static_cast<Index>(k.dim(1));
  const Index cout = static_cast<Index>(k.dim(0));
  const Index width = static_cast<Index>(k.dim(2));
  const Index t_in = static_cast<Index>(x.value().cols());
  const Index d = static_cast<Index>(opts.dilation);
  const Index p = static_cast<Index>(opts.padding);
  const Index span = d * (width - 1) + 1;
  if (t_in + 2 * p < span) {
    Fail(ErrorKind::kShape, "conv1d: input of length " + std::to_string(t_in) +
                                " is shorter than the kernel span");
  }
  const Index s = static_cast<Index>(opts.stride);
  const Index t_out = (t_in + 2 * p - span) / s + 1;
  if (bias != nullptr) {
    Require(bias->value().size() == static_cast<std::size_t>(cout), ErrorKind::kShape,
            "conv1d: bias size mismatch");
  }
  const Im2ColGeometry g{cin, t_in, width, s, d, p, t_out};

  Tensor y({static_cast<std::size_t>(cout), static_cast<std::size_t>(t_out)});
  auto ym = MapMut(y.data().data(), cout, t_out);
  ym.noalias() = Map(k.data().data(), cout, cin * width) * Im2Col(x.value().data().data(), g);
  if (bias != nullptr) AddRowBias(ym, bias->value());

  std::vector<std::shared_ptr<Node>> parents = {x.node(), kernel.node()};
  if (bias != nullptr) parents.push_back(bias->node());
  return MakeNode("conv1d", std::move(y), std::move(parents), [=](Node& self) {
    auto& px = self.parents[0];
    auto& pk = self.parents[1];
    const auto dy = Map(self.grad.data().data(), cout, t_out);
    const auto km = Map(pk->value.data().data(), cout, cin * width);
    if (px->requires_grad) {
      const RowMatrix dcols = km.transpose() * dy;
      Col2ImAdd(dcols, g, px->EnsureGrad().data().data());
    }
    if (pk->requires_grad) {
      MapMut(pk->EnsureGrad().data().data(), cout, cin * width).noalias() +=
          dy * Im2Col(px->value.data().data(), g).transpose();
    }
    if (self.parents.size() > 2 && self.parents[2]->requires_grad) {
      AddRowSums(self.parents[2]->EnsureGrad(), self.grad);
    }
  });
}

namespace {

// Kernel cin x cout x width viewed as (cout * width) x cin.
RowMatrix TransposedKernel(const Tensor& k, Index cin, Index cout, Index width) {
  RowMatrix kt(cout * width, cin);
  for (Index i = 0; i < cin; ++i) {
    for (Index o = 0; o < cout; ++o) {
      for (Index j = 0; j < width; ++j) kt(o * width + j, i) = k[(i * cout + o) * width + j];
    }
  }
  return kt;
}

}  // namespace

Var ConvTranspose1d(const Var& x, const Var& kernel, const Var* bias, std::size_t stride,
                    std::size_t padding) {
  RequireRank2(x, "conv_transpose1d");
  const Tensor& k = kernel.value();
  if (k.rank() != 3 || k.dim(0) != x.value().rows()) {
    Fail(ErrorKind::kShape, "conv_transpose1d: kernel " + ShapeString(k.shape()) +
                                " does not accept input " + ShapeString(x.shape()));
  }
  Require(stride >= 1, ErrorKind::kShape, "conv_transpose1d: stride must be >= 1");
  const Index cin = static_cast<Index>(k.dim(0));
  const Index cout = static_cast<Index>(k.dim(1));
  const Index width = static_cast<Index>(k.dim(2));
  const Index t_in = static_cast<Index>(x.value().cols());
  const Index s = static_cast<Index>(stride);
  const Index p = static_cast<Index>(padding);
  const Index t_out = (t_in - 1) * s + width - 2 * p;
  Require(t_in > 0 && t_out > 0, ErrorKind::kShape, "conv_transpose1d: empty output");
  if (bias != nullptr) {
    Require(bias->value().size() == static_cast<std::size_t>(cout), ErrorKind::kShape,
            "conv_transpose1d: bias size mismatch");
  }
  // A transposed convolution is the adjoint of a strided convolution of the
  // output: scatter the (cout * width) x t_in products back along time.
  const Im2ColGeometry g{cout, t_out, width, s, 1, p, t_in};

  Tensor y({static_cast<std::size_t>(cout), static_cast<std::size_t>(t_out)});
  const RowMatrix cols = TransposedKernel(k, cin, cout, width) * Map(x.value().data().data(), cin, t_in);
  Col2ImAdd(cols, g, y.data().data());
  auto ym = MapMut(y.data().data(), cout, t_out);
  if (bias != nullptr) AddRowBias(ym, bias->value());

  std::vector<std::shared_ptr<Node>> parents = {x.node(), kernel.node()};
  if (bias != nullptr) parents.push_back(bias->node());
  return MakeNode("conv_transpose1d", std::move(y), std::move(parents), [=](Node& self) {
    auto& px = self.parents[0];
    auto& pk = self.parents[1];
    const RowMatrix dcols = Im2Col(self.grad.data().data(), g);
    if (px->requires_grad) {
      MapMut(px->EnsureGrad().data().data(), cin, t_in).noalias() +=
          TransposedKernel(pk->value, cin, cout, width).transpose() * dcols;
    }
    if (pk->requires_grad) {
      const RowMatrix dkt = dcols * Map(px->value.data().data(), cin, t_in).transpose();
      Tensor& dk = pk->EnsureGrad();
      for (Index i = 0; i < cin; ++i) {
        for (Index o = 0; o < cout; ++o) {
          for (Index j = 0; j < width; ++j) dk[(i * cout + o) * width + j] += dkt(o * width + j, i);
        }
      }
    }
    if (self.parents.size() > 2 && self.parents[2]->requires_grad) {
      AddRowSums(self.parents[2]->EnsureGrad(), self.grad);
    }
  });
}

Var Sum(const Var& a) {
  double acc = 0;
  for (double v : a.value().data()) acc += v;
  return MakeNode("sum", Tensor::Scalar(acc), {a.node()}, [](Node& self) {
    Tensor& g = self.parents[0]->EnsureGrad();
    const double up = self.grad[0];
    for (double& v : g.data()) v += up;
  });
}

Var MeanSquaredError(const Var& a, const Var& b) {
  RequireSameShape(a, b, "mse");
  const std::size_t n = a.value().size();
  Require(n > 0, ErrorKind::kShape, "mse of empty tensors");
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = a.value()[i] - b.value()[i];
    acc += e * e;
  }
  return MakeNode("mse", Tensor::Scalar(acc / n), {a.node(), b.node()}, [n](Node& self) {
    const double scale = 2.0 * self.grad[0] / static_cast<double>(n);
    auto& pa = self.parents[0];
    auto& pb = self.parents[1];
    for (std::size_t k = 0; k < 2; ++k) {
      auto& p = self.parents[k];
      if (!p->requires_grad) continue;
      const double sign = k == 0 ? 1.0 : -1.0;
      Tensor& g = p->EnsureGrad();
      for (std::size_t i = 0; i < n; ++i) {
        g[i] += sign * scale * (pa->value[i] - pb->value[i]);
      }
    }
  });
}

Var MeanAbsoluteError(const Var& a, const Var& b) {
  RequireSameShape(a, b, "mae");
  const std::size_t n = a.value().size();
  Require(n > 0, ErrorKind::kShape, "mae of empty tensors");
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(a.value()[i] - b.value()[i]);
  return MakeNode("mae", Tensor::Scalar(acc / n), {a.node(), b.node()}, [n](Node& self) {
    const double scale = self.grad[0] / static_cast<double>(n);
    auto& pa = self.parents[0];
    auto& pb = self.parents[1];
    for (std::size_t k = 0; k < 2; ++k) {
      auto& p = self.parents[k];
      if (!p->requires_grad) continue;
      const double sign = k == 0 ? 1.0 : -1.0;
      Tensor& g = p->EnsureGrad();
      for (std::size_t i = 0; i < n; ++i) {
        const double e = pa->value[i] - pb->value[i];
        const double sgn = e > 0 ? 1.0 : (e < 0 ? -1.0 : 0.0);
        g[i] += sign * scale * sgn;
      }
    }
  });
}

namespace detail {

void AddParent(const Var& child, const Var& parent) {
  child.node()->parents.push_back(parent.node());
  child.node()->requires_grad = true;
}

}  // namespace detail
}  // namespace dnsc::nn
