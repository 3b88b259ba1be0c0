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

#include "nn/layers.hpp"

#include <cmath>
#include <cstring>

#include "common/error.hpp"

namespace dnsc::nn {

std::shared_ptr<Parameter> ParameterSet::Add(const std::string& name, Tensor init) {
  Require(!by_name_.contains(name), ErrorKind::kConfig, "duplicate parameter " + name);
  auto p = std::make_shared<Parameter>();
  p->name = name;
  p->grad = Tensor(init.shape(), 0.0);
  p->value = std::move(init);
  params_.push_back(p);
  by_name_[name] = p;
  return p;
}

std::shared_ptr<Parameter> ParameterSet::Find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

std::shared_ptr<Parameter> ParameterSet::Get(const std::string& name) const {
  auto p = Find(name);
  Require(p != nullptr, ErrorKind::kConfig, "unknown parameter " + name);
  return p;
}

std::size_t ParameterSet::TotalSize() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void ParameterSet::ZeroGrad() {
  for (auto& p : params_) {
    if (p->grad.SameShape(p->value)) {
      p->grad.Fill(0.0);
    } else {
      p->grad = Tensor(p->value.shape(), 0.0);
    }
  }
}

ParameterSet ParameterSet::Filter(const std::string& prefix) const {
  ParameterSet out;
  for (const auto& p : params_) {
    if (p->name.rfind(prefix, 0) == 0) {
      out.params_.push_back(p);
      out.by_name_[p->name] = p;
    }
  }
  return out;
}

void ParameterSet::Load(const std::vector<std::pair<std::string, Tensor>>& named,
                        bool allow_extra) {
  std::map<std::string, const Tensor*> lookup;
  for (const auto& [name, t] : named) lookup[name] = &t;
  for (auto& p : params_) {
    auto it = lookup.find(p->name);
    Require(it != lookup.end(), ErrorKind::kFormat, "checkpoint lacks parameter " + p->name);
    if (it->second->shape() != p->value.shape()) {
      Fail(ErrorKind::kFormat, "parameter " + p->name + " has shape " +
                                   ShapeString(it->second->shape()) + ", expected " +
                                   ShapeString(p->value.shape()));
    }
    p->value = *it->second;
    lookup.erase(it);
  }
  if (!allow_extra && !lookup.empty()) {
    Fail(ErrorKind::kFormat, "checkpoint has unexpected parameter " + lookup.begin()->first);
  }
}

std::vector<std::pair<std::string, Tensor>> ParameterSet::Export() const {
  std::vector<std::pair<std::string, Tensor>> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.emplace_back(p->name, p->value);
  return out;
}

std::uint64_t ParameterSet::Checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& p : params_) {
    mix(p->name.data(), p->name.size());
    for (std::size_t d : p->value.shape()) mix(&d, sizeof d);
    mix(p->value.data().data(), p->value.size() * sizeof(double));
  }
  return h;
}

Tensor KaimingUniform(Shape shape, std::size_t fan_in, Rng& rng, double gain) {
  Tensor t(std::move(shape));
  const double bound = gain * std::sqrt(3.0 / static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& v : t.data()) v = u(rng);
  return t;
}

LinearLayer::LinearLayer(ParameterSet& params, const std::string& name, std::size_t in,
                         std::size_t out, Rng& rng, bool with_bias, double gain) {
  weight_ = params.Add(name + ".weight", KaimingUniform({out, in}, in, rng, gain));
  if (with_bias) bias_ = params.Add(name + ".bias", Tensor({out}, 0.0));
}

Var LinearLayer::operator()(const Var& x) const {
  const Var w = Leaf(weight_);
  if (bias_) {
    const Var b = Leaf(bias_);
    return Linear(x, w, &b);
  }
  return Linear(x, w, nullptr);
}

Conv1dLayer::Conv1dLayer(ParameterSet& params, const std::string& name, std::size_t in,
                         std::size_t out, std::size_t kernel, Rng& rng, std::size_t stride,
                         std::size_t dilation, long padding, double gain) {
  kernel_ = params.Add(name + ".kernel", KaimingUniform({out, in, kernel}, in * kernel, rng, gain));
  bias_ = params.Add(name + ".bias", Tensor({out}, 0.0));
  opts_.stride = stride;
  opts_.dilation = dilation;
  opts_.padding = padding < 0 ? dilation * (kernel - 1) / 2 : static_cast<std::size_t>(padding);
}

Var Conv1dLayer::operator()(const Var& x) const {
  const Var b = Leaf(bias_);
  return Conv1d(x, Leaf(kernel_), &b, opts_);
}

ConvTranspose1dLayer::ConvTranspose1dLayer(ParameterSet& params, const std::string& name,
                                           std::size_t in, std::size_t out, std::size_t kernel,
                                           std::size_t stride, std::size_t padding, Rng& rng,
                                           double gain)
    : stride_(stride), padding_(padding) {
  // Each output sample receives kernel/stride taps per input channel.
  const std::size_t fan_in = in * std::max<std::size_t>(kernel / stride, 1);
  kernel_ = params.Add(name + ".kernel", KaimingUniform({in, out, kernel}, fan_in, rng, gain));
  bias_ = params.Add(name + ".bias", Tensor({out}, 0.0));
}

Var ConvTranspose1dLayer::operator()(const Var& x) const {
  const Var b = Leaf(bias_);
  return ConvTranspose1d(x, Leaf(kernel_), &b, stride_, padding_);
}

std::vector<double> SinusoidalEmbedding(double t_normalized, std::size_t dim,
                                        double max_period) {
  Require(dim > 0 && dim % 2 == 0, ErrorKind::kConfig, "embedding dim must be even and positive");
  const std::size_t half = dim / 2;
  const double t = t_normalized * 1000.0;
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < half; ++i) {
    const double freq = std::pow(max_period, -static_cast<double>(i) / static_cast<double>(half));
    out[2 * i] = std::sin(t * freq);
    out[2 * i + 1] = std::cos(t * freq);
  }
  return out;
}

}  // namespace dnsc::nn
