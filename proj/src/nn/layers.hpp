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

#ifndef DNSC_NN_LAYERS_HPP_
#define DNSC_NN_LAYERS_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nn/autograd.hpp"

namespace dnsc::nn {

using Rng = std::mt19937_64;

// Ordered, name-addressable collection of trainable parameters. Insertion
// order is the serialization order and the optimizer's iteration order.
class ParameterSet {
 public:
  std::shared_ptr<Parameter> Add(const std::string& name, Tensor init);
  std::shared_ptr<Parameter> Find(const std::string& name) const;
  std::shared_ptr<Parameter> Get(const std::string& name) const;

  const std::vector<std::shared_ptr<Parameter>>& all() const { return params_; }
  std::size_t TotalSize() const;
  // Parameters whose names start with `prefix`, shared (not copied).
  ParameterSet Filter(const std::string& prefix) const;
  void ZeroGrad();

  // Replaces values by name. Every parameter must be present with a matching
  // shape; extra entries are rejected unless `allow_extra`.
  void Load(const std::vector<std::pair<std::string, Tensor>>& named, bool allow_extra = false);
  std::vector<std::pair<std::string, Tensor>> Export() const;
  // Order-sensitive FNV-1a hash over names, shapes and value bits.
  std::uint64_t Checksum() const;

 private:
  std::vector<std::shared_ptr<Parameter>> params_;
  std::map<std::string, std::shared_ptr<Parameter>> by_name_;
};

// Kaiming-uniform (fan-in) initialiser: U(-g*sqrt(3/fan_in), g*sqrt(3/fan_in)).
Tensor KaimingUniform(Shape shape, std::size_t fan_in, Rng& rng, double gain = 1.0);

class LinearLayer {
 public:
  LinearLayer() = default;
  LinearLayer(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out,
              Rng& rng, bool with_bias = true, double gain = 1.0);
  // x: in x T -> out x T.
  Var operator()(const Var& x) const;

  const std::shared_ptr<Parameter>& weight() const { return weight_; }

 private:
  std::shared_ptr<Parameter> weight_;
  std::shared_ptr<Parameter> bias_;
};

class Conv1dLayer {
 public:
  Conv1dLayer() = default;
  // padding < 0 selects "same" padding for stride 1: d*(k-1)/2.
  Conv1dLayer(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out,
              std::size_t kernel, Rng& rng, std::size_t stride = 1, std::size_t dilation = 1,
              long padding = -1, double gain = 1.0);
  Var operator()(const Var& x) const;

 private:
  std::shared_ptr<Parameter> kernel_;
  std::shared_ptr<Parameter> bias_;
  ConvOptions opts_;
};

class ConvTranspose1dLayer {
 public:
  ConvTranspose1dLayer() = default;
  ConvTranspose1dLayer(ParameterSet& params, const std::string& name, std::size_t in,
                       std::size_t out, std::size_t kernel, std::size_t stride,
                       std::size_t padding, Rng& rng, double gain = 1.0);
  Var operator()(const Var& x) const;

 private:
  std::shared_ptr<Parameter> kernel_;
  std::shared_ptr<Parameter> bias_;
  std::size_t stride_ = 1;
  std::size_t padding_ = 0;
};

// Interleaved [sin, cos] pairs at frequencies 10000^(-i/(dim/2)) applied to
// t_normalized * 1000. Throws a config error for odd dim.
std::vector<double> SinusoidalEmbedding(double t_normalized, std::size_t dim,
                                        double max_period = 10000.0);

}  // namespace dnsc::nn

#endif  // DNSC_NN_LAYERS_HPP_
