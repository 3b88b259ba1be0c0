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

#ifndef DNSC_QUANTIZER_SCALAR_HPP_
#define DNSC_QUANTIZER_SCALAR_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common/index_matrix.hpp"
#include "nn/layers.hpp"

namespace dnsc::quantizer {

// Uniform grid of `levels` values on [-1, 1], step 2 / (levels - 1).
struct SqGeometry {
  std::size_t input_dim = 80;
  std::size_t code_dim = 16;
  int levels = 8;

  double step() const { return 2.0 / (levels - 1); }
  int bits_per_dim() const;
  std::size_t bits_per_frame() const { return code_dim * static_cast<std::size_t>(bits_per_dim()); }
};

double LevelValue(std::uint32_t index, int levels);
// Nearest level to clamp(v, -1, 1); exact ties go to the lower index.
std::uint32_t NearestLevel(double v, int levels);

// Scalar quantizer with learnable projections:
//   encode:  indices = round_L(clamp(down_proj(x), -1, 1))
//   decode:  up_proj(levels[indices])
//   train:   up_proj(clamp(down_proj(x)) + u),  u ~ U(-step/2, step/2)
// Projections are bias-free linear maps.
class ScalarQuantizer {
 public:
  ScalarQuantizer() = default;
  ScalarQuantizer(const SqGeometry& geometry, nn::ParameterSet& params, const std::string& prefix,
                  nn::Rng& rng);

  // Identity projections (requires input_dim == code_dim); not trainable.
  static ScalarQuantizer Identity(std::size_t dim, int levels);

  const SqGeometry& geometry() const { return geometry_; }

  // Per-frame: x has input_dim entries.
  std::vector<std::uint32_t> QuantizeFrame(std::span<const double> x) const;
  std::vector<double> DequantizeFrame(std::span<const std::uint32_t> indices) const;

  // x: input_dim x frames -> frames x code_dim indices.
  IndexMatrix Quantize(const nn::Tensor& x) const;
  // -> input_dim x frames.
  nn::Tensor Dequantize(const IndexMatrix& indices) const;

  // Differentiable training path with additive uniform noise.
  nn::Var NoisyForward(const nn::Var& x, nn::Rng& rng) const;
  // Noise-free, rounding-free path (the step -> 0 limit of NoisyForward).
  nn::Var CleanForward(const nn::Var& x) const;
  // clamp(down_proj(x)): the continuous codes before rounding.
  nn::Tensor Codes(const nn::Tensor& x) const;

 private:
  nn::Var Down(const nn::Var& x) const;
  nn::Var Up(const nn::Var& codes) const;

  SqGeometry geometry_;
  std::shared_ptr<nn::Parameter> down_;
  std::shared_ptr<nn::Parameter> up_;
};

}  // namespace dnsc::quantizer

#endif  // DNSC_QUANTIZER_SCALAR_HPP_
