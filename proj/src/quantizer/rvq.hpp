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

#ifndef DNSC_QUANTIZER_RVQ_HPP_
#define DNSC_QUANTIZER_RVQ_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "nn/tensor.hpp"

namespace dnsc::quantizer {

// Cascade of vector quantizers; each stage codes the residual of the previous
// ones. codebooks: stages x codebook_size x dim.
class ResidualVq {
 public:
  ResidualVq(std::size_t stages, std::size_t codebook_size, std::size_t dim,
             std::vector<double> codebooks);

  // k-means per stage on the running residuals of `data` (rows x dim).
  // Index 0 of every stage is pinned to the zero vector.
  static ResidualVq Fit(const nn::Tensor& data, std::size_t stages, std::size_t codebook_size,
                        int iterations, std::uint64_t seed);

  std::size_t stages() const { return stages_; }
  std::size_t codebook_size() const { return codebook_size_; }
  std::size_t dim() const { return dim_; }
  std::size_t bits_per_frame() const;

  std::span<const double> Codevector(std::size_t stage, std::size_t index) const;

  // Uses the first `stages_used` stages (all when 0).
  std::vector<std::uint32_t> Quantize(std::span<const double> x, std::size_t stages_used = 0) const;
  std::vector<double> Dequantize(std::span<const std::uint32_t> indices) const;

 private:
  std::size_t Nearest(std::size_t stage, std::span<const double> r) const;

  std::size_t stages_;
  std::size_t codebook_size_;
  std::size_t dim_;
  std::vector<double> codebooks_;
};

}  // namespace dnsc::quantizer

#endif  // DNSC_QUANTIZER_RVQ_HPP_
