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

#ifndef DNSC_NN_DENOISER_HPP_
#define DNSC_NN_DENOISER_HPP_

#include <string>
#include <vector>

#include "nn/layers.hpp"

namespace dnsc::nn {

struct DenoiserSpec {
  std::size_t data_channels = 80;  // channels of x_t
  std::size_t cond_channels = 80;  // channels of z
  std::size_t upsample = 1;        // x_t steps per z frame
  std::size_t width = 64;
  std::size_t blocks = 4;
  std::size_t kernel = 3;
  std::size_t time_dim = 32;
};

// Residual conv1d network f(x_t, z, t). z is projected per block at frame
// rate and repeated `upsample` times (nearest neighbour) to the data rate;
// the diffusion time enters through a sinusoidal embedding added per block.
// Block b uses dilation 2^b.
class ResidualDenoiser {
 public:
  ResidualDenoiser(const DenoiserSpec& spec, ParameterSet& params, const std::string& prefix,
                   Rng& rng);

  // x_t: data_channels x (frames * upsample), z: cond_channels x frames.
  Var Forward(const Var& x_t, const Var& z, double t_normalized) const;

  const DenoiserSpec& spec() const { return spec_; }

 private:
  struct Block {
    LinearLayer time_proj;
    LinearLayer cond_proj;
    Conv1dLayer conv1;
    Conv1dLayer conv2;
  };

  DenoiserSpec spec_;
  Conv1dLayer input_;
  LinearLayer cond_input_;
  LinearLayer time_fc_;
  std::vector<Block> blocks_;
  Conv1dLayer output_;
};

}  // namespace dnsc::nn

#endif  // DNSC_NN_DENOISER_HPP_
