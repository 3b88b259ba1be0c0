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

#include "nn/denoiser.hpp"

#include "common/error.hpp"

namespace dnsc::nn {

ResidualDenoiser::ResidualDenoiser(const DenoiserSpec& spec, ParameterSet& params,
                                   const std::string& prefix, Rng& rng)
    : spec_(spec) {
  Require(spec.width > 0 && spec.blocks > 0 && spec.upsample > 0, ErrorKind::kConfig,
          "denoiser width, blocks and upsample must be positive");
  const std::size_t w = spec.width;
  input_ = Conv1dLayer(params, prefix + "input", spec.data_channels, w, spec.kernel, rng);
  cond_input_ = LinearLayer(params, prefix + "cond_input", spec.cond_channels, w, rng, false);
  time_fc_ = LinearLayer(params, prefix + "time_fc", spec.time_dim, w, rng);
  for (std::size_t b = 0; b < spec.blocks; ++b) {
    const std::string name = prefix + "block" + std::to_string(b);
    Block blk;
    blk.time_proj = LinearLayer(params, name + ".time_proj", w, w, rng);
    blk.cond_proj = LinearLayer(params, name + ".cond_proj", spec.cond_channels, w, rng, false);
    blk.conv1 = Conv1dLayer(params, name + ".conv1", w, w, spec.kernel, rng, 1, std::size_t{1} << b);
    blk.conv2 = Conv1dLayer(params, name + ".conv2", w, w, spec.kernel, rng, 1, 1, -1, 0.5);
    blocks_.push_back(std::move(blk));
  }
  output_ = Conv1dLayer(params, prefix + "output", w, spec.data_channels, spec.kernel, rng, 1, 1,
                        -1, 0.1);
}

Var ResidualDenoiser::Forward(const Var& x_t, const Var& z, double t_normalized) const {
  Require(x_t.value().rank() == 2 && z.value().rank() == 2, ErrorKind::kShape,
          "denoiser inputs must be rank 2");
  Require(x_t.value().rows() == spec_.data_channels, ErrorKind::kShape,
          "denoiser: x_t has " + std::to_string(x_t.value().rows()) + " channels, expected " +
              std::to_string(spec_.data_channels));
  Require(z.value().rows() == spec_.cond_channels, ErrorKind::kShape,
          "denoiser: z has " + std::to_string(z.value().rows()) + " channels, expected " +
              std::to_string(spec_.cond_channels));
  Require(x_t.value().cols() == z.value().cols() * spec_.upsample, ErrorKind::kShape,
          "denoiser: x_t length is not z frames x upsample");

  auto up = [this](const Var& v) {
    return spec_.upsample == 1 ? v : RepeatTime(v, spec_.upsample);
  };
  const std::vector<double> emb = SinusoidalEmbedding(t_normalized, spec_.time_dim);
  const Var temb =
      Activate(time_fc_(Constant(Tensor({spec_.time_dim, 1}, emb))), Activation::kSilu);

  Var h = Add(input_(x_t), up(cond_input_(z)));
  for (const Block& blk : blocks_) {
    Var r = AddChannelBias(h, blk.time_proj(temb));
    r = Activate(Add(r, up(blk.cond_proj(z))), Activation::kSilu);
    r = Activate(blk.conv1(r), Activation::kSilu);
    h = Add(h, blk.conv2(r));
  }
  return output_(Activate(h, Activation::kSilu));
}

}  // namespace dnsc::nn
