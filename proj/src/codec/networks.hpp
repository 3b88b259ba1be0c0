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

#ifndef DNSC_CODEC_NETWORKS_HPP_
#define DNSC_CODEC_NETWORKS_HPP_

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nn/layers.hpp"

namespace dnsc::codec {

inline constexpr std::size_t kHop = 256;
inline constexpr std::size_t kLatentDim = 80;
inline constexpr std::array<std::size_t, 4> kEncoderStrides = {8, 4, 4, 2};

// ceil(samples / hop), at least 1.
std::size_t FramesFor(std::size_t samples);
// 1 x (frames * hop) tensor: the clip zero padded (or cut) to whole frames.
nn::Tensor FramedWaveform(const std::vector<double>& samples, std::size_t frames);

// Waveform (1 x frames*256) -> kLatentDim x frames.
// conv k7 1->32, then conv(kernel 2s, stride s) blocks 32->64->128->128->80,
// ELU between layers.
class WaveEncoder {
 public:
  WaveEncoder() = default;
  WaveEncoder(nn::ParameterSet& params, const std::string& prefix, nn::Rng& rng);
  nn::Var Forward(const nn::Var& wav) const;

 private:
  nn::Conv1dLayer input_;
  std::vector<nn::Conv1dLayer> down_;
};

// channels x frames -> 1 x frames*256. Transposed convs 2,4,4,8 with
// channels in->128->128->64->32, then conv k7 32->1.
class FrameDecoder {
 public:
  FrameDecoder() = default;
  FrameDecoder(nn::ParameterSet& params, const std::string& prefix, std::size_t in_channels,
               nn::Rng& rng);
  nn::Var Forward(const nn::Var& frames) const;

 private:
  std::vector<nn::ConvTranspose1dLayer> up_;
  nn::Conv1dLayer output_;
};

// Optional training progress sink: (stage, step, loss).
using ProgressFn = std::function<void(const std::string& stage, long step, double loss)>;

// Sum of mean absolute and mean squared error.
nn::Var ReconstructionLoss(const nn::Var& output, const nn::Var& target);

// Columns [begin, begin + count) of a rank-2 tensor.
nn::Tensor SliceColumns(const nn::Tensor& x, std::size_t begin, std::size_t count);

}  // namespace dnsc::codec

#endif  // DNSC_CODEC_NETWORKS_HPP_
