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

#include "codec/networks.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace dnsc::codec {

namespace {

constexpr std::array<std::size_t, 5> kEncoderChannels = {32, 64, 128, 128, kLatentDim};
constexpr std::array<std::size_t, 4> kDecoderChannels = {128, 128, 64, 32};
constexpr std::array<std::size_t, 4> kDecoderStrides = {2, 4, 4, 8};

}  // namespace

std::size_t FramesFor(std::size_t samples) {
  return std::max<std::size_t>(1, (samples + kHop - 1) / kHop);
}

nn::Tensor FramedWaveform(const std::vector<double>& samples, std::size_t frames) {
  nn::Tensor out({1, frames * kHop});
  std::copy_n(samples.begin(), std::min(samples.size(), out.size()), out.data().begin());
  return out;
}

WaveEncoder::WaveEncoder(nn::ParameterSet& params, const std::string& prefix, nn::Rng& rng)
    : input_(params, prefix + "input", 1, kEncoderChannels[0], 7, rng) {
  for (std::size_t i = 0; i < kEncoderStrides.size(); ++i) {
    const std::size_t s = kEncoderStrides[i];
    down_.emplace_back(params, prefix + "down" + std::to_string(i), kEncoderChannels[i],
                       kEncoderChannels[i + 1], 2 * s, rng, s, 1, static_cast<long>(s / 2));
  }
}

nn::Var WaveEncoder::Forward(const nn::Var& wav) const {
  Require(wav.value().rank() == 2 && wav.value().rows() == 1 && wav.value().cols() % kHop == 0,
          ErrorKind::kShape, "encoder input must be 1 x (frames * 256)");
  nn::Var h = nn::Activate(input_(wav), nn::Activation::kElu);
  for (std::size_t i = 0; i < down_.size(); ++i) {
    h = down_[i](h);
    if (i + 1 < down_.size()) h = nn::Activate(h, nn::Activation::kElu);
  }
  return h;
}

FrameDecoder::FrameDecoder(nn::ParameterSet& params, const std::string& prefix,
                           std::size_t in_channels, nn::Rng& rng) {
  std::size_t in = in_channels;
  for (std::size_t i = 0; i < kDecoderStrides.size(); ++i) {
    const std::size_t s = kDecoderStrides[i];
    up_.emplace_back(params, prefix + "up" + std::to_string(i), in, kDecoderChannels[i], 2 * s, s,
                     s / 2, rng);
    in = kDecoderChannels[i];
  }
  output_ = nn::Conv1dLayer(params, prefix + "output", in, 1, 7, rng);
}

nn::Var FrameDecoder::Forward(const nn::Var& frames) const {
  nn::Var h = frames;
  for (const auto& layer : up_) h = nn::Activate(layer(h), nn::Activation::kElu);
  return output_(h);
}

nn::Var ReconstructionLoss(const nn::Var& output, const nn::Var& target) {
  return nn::Add(nn::MeanAbsoluteError(output, target), nn::MeanSquaredError(output, target));
}

nn::Tensor SliceColumns(const nn::Tensor& x, std::size_t begin, std::size_t count) {
  Require(x.rank() == 2 && begin + count <= x.cols(), ErrorKind::kShape, "column slice out of range");
  nn::Tensor out({x.rows(), count});
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy_n(x.row(r).begin() + static_cast<std::ptrdiff_t>(begin), count, out.row(r).begin());
  }
  return out;
}

}  // namespace dnsc::codec
