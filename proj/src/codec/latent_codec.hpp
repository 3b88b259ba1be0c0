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

#ifndef DNSC_CODEC_LATENT_CODEC_HPP_
#define DNSC_CODEC_LATENT_CODEC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "codec/corpus.hpp"
#include "codec/networks.hpp"
#include "common/index_matrix.hpp"
#include "nn/checkpoint.hpp"
#include "quantizer/scalar.hpp"

namespace dnsc::codec {

// Conv autoencoder with a scalar-quantized 80-dim bottleneck at 62.5 frames/s.
class LatentCodec {
 public:
  LatentCodec(int bitrate_bps, std::uint64_t seed);
  LatentCodec(LatentCodec&&) = default;
  LatentCodec& operator=(LatentCodec&&) = default;

  int bitrate_bps() const { return bitrate_bps_; }
  const quantizer::SqGeometry& geometry() const { return sq_.geometry(); }
  nn::ParameterSet& params() { return params_; }
  const nn::ParameterSet& params() const { return params_; }
  const FrameDecoder& decoder() const { return decoder_; }

  // Encoder output before quantization, kLatentDim x frames.
  nn::Tensor Analyze(const signal::AudioClip& clip) const;
  IndexMatrix Quantize(const signal::AudioClip& clip) const;
  nn::Tensor Dequantize(const IndexMatrix& indices) const;
  // Dequantize(Quantize(clip)).
  nn::Tensor Latents(const signal::AudioClip& clip) const;
  // up(clamp(down(encoder))): the rounding-free latents.
  nn::Tensor ContinuousLatents(const signal::AudioClip& clip) const;
  // kLatentDim x frames -> frames * 256 samples.
  signal::AudioClip Decode(const nn::Tensor& latents) const;

  // Differentiable paths for training.
  nn::Var TrainForward(const nn::Var& wav, nn::Rng& rng, bool quantize) const;

  nn::NamedTensors Export() const { return params_.Export(); }
  void Load(const nn::NamedTensors& tensors) { params_.Load(tensors); }

 private:
  int bitrate_bps_;
  nn::ParameterSet params_;
  WaveEncoder encoder_;
  quantizer::ScalarQuantizer sq_;
  FrameDecoder decoder_;
};

struct CodecTrainOptions {
  long steps = 2000;
  std::uint64_t seed = 0;
  double lr = 1e-3;
  std::size_t crop_frames = 16;
  // false trains through the rounding-free path (no quantization noise).
  bool quantize = true;
  ProgressFn progress;
};

// L1+L2 waveform reconstruction on random crops, one crop per step. Returns
// the per-step loss. A non-finite loss is a training error.
std::vector<double> TrainLatentCodec(LatentCodec& codec, const Corpus& corpus,
                                     const CodecTrainOptions& options);

// Trains `decoder` to map frame features (channels x frames, one tensor per
// utterance) to the matching waveforms.
std::vector<double> TrainFrameDecoder(const FrameDecoder& decoder, nn::ParameterSet& params,
                                      const std::vector<nn::Tensor>& features,
                                      const Corpus& corpus, const CodecTrainOptions& options);

}  // namespace dnsc::codec

#endif  // DNSC_CODEC_LATENT_CODEC_HPP_
