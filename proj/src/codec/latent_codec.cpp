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

#include "codec/latent_codec.hpp"

#include <cmath>

#include "common/error.hpp"
#include "nn/optim.hpp"
#include "quantizer/bitrate.hpp"

namespace dnsc::codec {

namespace {

quantizer::SqGeometry GeometryFor(int bitrate_bps) {
  return quantizer::PlanBitrate(quantizer::BitrateSpec{bitrate_bps}, kLatentDim);
}

// Shared loop: each step draws an utterance and a crop, `loss_fn` builds the
// graph for that crop.
std::vector<double> RunCropTraining(
    nn::ParameterSet& params, const Corpus& corpus, const CodecTrainOptions& options,
    const std::string& stage,
    const std::function<nn::Var(std::size_t utt, std::size_t first_frame, std::size_t frames,
                                nn::Rng& rng)>& loss_fn) {
  Require(!corpus.empty(), ErrorKind::kConfig, "empty corpus");
  nn::Rng rng(options.seed);
  nn::Adam adam({.lr = options.lr, .clip_norm = 1.0});
  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(options.steps));
  for (long step = 0; step < options.steps; ++step) {
    const std::size_t utt = std::uniform_int_distribution<std::size_t>(0, corpus.size() - 1)(rng);
    const std::size_t total = FramesFor(corpus[utt].clip.size());
    const std::size_t frames = std::min(options.crop_frames, total);
    const std::size_t first =
        std::uniform_int_distribution<std::size_t>(0, total - frames)(rng);
    params.ZeroGrad();
    const nn::Var loss = loss_fn(utt, first, frames, rng);
    const double value = loss.value()[0];
    if (!std::isfinite(value)) {
      Fail(ErrorKind::kTraining, stage + " diverged at step " + std::to_string(step));
    }
    nn::Backward(loss);
    adam.Step(params);
    losses.push_back(value);
    if (options.progress) options.progress(stage, step, value);
  }
  return losses;
}

nn::Tensor WaveCrop(const signal::AudioClip& clip, std::size_t first, std::size_t frames) {
  const nn::Tensor full = FramedWaveform(clip.samples, FramesFor(clip.size()));
  return SliceColumns(full, first * kHop, frames * kHop);
}

}  // namespace

LatentCodec::LatentCodec(int bitrate_bps, std::uint64_t seed) : bitrate_bps_(bitrate_bps) {
  nn::Rng rng(seed);
  const quantizer::SqGeometry geometry = GeometryFor(bitrate_bps);
  encoder_ = WaveEncoder(params_, "enc.", rng);
  sq_ = quantizer::ScalarQuantizer(geometry, params_, "sq.", rng);
  decoder_ = FrameDecoder(params_, "dec.", kLatentDim, rng);
}

nn::Tensor LatentCodec::Analyze(const signal::AudioClip& clip) const {
  const nn::Tensor wav = FramedWaveform(clip.samples, FramesFor(clip.size()));
  return encoder_.Forward(nn::Constant(wav)).value();
}

IndexMatrix LatentCodec::Quantize(const signal::AudioClip& clip) const {
  return sq_.Quantize(Analyze(clip));
}

nn::Tensor LatentCodec::Dequantize(const IndexMatrix& indices) const {
  return sq_.Dequantize(indices);
}

nn::Tensor LatentCodec::Latents(const signal::AudioClip& clip) const {
  return Dequantize(Quantize(clip));
}

nn::Tensor LatentCodec::ContinuousLatents(const signal::AudioClip& clip) const {
  return sq_.CleanForward(nn::Constant(Analyze(clip))).value();
}

signal::AudioClip LatentCodec::Decode(const nn::Tensor& latents) const {
  signal::AudioClip clip;
  clip.samples = decoder_.Forward(nn::Constant(latents)).value().data();
  return clip;
}

nn::Var LatentCodec::TrainForward(const nn::Var& wav, nn::Rng& rng, bool quantize) const {
  const nn::Var latents = encoder_.Forward(wav);
  const nn::Var coded = quantize ? sq_.NoisyForward(latents, rng) : sq_.CleanForward(latents);
  return decoder_.Forward(coded);
}

std::vector<double> TrainLatentCodec(LatentCodec& codec, const Corpus& corpus,
                                     const CodecTrainOptions& options) {
  const std::string stage = "codec" + std::to_string(codec.bitrate_bps());
  return RunCropTraining(
      codec.params(), corpus, options, stage,
      [&](std::size_t utt, std::size_t first, std::size_t frames, nn::Rng& rng) {
        const nn::Var target = nn::Constant(WaveCrop(corpus[utt].clip, first, frames));
        return ReconstructionLoss(codec.TrainForward(target, rng, options.quantize), target);
      });
}

std::vector<double> TrainFrameDecoder(const FrameDecoder& decoder, nn::ParameterSet& params,
                                      const std::vector<nn::Tensor>& features,
                                      const Corpus& corpus, const CodecTrainOptions& options) {
  Require(features.size() == corpus.size(), ErrorKind::kShape,
          "one feature tensor per utterance is required");
  return RunCropTraining(
      params, corpus, options, "decoder",
      [&](std::size_t utt, std::size_t first, std::size_t frames, nn::Rng&) {
        const nn::Var input = nn::Constant(SliceColumns(features[utt], first, frames));
        const nn::Var target = nn::Constant(WaveCrop(corpus[utt].clip, first, frames));
        return ReconstructionLoss(decoder.Forward(input), target);
      });
}

}  // namespace dnsc::codec
