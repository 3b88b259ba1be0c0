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

#ifndef DNSC_CODEC_PIPELINE_HPP_
#define DNSC_CODEC_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bitstream/bitstream.hpp"
#include "codec/config.hpp"
#include "codec/corpus.hpp"
#include "codec/latent_codec.hpp"
#include "diffusion/process.hpp"
#include "nn/denoiser.hpp"
#include "signal/mel.hpp"

namespace dnsc::codec {

// Scalar affine map to zero mean, unit variance.
struct Normalizer {
  double mean = 0.0;
  double std = 1.0;
  static Normalizer Fit(const std::vector<nn::Tensor>& data);
  nn::Tensor Apply(const nn::Tensor& x) const;
  nn::Tensor Invert(const nn::Tensor& x) const;
};

// 80 x frames tensor <-> log-mel matrix.
nn::Tensor MelTensor(const signal::MelSpectrogram& mel);
signal::MelSpectrogram TensorToMel(const nn::Tensor& x);

struct TrainReport {
  std::vector<double> cond_codec_loss;
  std::vector<double> target_codec_loss;
  std::vector<double> denoiser_loss;
  std::vector<double> decoder_loss;
  std::vector<double> finetune_loss;
  // Conditioning codec parameters around denoiser training (0 without one).
  std::uint64_t frozen_checksum_before = 0;
  std::uint64_t frozen_checksum_after = 0;
};

struct DecodeResult {
  nn::Tensor conditioning;  // dequantized log-mel or latents, 80 x frames
  nn::Tensor output;        // generated wav (1 x samples), log-mel or latents
  signal::AudioClip audio;
};

// One cell of the design space: conditioning encoder + quantizer, denoiser
// and decoder stage. Immutable once trained; Encode/Decode are const.
class Pipeline;

// Called with the partially trained pipeline after each completed stage.
using StageFn = std::function<void(const Pipeline&, const std::string& stage)>;

class Pipeline {
 public:
  // Untrained pipeline with seeded initial weights.
  explicit Pipeline(const CodecConfig& config);
  Pipeline(Pipeline&&) = default;
  Pipeline& operator=(Pipeline&&) = default;

  // Full staged recipe: latent codecs, denoiser (and SQ for mel
  // conditioning), decoder pretraining and matched fine-tuning.
  static Pipeline Train(const CodecConfig& config, const Corpus& corpus,
                        const ProgressFn& progress = {}, TrainReport* report = nullptr,
                        const StageFn& stage_done = {});

  // Retrains the decoder stage on (denoiser output -> clean waveform) pairs,
  // keeping the previous decoder as the pretrained one. Config error for wav
  // output or a Griffin-Lim vocoder.
  std::vector<double> FinetuneDecoder(const Corpus& corpus, long steps, std::uint64_t seed,
                                      const ProgressFn& progress = {});

  static Pipeline Load(const std::filesystem::path& run_dir);
  void Save(const std::filesystem::path& run_dir) const;

  const CodecConfig& config() const { return config_; }
  int config_id() const { return ConfigId(config_.cond_domain, config_.out_domain); }
  const quantizer::SqGeometry& geometry() const;
  bool has_finetuned_decoder() const { return pretrained_decoder_.has_value(); }

  bitstream::Bitstream Encode(const signal::AudioClip& clip) const;
  // sample_steps = 0 uses T_sample. Format error when the stream does not
  // belong to this pipeline.
  signal::AudioClip Decode(const bitstream::Bitstream& stream, std::uint64_t seed,
                           int sample_steps = 0) const;
  DecodeResult DecodeDetailed(const bitstream::Bitstream& stream, std::uint64_t seed,
                              int sample_steps = 0) const;
  // Decoder stage on a generated output; `pretrained` selects the decoder as
  // it was before fine-tuning.
  signal::AudioClip Render(const nn::Tensor& output, bool pretrained = false) const;
  // Dequantized conditioning decoded without the denoiser.
  signal::AudioClip Passthrough(const bitstream::Bitstream& stream) const;

  // Finite-difference gradient checks of every trainable module on small
  // random inputs: (module, max relative error). Parameters are restored.
  std::vector<std::pair<std::string, double>> GradientChecks(std::uint64_t seed,
                                                             std::size_t coordinates = 200);

  // Checksum of the conditioning codec (0 for mel conditioning).
  std::uint64_t ConditioningChecksum() const;
  std::uint64_t DenoiserChecksum() const { return dm_params_.Checksum(); }
  std::uint64_t DecoderChecksum() const;

 private:
  struct Decoder {
    nn::ParameterSet params;
    FrameDecoder net;
  };

  void CheckHeader(const bitstream::Header& header) const;
  nn::Tensor ConditioningNormalized(const bitstream::Bitstream& stream) const;
  nn::Tensor Generate(const nn::Tensor& z, std::uint64_t seed, int sample_steps) const;
  nn::Tensor RawOutput(const nn::Tensor& normalized) const;
  diffusion::Denoiser DenoiserFn() const;
  Decoder CloneDecoder(const Decoder& from) const;

  CodecConfig config_;
  std::optional<LatentCodec> cond_codec_;
  std::optional<LatentCodec> target_codec_;
  nn::ParameterSet dm_params_;
  std::optional<quantizer::ScalarQuantizer> mel_sq_;
  std::optional<nn::ResidualDenoiser> denoiser_;
  Normalizer norm_x_;
  Normalizer norm_z_;
  diffusion::X0ErrorVariance x0_error_variance_;
  std::optional<Decoder> decoder_;
  std::optional<Decoder> pretrained_decoder_;
};

}  // namespace dnsc::codec

#endif  // DNSC_CODEC_PIPELINE_HPP_
