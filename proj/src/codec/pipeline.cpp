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

#include "codec/pipeline.hpp"

#include <cmath>
#include <fstream>

#include "common/error.hpp"
#include "diffusion/schedule.hpp"
#include "nn/checkpoint.hpp"
#include "nn/optim.hpp"
#include "quantizer/bitrate.hpp"
#include "signal/vocoder.hpp"

namespace dnsc::codec {

namespace {

constexpr int kGriffinLimIterations = 32;
constexpr int kCalibrationDraws = 64;

std::uint64_t SubSeed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum SeedTag : std::uint64_t {
  kCondCodecSeed = 1,
  kTargetCodecSeed,
  kDenoiserSeed,
  kDecoderSeed,
  kDenoiserTrainSeed,
  kCalibrationSeed,
  kCondTrainSeed,
  kTargetTrainSeed,
  kDecoderTrainSeed,
  kFinetuneSampleSeed,
};

nn::Tensor NormTensor(const Normalizer& n) { return nn::Tensor({2}, {n.mean, n.std}); }

Normalizer NormFrom(const nn::Tensor& t) {
  Require(t.size() == 2 && t[1] > 0.0, ErrorKind::kFormat, "bad normalizer record");
  return {t[0], t[1]};
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) Fail(ErrorKind::kIo, "cannot write " + path.string());
  f << text;
  if (!f) Fail(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace

Normalizer Normalizer::Fit(const std::vector<nn::Tensor>& data) {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  for (const auto& t : data) {
    for (double v : t.data()) {
      sum += v;
      sum_sq += v * v;
    }
    n += t.size();
  }
  Require(n > 0, ErrorKind::kData, "cannot fit a normalizer on no data");
  const double mean = sum / n;
  const double var = std::max(sum_sq / n - mean * mean, 0.0);
  return {mean, std::max(std::sqrt(var), 1e-8)};
}

nn::Tensor Normalizer::Apply(const nn::Tensor& x) const {
  nn::Tensor out = x;
  for (double& v : out.data()) v = (v - mean) / std;
  return out;
}

nn::Tensor Normalizer::Invert(const nn::Tensor& x) const {
  nn::Tensor out = x;
  for (double& v : out.data()) v = v * std + mean;
  return out;
}

nn::Tensor MelTensor(const signal::MelSpectrogram& mel) {
  nn::Tensor out({static_cast<std::size_t>(mel.n_mels), mel.frames});
  for (std::size_t f = 0; f < mel.frames; ++f) {
    for (int b = 0; b < mel.n_mels; ++b) out.at(b, f) = mel.at(f, b);
  }
  return out;
}

signal::MelSpectrogram TensorToMel(const nn::Tensor& x) {
  signal::MelSpectrogram mel;
  mel.n_mels = static_cast<int>(x.rows());
  mel.frames = x.cols();
  mel.values.resize(x.size());
  for (std::size_t f = 0; f < mel.frames; ++f) {
    for (int b = 0; b < mel.n_mels; ++b) mel.at(f, b) = x.at(b, f);
  }
  return mel;
}

Pipeline::Pipeline(const CodecConfig& config) : config_(config) {
  Validate(config_);
  const std::uint64_t seed = config_.seed;
  if (config_.cond_domain == Domain::kLat) {
    cond_codec_.emplace(config_.bitrate_bps, SubSeed(seed, kCondCodecSeed));
  }
  if (config_.out_domain == Domain::kLat) {
    target_codec_.emplace(config_.target_bps, SubSeed(seed, kTargetCodecSeed));
  }
  nn::Rng rng(SubSeed(seed, kDenoiserSeed));
  if (config_.cond_domain == Domain::kMel) {
    const auto geometry = quantizer::PlanBitrate({config_.bitrate_bps}, kLatentDim);
    mel_sq_.emplace(geometry, dm_params_, "sq.", rng);
  }
  nn::DenoiserSpec spec;
  const bool wav_out = config_.out_domain == Domain::kWav;
  spec.data_channels = wav_out ? 1 : kLatentDim;
  spec.cond_channels = kLatentDim;
  spec.upsample = wav_out ? kHop : 1;
  spec.width = EffectiveWidth(config_);
  spec.blocks = config_.blocks;
  denoiser_.emplace(spec, dm_params_, "dm.", rng);

  nn::Rng dec_rng(SubSeed(seed, kDecoderSeed));
  if (config_.out_domain == Domain::kMel && config_.vocoder == VocoderKind::kLearned) {
    decoder_.emplace();
    decoder_->net = FrameDecoder(decoder_->params, "voc.", kLatentDim, dec_rng);
  } else if (config_.out_domain == Domain::kLat) {
    decoder_.emplace();
    decoder_->net = FrameDecoder(decoder_->params, "dec.", kLatentDim, dec_rng);
  }
}

const quantizer::SqGeometry& Pipeline::geometry() const {
  return mel_sq_ ? mel_sq_->geometry() : cond_codec_->geometry();
}

std::uint64_t Pipeline::ConditioningChecksum() const {
  return cond_codec_ ? cond_codec_->params().Checksum() : 0;
}

std::uint64_t Pipeline::DecoderChecksum() const {
  return decoder_ ? decoder_->params.Checksum() : 0;
}

diffusion::Denoiser Pipeline::DenoiserFn() const {
  const nn::ResidualDenoiser* net = &*denoiser_;
  return [net](const nn::Var& x_t, const nn::Var& z, const diffusion::TimeStep& step) {
    return net->Forward(x_t, z, step.normalized);
  };
}

Pipeline::Decoder Pipeline::CloneDecoder(const Decoder& from) const {
  Decoder out;
  nn::Rng rng(0);
  const std::string prefix = config_.out_domain == Domain::kMel ? "voc." : "dec.";
  out.net = FrameDecoder(out.params, prefix, kLatentDim, rng);
  out.params.Load(from.params.Export());
  return out;
}

Pipeline Pipeline::Train(const CodecConfig& config, const Corpus& corpus,
                         const ProgressFn& progress, TrainReport* report,
                         const StageFn& stage_done) {
  Require(!corpus.empty(), ErrorKind::kConfig, "empty corpus");
  Pipeline p(config);
  TrainReport local;
  TrainReport& rep = report ? *report : local;
  const std::uint64_t seed = config.seed;

  // Stage 1: latent codecs.
  if (p.cond_codec_) {
    CodecTrainOptions o{.steps = config.codec_steps, .seed = SubSeed(seed, kCondTrainSeed),
                        .progress = progress};
    rep.cond_codec_loss = TrainLatentCodec(*p.cond_codec_, corpus, o);
  }
  if (p.target_codec_) {
    CodecTrainOptions o{.steps = config.codec_steps, .seed = SubSeed(seed, kTargetTrainSeed),
                        .progress = progress};
    rep.target_codec_loss = TrainLatentCodec(*p.target_codec_, corpus, o);
  }
  if (stage_done && (p.cond_codec_ || p.target_codec_)) stage_done(p, "latent_codec");

  // Per-utterance tensors in the raw domains.
  std::vector<nn::Tensor> mel, x_raw, z_raw;
  for (const auto& u : corpus) {
    const std::size_t frames = FramesFor(u.clip.size());
    mel.push_back(MelTensor(signal::ComputeMelSpectrogram(u.clip)));
    Require(mel.back().cols() == frames, ErrorKind::kStructure, "mel frame count mismatch");
    switch (config.out_domain) {
      case Domain::kWav: x_raw.push_back(FramedWaveform(u.clip.samples, frames)); break;
      case Domain::kMel: x_raw.push_back(mel.back()); break;
      case Domain::kLat: x_raw.push_back(p.target_codec_->ContinuousLatents(u.clip)); break;
    }
    z_raw.push_back(p.cond_codec_ ? p.cond_codec_->Latents(u.clip) : mel.back());
  }
  p.norm_x_ = Normalizer::Fit(x_raw);
  p.norm_z_ = Normalizer::Fit(z_raw);
  std::vector<nn::Tensor> x_norm, z_norm;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    x_norm.push_back(p.norm_x_.Apply(x_raw[i]));
    z_norm.push_back(p.norm_z_.Apply(z_raw[i]));
  }

  // Stage 2: denoiser, end to end with the SQ for mel conditioning.
  rep.frozen_checksum_before = p.ConditioningChecksum();
  {
    const diffusion::NoiseSchedule schedule = diffusion::MakeSchedule(config.T_train);
    const diffusion::Denoiser den = p.DenoiserFn();
    const bool wav_out = config.out_domain == Domain::kWav;
    nn::Rng rng(SubSeed(seed, kDenoiserTrainSeed));
    nn::Adam adam({.lr = config.lr, .clip_norm = 1.0});
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (long step = 0; step < config.steps; ++step) {
      const std::size_t utt = std::uniform_int_distribution<std::size_t>(0, corpus.size() - 1)(rng);
      const std::size_t total = z_norm[utt].cols();
      const std::size_t frames = wav_out ? std::min(config.crop_frames, total) : total;
      const std::size_t first = std::uniform_int_distribution<std::size_t>(0, total - frames)(rng);
      const std::size_t up = wav_out ? kHop : 1;
      const nn::Tensor x0 = SliceColumns(x_norm[utt], first * up, frames * up);
      const nn::Tensor z_clean = SliceColumns(z_norm[utt], first, frames);
      const int t = std::uniform_int_distribution<int>(1, config.T_train)(rng);
      nn::Tensor eps(x0.shape());
      for (double& v : eps.data()) v = gauss(rng);

      p.dm_params_.ZeroGrad();
      nn::Var loss;
      if (p.mel_sq_) {
        const nn::Var target = nn::Constant(z_clean);
        const nn::Var z = p.mel_sq_->NoisyForward(target, rng);
        loss = diffusion::TrainingLoss(den, x0, z, t, eps, schedule, config.param);
        if (config.lambda > 0.0) {
          loss = nn::Add(loss, nn::Scale(ReconstructionLoss(z, target), config.lambda));
        }
      } else {
        loss = diffusion::TrainingLoss(den, x0, nn::Constant(z_clean), t, eps, schedule,
                                       config.param);
      }
      const double value = loss.value()[0];
      if (!std::isfinite(value)) {
        Fail(ErrorKind::kTraining, "denoiser diverged at step " + std::to_string(step));
      }
      nn::Backward(loss);
      adam.Step(p.dm_params_);
      rep.denoiser_loss.push_back(value);
      if (progress) progress("denoiser", step, value);
    }
  }
  rep.frozen_checksum_after = p.ConditioningChecksum();
  Require(rep.frozen_checksum_before == rep.frozen_checksum_after, ErrorKind::kStructure,
          "conditioning codec changed during denoiser training");

  if (config.sampler_variance == SamplerVariance::kCalibrated) {
    const diffusion::NoiseSchedule schedule = diffusion::MakeSchedule(config.T_sample);
    const bool wav_out = config.out_domain == Domain::kWav;
    const diffusion::DataDraw draw = [&](nn::Rng& rng) {
      const std::size_t utt = std::uniform_int_distribution<std::size_t>(0, corpus.size() - 1)(rng);
      const std::size_t total = z_norm[utt].cols();
      const std::size_t frames = wav_out ? std::min(config.crop_frames, total) : total;
      const std::size_t first = std::uniform_int_distribution<std::size_t>(0, total - frames)(rng);
      const std::size_t up = wav_out ? kHop : 1;
      nn::Tensor z = SliceColumns(z_norm[utt], first, frames);
      if (p.mel_sq_) {
        z = p.mel_sq_->Dequantize(p.mel_sq_->Quantize(z));
      }
      return std::make_pair(SliceColumns(x_norm[utt], first * up, frames * up), nn::Constant(z));
    };
    p.x0_error_variance_ = diffusion::CalibrateX0ErrorVariance(
        p.DenoiserFn(), schedule, config.param, draw, kCalibrationDraws,
        SubSeed(seed, kCalibrationSeed));
  }
  if (stage_done) stage_done(p, "denoiser");

  // Stage 3: decoder stage.
  if (config.out_domain == Domain::kMel && config.vocoder == VocoderKind::kLearned) {
    CodecTrainOptions o{.steps = config.decoder_steps, .seed = SubSeed(seed, kDecoderTrainSeed),
                        .progress = progress};
    rep.decoder_loss = TrainFrameDecoder(p.decoder_->net, p.decoder_->params, x_norm, corpus, o);
  } else if (config.out_domain == Domain::kLat) {
    // Starts as the target codec's own decoder ("dec." names match).
    p.decoder_->params.Load(p.target_codec_->Export(), true);
  }
  if (stage_done && p.decoder_) stage_done(p, "decoder");

  if (p.decoder_ && config.finetune_steps > 0) {
    rep.finetune_loss =
        p.FinetuneDecoder(corpus, config.finetune_steps, SubSeed(seed, kFinetuneSampleSeed), progress);
    if (stage_done) stage_done(p, "finetune");
  }
  return p;
}

std::vector<double> Pipeline::FinetuneDecoder(const Corpus& corpus, long steps, std::uint64_t seed,
                                              const ProgressFn& progress) {
  Require(config_.out_domain != Domain::kWav, ErrorKind::kConfig,
          "wav output has no decoder stage to fine-tune");
  Require(decoder_.has_value(), ErrorKind::kConfig,
          "the Griffin-Lim vocoder has no trainable decoder");
  // Matched inputs: what the denoiser produces from the coded stream.
  std::vector<nn::Tensor> features;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto stream = Encode(corpus[i].clip);
    const nn::Tensor generated = Generate(ConditioningNormalized(stream), SubSeed(seed, i), 0);
    features.push_back(config_.out_domain == Domain::kMel ? generated : RawOutput(generated));
  }
  if (!pretrained_decoder_) pretrained_decoder_ = CloneDecoder(*decoder_);
  CodecTrainOptions o{.steps = steps, .seed = SubSeed(seed, corpus.size()), .lr = config_.lr * 0.5,
                      .progress = progress};
  ProgressFn relabel;
  if (progress) {
    relabel = [&](const std::string&, long step, double loss) { progress("finetune", step, loss); };
  }
  o.progress = relabel;
  return TrainFrameDecoder(decoder_->net, decoder_->params, features, corpus, o);
}

void Pipeline::CheckHeader(const bitstream::Header& h) const {
  const auto& g = geometry();
  const auto mismatch = [](const std::string& what, long got, long want) {
    Fail(ErrorKind::kFormat, "bitstream " + what + " " + std::to_string(got) +
                                 " does not match this model (" + std::to_string(want) + ")");
  };
  if (h.config_id != config_id()) mismatch("config id", h.config_id, config_id());
  if (h.sample_rate != static_cast<std::uint32_t>(kSampleRate)) mismatch("sample rate", h.sample_rate, kSampleRate);
  if (h.hop != kHop) mismatch("hop", h.hop, static_cast<long>(kHop));
  if (h.code_dim != g.code_dim) mismatch("code dim", h.code_dim, static_cast<long>(g.code_dim));
  if (h.bits_per_dim != g.bits_per_dim()) mismatch("bits per dim", h.bits_per_dim, g.bits_per_dim());
  if (h.target_bps != static_cast<std::uint32_t>(config_.bitrate_bps)) {
    mismatch("bit rate", h.target_bps, config_.bitrate_bps);
  }
}

bitstream::Bitstream Pipeline::Encode(const signal::AudioClip& clip) const {
  Require(clip.sample_rate == kSampleRate, ErrorKind::kUnsupported,
          "input must be 16 kHz, got " + std::to_string(clip.sample_rate) + " Hz");
  Require(!clip.samples.empty(), ErrorKind::kData, "empty clip");
  IndexMatrix indices(0, 0);
  if (mel_sq_) {
    const nn::Tensor mel = MelTensor(signal::ComputeMelSpectrogram(clip));
    indices = mel_sq_->Quantize(norm_z_.Apply(mel));
  } else {
    indices = cond_codec_->Quantize(clip);
  }
  Require(indices.frames == FramesFor(clip.size()), ErrorKind::kStructure,
          "encoder frame count mismatch");
  bitstream::Header h;
  h.config_id = static_cast<std::uint8_t>(config_id());
  h.sample_rate = kSampleRate;
  h.hop = kHop;
  h.bits_per_dim = static_cast<std::uint8_t>(geometry().bits_per_dim());
  h.target_bps = static_cast<std::uint32_t>(config_.bitrate_bps);
  return bitstream::Encode(h, indices);
}

nn::Tensor Pipeline::ConditioningNormalized(const bitstream::Bitstream& stream) const {
  CheckHeader(stream.header);
  const IndexMatrix indices = bitstream::Decode(stream);
  if (mel_sq_) return mel_sq_->Dequantize(indices);
  return norm_z_.Apply(cond_codec_->Dequantize(indices));
}

nn::Tensor Pipeline::Generate(const nn::Tensor& z, std::uint64_t seed, int sample_steps) const {
  const int steps = sample_steps > 0 ? sample_steps : config_.T_sample;
  const diffusion::NoiseSchedule schedule = diffusion::MakeSchedule(steps);
  const diffusion::X0ErrorVariance* x0var = nullptr;
  if (config_.sampler_variance == SamplerVariance::kCalibrated) {
    Require(x0_error_variance_.size() == static_cast<std::size_t>(config_.T_sample) + 1,
            ErrorKind::kStructure, "calibrated sampler variance is missing");
    Require(steps == config_.T_sample, ErrorKind::kConfig,
            "a calibrated sampler only runs at T_sample steps");
    x0var = &x0_error_variance_;
  }
  const auto& spec = denoiser_->spec();
  const nn::Shape shape{spec.data_channels, z.cols() * spec.upsample};
  return diffusion::Sample(DenoiserFn(), nn::Constant(z), schedule, shape, seed, config_.param,
                           x0var);
}

nn::Tensor Pipeline::RawOutput(const nn::Tensor& normalized) const {
  return norm_x_.Invert(normalized);
}

signal::AudioClip Pipeline::Render(const nn::Tensor& output, bool pretrained) const {
  signal::AudioClip clip;
  switch (config_.out_domain) {
    case Domain::kWav:
      clip.samples = output.data();
      return clip;
    case Domain::kMel:
      if (!decoder_) {
        return signal::PhaseReconstruct(TensorToMel(output), kGriffinLimIterations, 0);
      }
      break;
    case Domain::kLat:
      break;
  }
  const Decoder* dec = &*decoder_;
  if (pretrained) {
    Require(pretrained_decoder_.has_value(), ErrorKind::kConfig, "no pretrained decoder is kept");
    dec = &*pretrained_decoder_;
  }
  const nn::Tensor input = config_.out_domain == Domain::kMel ? norm_x_.Apply(output) : output;
  clip.samples = dec->net.Forward(nn::Constant(input)).value().data();
  return clip;
}

DecodeResult Pipeline::DecodeDetailed(const bitstream::Bitstream& stream, std::uint64_t seed,
                                      int sample_steps) const {
  DecodeResult out;
  const nn::Tensor z = ConditioningNormalized(stream);
  out.conditioning = mel_sq_ ? norm_z_.Invert(z) : cond_codec_->Dequantize(bitstream::Decode(stream));
  out.output = RawOutput(Generate(z, seed, sample_steps));
  out.audio = Render(out.output);
  Require(out.audio.size() == stream.header.frames * kHop, ErrorKind::kStructure,
          "decoded length does not match the frame count");
  return out;
}

signal::AudioClip Pipeline::Decode(const bitstream::Bitstream& stream, std::uint64_t seed,
                                   int sample_steps) const {
  return DecodeDetailed(stream, seed, sample_steps).audio;
}

signal::AudioClip Pipeline::Passthrough(const bitstream::Bitstream& stream) const {
  const nn::Tensor z = ConditioningNormalized(stream);
  if (cond_codec_) return cond_codec_->Decode(norm_z_.Invert(z));
  if (config_.out_domain == Domain::kMel && decoder_) {
    const Decoder& dec = pretrained_decoder_ ? *pretrained_decoder_ : *decoder_;
    signal::AudioClip clip;
    clip.samples = dec.net.Forward(nn::Constant(z)).value().data();
    return clip;
  }
  return signal::PhaseReconstruct(TensorToMel(norm_z_.Invert(z)), kGriffinLimIterations, 0);
}

std::vector<std::pair<std::string, double>> Pipeline::GradientChecks(std::uint64_t seed,
                                                                     std::size_t coordinates) {
  nn::Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto random = [&](nn::Shape shape, double scale) {
    nn::Tensor t(std::move(shape));
    for (double& v : t.data()) v = scale * gauss(rng);
    return t;
  };
  const nn::GradCheckOptions options{.max_coordinates = coordinates, .seed = seed};
  // A random linear functional of the output as the scalar loss.
  const auto functional = [](const nn::Var& out, const nn::Tensor& weights) {
    return nn::Sum(nn::Mul(out, nn::Constant(weights)));
  };
  std::vector<std::pair<std::string, double>> results;

  const auto& spec = denoiser_->spec();
  {
    const std::size_t frames = 2;
    const nn::Tensor x = random({spec.data_channels, frames * spec.upsample}, 1.0);
    const nn::Tensor z = random({spec.cond_channels, frames}, 1.0);
    const nn::Tensor w = random(x.shape(), 1.0);
    nn::ParameterSet dm = dm_params_.Filter("dm.");
    results.emplace_back("denoiser", nn::GradCheck(dm, [&] {
      return functional(denoiser_->Forward(nn::Constant(x), nn::Constant(z), 0.37), w);
    }, options));
  }
  if (mel_sq_) {
    const nn::Tensor x = random({kLatentDim, 3}, 0.5);
    const nn::Tensor w = random({kLatentDim, 3}, 1.0);
    nn::ParameterSet sq = dm_params_.Filter("sq.");
    results.emplace_back("mel_quantizer", nn::GradCheck(sq, [&] {
      nn::Rng noise(seed + 1);
      return functional(mel_sq_->NoisyForward(nn::Constant(x), noise), w);
    }, options));
  }
  for (auto* codec : {cond_codec_ ? &*cond_codec_ : nullptr, target_codec_ ? &*target_codec_ : nullptr}) {
    if (codec == nullptr) continue;
    const nn::Tensor wav = random({1, kHop}, 0.1);
    const nn::Tensor w = random({1, kHop}, 1.0);
    results.emplace_back("latent_codec" + std::to_string(codec->bitrate_bps()),
                         nn::GradCheck(codec->params(), [&] {
                           nn::Rng noise(seed + 2);
                           return functional(codec->TrainForward(nn::Constant(wav), noise, true), w);
                         }, options));
  }
  if (decoder_) {
    const nn::Tensor in = random({kLatentDim, 1}, 1.0);
    const nn::Tensor w = random({1, kHop}, 1.0);
    results.emplace_back("decoder", nn::GradCheck(decoder_->params, [&] {
      return functional(decoder_->net.Forward(nn::Constant(in)), w);
    }, options));
  }
  return results;
}

void Pipeline::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  WriteText(dir / "config.txt", ConfigText(config_));
  WriteText(dir / "schedule.txt", diffusion::ScheduleText(diffusion::MakeSchedule(config_.T_sample)));
  if (cond_codec_ || target_codec_) {
    nn::NamedTensors codecs;
    if (cond_codec_) nn::AppendPrefixed(codecs, cond_codec_->Export(), "cond.");
    if (target_codec_) nn::AppendPrefixed(codecs, target_codec_->Export(), "target.");
    nn::SaveCheckpoint(codecs, dir / "latent_codec.dnsm");
  }
  nn::NamedTensors dm = dm_params_.Export();
  dm.emplace_back("norm.x", NormTensor(norm_x_));
  dm.emplace_back("norm.z", NormTensor(norm_z_));
  if (!x0_error_variance_.empty()) {
    dm.emplace_back("sampler.x0_error_variance",
                    nn::Tensor({x0_error_variance_.size()}, x0_error_variance_));
  }
  nn::SaveCheckpoint(dm, dir / "denoiser.dnsm");
  if (decoder_) nn::SaveCheckpoint(decoder_->params.Export(), dir / "decoder.dnsm");
  if (pretrained_decoder_) {
    nn::SaveCheckpoint(pretrained_decoder_->params.Export(), dir / "decoder_pretrained.dnsm");
  }
}

Pipeline Pipeline::Load(const std::filesystem::path& dir) {
  Require(std::filesystem::is_directory(dir), ErrorKind::kIo, "no run directory " + dir.string());
  Pipeline p(LoadConfig(dir / "config.txt"));
  if (p.cond_codec_ || p.target_codec_) {
    const nn::NamedTensors codecs = nn::LoadCheckpoint(dir / "latent_codec.dnsm");
    if (p.cond_codec_) p.cond_codec_->Load(nn::WithPrefix(codecs, "cond."));
    if (p.target_codec_) p.target_codec_->Load(nn::WithPrefix(codecs, "target."));
  }
  nn::NamedTensors dm = nn::LoadCheckpoint(dir / "denoiser.dnsm");
  p.norm_x_ = NormFrom(nn::FindTensor(dm, "norm.x"));
  p.norm_z_ = NormFrom(nn::FindTensor(dm, "norm.z"));
  nn::NamedTensors weights;
  for (auto& [name, t] : dm) {
    if (name == "sampler.x0_error_variance") {
      p.x0_error_variance_ = t.data();
    } else if (name.rfind("norm.", 0) != 0) {
      weights.emplace_back(name, std::move(t));
    }
  }
  p.dm_params_.Load(weights);
  if (p.decoder_) {
    p.decoder_->params.Load(nn::LoadCheckpoint(dir / "decoder.dnsm"));
    if (std::filesystem::exists(dir / "decoder_pretrained.dnsm")) {
      p.pretrained_decoder_ = p.CloneDecoder(*p.decoder_);
      p.pretrained_decoder_->params.Load(nn::LoadCheckpoint(dir / "decoder_pretrained.dnsm"));
    }
  }
  return p;
}

}  // namespace dnsc::codec
