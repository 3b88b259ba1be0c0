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

// Training behaviour at desk scale. Slow: trains a latent codec on one clip,
// an 8 kbps codec and a full mel-to-mel cell.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "codec/config.hpp"
#include "codec/corpus.hpp"
#include "codec/latent_codec.hpp"
#include "codec/networks.hpp"
#include "codec/pipeline.hpp"
#include "doctest.h"
#include "eval/metrics.hpp"
#include "nn/autograd.hpp"
#include "training_util.hpp"

using namespace dnsc;
using namespace dnsc::codec;

namespace {

// Deterministic loss over the whole clip, hard-quantized or bypassing the
// quantizer.
double FullClipLoss(const LatentCodec& c, const signal::AudioClip& clip, bool quantized) {
  const nn::Tensor target = FramedWaveform(clip.samples, FramesFor(clip.size()));
  const auto decoded = c.Decode(quantized ? c.Latents(clip) : c.ContinuousLatents(clip));
  const nn::Tensor out({1, decoded.samples.size()}, decoded.samples);
  return ReconstructionLoss(nn::Constant(out), nn::Constant(target)).value()[0];
}

struct OverfitRun {
  LatentCodec codec{3000, 5};
  double initial = 0.0;
};

const OverfitRun& SingleClipCodec() {
  static const std::unique_ptr<OverfitRun> run = [] {
    auto r = std::make_unique<OverfitRun>();
    const Corpus one{{"one", SyntheticUtterance(0)}};
    r->initial = FullClipLoss(r->codec, one[0].clip, true);
    CodecTrainOptions o;
    o.steps = 5000;
    o.seed = 5;
    TrainLatentCodec(r->codec, one, o);
    return r;
  }();
  return *run;
}

struct MelCell {
  Corpus corpus;
  std::unique_ptr<Pipeline> pipeline;
  std::uint64_t decoder_before = 0;
  std::uint64_t decoder_after = 0;
};

// Default mel-to-mel recipe, with fine-tuning run separately so the
// decoder can be compared across it.
MelCell& MelToMel() {
  static MelCell cell = [] {
    MelCell c;
    CodecConfig config;
    config.finetune_steps = 0;
    c.corpus = LoadCorpus(config.corpus_glob);
    c.pipeline = std::make_unique<Pipeline>(Pipeline::Train(config, c.corpus));
    c.decoder_before = c.pipeline->DecoderChecksum();
    c.pipeline->FinetuneDecoder(c.corpus, CodecConfig{}.finetune_steps, 99);
    c.decoder_after = c.pipeline->DecoderChecksum();
    return c;
  }();
  return cell;
}

double MeanAbsDiff(const nn::Tensor& a, const nn::Tensor& b) {
  REQUIRE(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.data()[i] - b.data()[i]);
  return s / a.size();
}

}  // namespace

TEST_CASE("latent codec overfits a single clip to 10% of its initial loss") {
  const auto& run = SingleClipCodec();
  const double final_loss = FullClipLoss(run.codec, SyntheticUtterance(0), true);
  MESSAGE("initial " << run.initial << " final " << final_loss);
  CHECK(final_loss <= 0.1 * run.initial);
}

TEST_CASE("bypassing the quantizer does not increase reconstruction loss") {
  const auto& run = SingleClipCodec();
  const auto clip = SyntheticUtterance(0);
  const double clean = FullClipLoss(run.codec, clip, false);
  const double quantized = FullClipLoss(run.codec, clip, true);
  MESSAGE("clean " << clean << " quantized " << quantized);
  CHECK(clean <= quantized);
}

TEST_CASE("8 kbps decoder does better from clean latents than from quantized ones") {
  LatentCodec target(8000, 3);
  CHECK(target.geometry().bits_per_frame() == 128);
  const Corpus corpus = LoadCorpus("builtin");
  CodecTrainOptions o;
  o.seed = 3;
  TrainLatentCodec(target, corpus, o);
  double clean = 0.0, quantized = 0.0;
  for (const auto& u : corpus) {
    clean += testing::ClipSiSdr(u.clip, target.Decode(target.ContinuousLatents(u.clip))) / corpus.size();
    quantized += testing::ClipSiSdr(u.clip, target.Decode(target.Latents(u.clip))) / corpus.size();
  }
  MESSAGE("SI-SDR clean " << clean << " dB, quantized " << quantized << " dB");
  CHECK(clean >= quantized);
}

TEST_CASE("mel-to-mel denoiser enhances its conditioning and the untrained one does not") {
  auto& cell = MelToMel();
  const auto trained = testing::MelEnhancement(*cell.pipeline, cell.corpus, 7);
  MESSAGE("trained wins " << trained.wins << "/" << trained.total << " dm " << trained.mean_dm_lsd
                          << " cond " << trained.mean_cond_lsd);
  CHECK(trained.win_fraction() >= 0.9);

  const auto dir = std::filesystem::temp_directory_path() / "dnsc_test_training";
  std::filesystem::remove_all(dir);
  cell.pipeline->Save(dir / "trained");
  const Pipeline untrained = testing::WithUntrainedDenoiser(dir / "trained", dir / "control");
  const auto control = testing::MelEnhancement(untrained, cell.corpus, 7);
  MESSAGE("untrained wins " << control.wins << "/" << control.total);
  CHECK(control.win_fraction() < 0.9);
}

TEST_CASE("swapping the conditioning changes the output far more than resampling") {
  const auto& cell = MelToMel();
  const auto& p = *cell.pipeline;
  const auto a = p.Encode(cell.corpus[0].clip);
  const auto b = p.Encode(cell.corpus[1].clip);
  const auto a1 = p.DecodeDetailed(a, 1).output;
  const auto a2 = p.DecodeDetailed(a, 2).output;
  const auto b1 = p.DecodeDetailed(b, 1).output;
  const double resample = MeanAbsDiff(a1, a2);
  const double swap = MeanAbsDiff(a1, b1);
  MESSAGE("swap " << swap << " resample " << resample);
  CHECK(swap > 10.0 * resample);
}

TEST_CASE("fine-tuning changes the decoder and helps on denoiser outputs") {
  const auto& cell = MelToMel();
  CHECK(cell.decoder_before != cell.decoder_after);
  const auto paired = testing::MatchedVsPretrained(*cell.pipeline, cell.corpus, 1000);
  MESSAGE("mean SI-SDR gain " << paired.mean_difference() << " dB");
  CHECK(paired.mean_difference() >= 0.0);
}

TEST_CASE("fine-tuned decoder regresses by less than 3 dB on clean mels") {
  const auto& cell = MelToMel();
  const auto& p = *cell.pipeline;
  double tuned = 0.0, original = 0.0;
  for (const auto& u : cell.corpus) {
    const nn::Tensor mel = MelTensor(signal::ComputeMelSpectrogram(u.clip));
    tuned += testing::ClipSiSdr(u.clip, p.Render(mel, false)) / cell.corpus.size();
    original += testing::ClipSiSdr(u.clip, p.Render(mel, true)) / cell.corpus.size();
  }
  MESSAGE("clean-input SI-SDR tuned " << tuned << " original " << original);
  CHECK(original - tuned < 3.0);
}
