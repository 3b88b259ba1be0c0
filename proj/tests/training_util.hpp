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

// Shared measurements for the slow training tests and the acceptance run.

#ifndef DNSC_TESTS_TRAINING_UTIL_HPP_
#define DNSC_TESTS_TRAINING_UTIL_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "codec/config.hpp"
#include "codec/corpus.hpp"
#include "codec/pipeline.hpp"
#include "eval/metrics.hpp"
#include "nn/checkpoint.hpp"
#include "signal/mel.hpp"

namespace dnsc::testing {

struct EnhancementTally {
  int wins = 0;
  int total = 0;
  double mean_dm_lsd = 0.0;
  double mean_cond_lsd = 0.0;
  double win_fraction() const { return total ? static_cast<double>(wins) / total : 0.0; }
};

// Mel-domain LSD of the generated and the dequantized conditioning mels
// against the clean mel, per utterance. Mel output and mel conditioning only.
inline EnhancementTally MelEnhancement(const codec::Pipeline& p, const codec::Corpus& corpus,
                                       std::uint64_t seed) {
  EnhancementTally t;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto r = p.DecodeDetailed(p.Encode(corpus[i].clip), seed + i);
    const auto clean = signal::ComputeMelSpectrogram(corpus[i].clip);
    const double dm = eval::MelLsd(clean, codec::TensorToMel(r.output));
    const double cond = eval::MelLsd(clean, codec::TensorToMel(r.conditioning));
    t.wins += dm < cond;
    t.mean_dm_lsd += dm / corpus.size();
    t.mean_cond_lsd += cond / corpus.size();
    ++t.total;
  }
  return t;
}

struct PairedSiSdr {
  std::vector<double> matched;
  std::vector<double> pretrained;
  double mean_difference() const {
    double s = 0.0;
    for (std::size_t i = 0; i < matched.size(); ++i) s += matched[i] - pretrained[i];
    return matched.empty() ? 0.0 : s / matched.size();
  }
};

inline double ClipSiSdr(const signal::AudioClip& ref, signal::AudioClip test) {
  test.samples.resize(ref.size());
  return eval::SiSdr(ref.samples, test.samples);
}

// Fine-tuned vs pretrained decoder on the same denoiser outputs.
inline PairedSiSdr MatchedVsPretrained(const codec::Pipeline& p, const codec::Corpus& corpus,
                                       std::uint64_t seed) {
  PairedSiSdr out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto r = p.DecodeDetailed(p.Encode(corpus[i].clip), seed + i);
    out.matched.push_back(ClipSiSdr(corpus[i].clip, r.audio));
    out.pretrained.push_back(ClipSiSdr(corpus[i].clip, p.Render(r.output, true)));
  }
  return out;
}

// Copy of a saved run whose denoiser weights are reset to their seeded
// initial values; the quantizer, normalizers and decoder stay trained.
inline codec::Pipeline WithUntrainedDenoiser(const std::filesystem::path& trained_dir,
                                             const std::filesystem::path& scratch_dir) {
  namespace fs = std::filesystem;
  fs::remove_all(scratch_dir);
  fs::create_directories(scratch_dir);
  const fs::path fresh_dir = scratch_dir / "fresh";
  const fs::path mixed_dir = scratch_dir / "mixed";
  codec::Pipeline(codec::LoadConfig(trained_dir / "config.txt")).Save(fresh_dir);
  fs::copy(trained_dir, mixed_dir, fs::copy_options::recursive);
  const auto fresh = nn::LoadCheckpoint(fresh_dir / "denoiser.dnsm");
  auto mixed = nn::LoadCheckpoint(mixed_dir / "denoiser.dnsm");
  for (auto& [name, tensor] : mixed) {
    if (name.rfind("dm.", 0) == 0) tensor = nn::FindTensor(fresh, name);
  }
  nn::SaveCheckpoint(mixed, mixed_dir / "denoiser.dnsm");
  return codec::Pipeline::Load(mixed_dir);
}

}  // namespace dnsc::testing

#endif  // DNSC_TESTS_TRAINING_UTIL_HPP_
