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

#ifndef DNSC_CODEC_CONFIG_HPP_
#define DNSC_CODEC_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "diffusion/process.hpp"

namespace dnsc::codec {

enum class Domain { kWav, kMel, kLat };

const char* DomainName(Domain domain);
Domain ParseDomain(const std::string& name);

// Reverse-step noise: the posterior std of the schedule, or that plus the
// measured x0-error term.
enum class SamplerVariance { kPosterior, kCalibrated };

// Phase stage for mel output.
enum class VocoderKind { kLearned, kGriffinLim };

struct CodecConfig {
  Domain cond_domain = Domain::kMel;
  Domain out_domain = Domain::kMel;
  int bitrate_bps = 3000;
  int T_train = 200;
  int T_sample = 50;
  long steps = 5000;
  std::uint64_t seed = 0;
  std::string corpus_glob = "builtin";

  diffusion::Parameterization param = diffusion::Parameterization::kX0;
  double lambda = 1.0;     // SQ reconstruction weight, mel conditioning
  std::size_t width = 0;   // 0: 32 for wav output, 64 otherwise
  std::size_t blocks = 4;
  double lr = 1e-3;
  std::size_t crop_frames = 8;  // wav-output training crop
  SamplerVariance sampler_variance = SamplerVariance::kPosterior;

  long codec_steps = 2000;  // each latent codec
  int target_bps = 8000;    // latent-output target codec
  VocoderKind vocoder = VocoderKind::kLearned;
  long decoder_steps = 2000;  // learned vocoder pretraining
  long finetune_steps = 500;  // 0 keeps the pretrained decoder

  bool operator==(const CodecConfig&) const = default;
};

// Bitstream config id: 0 mel->wav, 1 lat->wav, 2 mel->mel, 3 lat->mel,
// 4 mel->lat, 5 lat->lat.
int ConfigId(Domain cond, Domain out);
std::pair<Domain, Domain> DomainsOf(int config_id);
std::string ConfigLabel(Domain cond, Domain out);  // "mel2wav" style

// Config error for wav conditioning and for out-of-range values.
void Validate(const CodecConfig& config);

// `key = value` lines; '#' starts a comment. Unknown keys are usage errors
// naming the key. The result is validated.
CodecConfig ParseConfig(const std::string& text);
CodecConfig LoadConfig(const std::filesystem::path& path);
// Canonical form: every key, fixed order. ParseConfig(ConfigText(c)) == c.
std::string ConfigText(const CodecConfig& config);

// Applies one key; same errors as ParseConfig.
void SetConfigValue(CodecConfig& config, const std::string& key, const std::string& value);

// The six valid (cond, out) cells in config id order, with defaults.
std::vector<CodecConfig> EnumerateConfigs();

std::size_t EffectiveWidth(const CodecConfig& config);

}  // namespace dnsc::codec

#endif  // DNSC_CODEC_CONFIG_HPP_
