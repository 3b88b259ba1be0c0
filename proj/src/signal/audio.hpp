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

#ifndef DNSC_SIGNAL_AUDIO_HPP_
#define DNSC_SIGNAL_AUDIO_HPP_

#include <filesystem>
#include <vector>

namespace dnsc::signal {

inline constexpr int kDefaultSampleRate = 16000;

// Mono PCM waveform. Samples are nominally in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a RIFF/WAVE PCM16 mono file. Samples are scaled by 1/32768; the
// sample rate is passed through from the header without resampling.
AudioClip LoadWav(const std::filesystem::path& path);
AudioClip ParseWav(const std::vector<std::uint8_t>& bytes);

// Writes PCM16 mono, saturating to [-1, 1].
void SaveWav(const AudioClip& clip, const std::filesystem::path& path);
std::vector<std::uint8_t> SerializeWav(const AudioClip& clip);

double Rms(const std::vector<double>& x);

}  // namespace dnsc::signal

#endif  // DNSC_SIGNAL_AUDIO_HPP_
