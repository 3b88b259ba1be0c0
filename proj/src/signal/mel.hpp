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

#ifndef DNSC_SIGNAL_MEL_HPP_
#define DNSC_SIGNAL_MEL_HPP_

#include <filesystem>
#include <memory>
#include <vector>

#include "signal/audio.hpp"

namespace dnsc::signal {

struct MelConfig {
  int sample_rate = kDefaultSampleRate;
  int n_fft = 1024;
  int hop = 256;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;

  bool operator==(const MelConfig&) const = default;
};

// Frames x n_mels natural-log amplitudes, row-major.
struct MelSpectrogram {
  std::size_t frames = 0;
  int n_mels = 80;
  int hop = 256;
  int sample_rate = kDefaultSampleRate;
  std::vector<double> values;

  double& at(std::size_t frame, int band) { return values[frame * n_mels + band]; }
  double at(std::size_t frame, int band) const { return values[frame * n_mels + band]; }
};

// HTK mel scale: 2595 * log10(1 + f / 700).
double MelScale(double f_hz);
double InverseMelScale(double mel);

// Triangular filters with unit peak, centres uniform on the mel scale.
// Row-major n_mels x (n_fft/2 + 1).
class MelFilterbank {
 public:
  explicit MelFilterbank(const MelConfig& config);

  const MelConfig& config() const { return config_; }
  int num_bins() const { return config_.n_fft / 2 + 1; }
  double weight(int band, int bin) const { return weights_[band * num_bins() + bin]; }
  const std::vector<double>& weights() const { return weights_; }
  // Edge/centre frequencies in Hz, n_mels + 2 entries.
  const std::vector<double>& edges_hz() const { return edges_hz_; }

  // Moore-Penrose pseudo-inverse, row-major (n_fft/2 + 1) x n_mels.
  const std::vector<double>& pseudo_inverse() const { return pinv_; }

 private:
  MelConfig config_;
  std::vector<double> weights_;
  std::vector<double> edges_hz_;
  std::vector<double> pinv_;
};

// Shared, immutable filterbank for a configuration.
std::shared_ptr<const MelFilterbank> FilterbankFor(const MelConfig& config);

MelSpectrogram ComputeMelSpectrogram(const AudioClip& clip,
                                     const MelConfig& config = {});

// "MELF" binary: magic, u32 frames, u32 n_mels, row-major f32, little-endian.
void WriteMelf(const MelSpectrogram& mel, const std::filesystem::path& path);
MelSpectrogram ReadMelf(const std::filesystem::path& path,
                        const MelConfig& config = {});

}  // namespace dnsc::signal

#endif  // DNSC_SIGNAL_MEL_HPP_
