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

#include "signal/vocoder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "common/error.hpp"
#include "signal/stft.hpp"

namespace dnsc::signal {

AudioClip PhaseReconstruct(const MelSpectrogram& mel, int iterations,
                           std::uint64_t seed, const MelConfig& config) {
  Require(mel.n_mels == config.n_mels, ErrorKind::kConfig,
          "mel band count does not match the analysis configuration");
  Require(mel.values.size() == mel.frames * static_cast<std::size_t>(mel.n_mels),
          ErrorKind::kShape, "mel value count does not match frames x bands");
  Require(iterations >= 0, ErrorKind::kConfig, "iterations must be >= 0");

  const auto fb = FilterbankFor(config);
  const int bins = fb->num_bins();
  const int n_mels = config.n_mels;
  const std::vector<double>& pinv = fb->pseudo_inverse();

  // Linear magnitudes: clamp(pinv * exp(mel), 0).
  std::vector<double> magnitude(mel.frames * static_cast<std::size_t>(bins));
  std::vector<double> amp(static_cast<std::size_t>(n_mels));
  for (std::size_t f = 0; f < mel.frames; ++f) {
    for (int m = 0; m < n_mels; ++m) amp[m] = std::exp(mel.at(f, m));
    for (int k = 0; k < bins; ++k) {
      double acc = 0.0;
      for (int m = 0; m < n_mels; ++m) acc += pinv[k * n_mels + m] * amp[m];
      magnitude[f * bins + k] = std::max(acc, 0.0);
    }
  }

  Spectrogram spec;
  spec.n_fft = config.n_fft;
  spec.hop = config.hop;
  spec.frames = mel.frames;
  spec.bins.resize(magnitude.size());
  if (iterations == 0) {
    for (std::size_t i = 0; i < magnitude.size(); ++i) spec.bins[i] = magnitude[i];
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    for (std::size_t i = 0; i < magnitude.size(); ++i) {
      spec.bins[i] = std::polar(magnitude[i], phase(rng));
    }
  }

  const auto length = static_cast<std::ptrdiff_t>(mel.frames * config.hop);
  for (int it = 0; it < iterations; ++it) {
    const std::vector<double> x = Istft(spec, Window::kHann, length);
    const Spectrogram rebuilt = Stft(x, config.n_fft, config.hop, Window::kHann);
    for (std::size_t i = 0; i < magnitude.size(); ++i) {
      const double r = std::abs(rebuilt.bins[i]);
      spec.bins[i] = r > 1e-12 ? rebuilt.bins[i] * (magnitude[i] / r)
                               : std::complex<double>(magnitude[i], 0.0);
    }
  }

  AudioClip clip;
  clip.sample_rate = config.sample_rate;
  clip.samples = Istft(spec, Window::kHann, length);
  return clip;
}

Vocoder GriffinLimVocoder(int iterations, std::uint64_t seed, const MelConfig& config) {
  return [=](const MelSpectrogram& mel) {
    return PhaseReconstruct(mel, iterations, seed, config);
  };
}

}  // namespace dnsc::signal
