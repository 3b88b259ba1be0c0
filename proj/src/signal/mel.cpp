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

#include "signal/mel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "signal/stft.hpp"

namespace dnsc::signal {

double MelScale(double f_hz) {
  Require(f_hz >= 0.0, ErrorKind::kDomain, "negative frequency");
  return 2595.0 * std::log10(1.0 + f_hz / 700.0);
}

double InverseMelScale(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const MelConfig& config) : config_(config) {
  Require(config.n_mels > 0, ErrorKind::kConfig, "n_mels must be positive");
  Require(config.n_mels <= config.n_fft / 2, ErrorKind::kConfig,
          "n_mels must not exceed n_fft/2");
  Require(config.fmax <= config.sample_rate / 2.0, ErrorKind::kConfig,
          "fmax exceeds Nyquist");
  Require(config.fmin >= 0.0 && config.fmin < config.fmax, ErrorKind::kConfig,
          "need 0 <= fmin < fmax");

  const int n_mels = config.n_mels;
  const double mel_lo = MelScale(config.fmin);
  const double mel_hi = MelScale(config.fmax);
  edges_hz_.resize(static_cast<std::size_t>(n_mels + 2));
  for (int i = 0; i < n_mels + 2; ++i) {
    edges_hz_[i] = InverseMelScale(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
  }

  const int bins = num_bins();
  weights_.assign(static_cast<std::size_t>(n_mels * bins), 0.0);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges_hz_[m];
    const double centre = edges_hz_[m + 1];
    const double hi = edges_hz_[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * config.sample_rate / config.n_fft;
      const double rise = (f - lo) / (centre - lo);
      const double fall = (hi - f) / (hi - centre);
      weights_[m * bins + k] = std::max(0.0, std::min(rise, fall));
    }
  }

  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMatrix> fb(weights_.data(), n_mels, bins);
  const RowMatrix pinv = fb.completeOrthogonalDecomposition().pseudoInverse();
  pinv_.assign(pinv.data(), pinv.data() + pinv.size());
}

std::shared_ptr<const MelFilterbank> FilterbankFor(const MelConfig& config) {
  using Key = std::tuple<int, int, int, double, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const MelFilterbank>> cache;
  const Key key{config.sample_rate, config.n_fft, config.n_mels, config.fmin, config.fmax};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto fb = std::make_shared<const MelFilterbank>(config);
  cache.emplace(key, fb);
  return fb;
}

MelSpectrogram ComputeMelSpectrogram(const AudioClip& clip, const MelConfig& config) {
  const auto fb = FilterbankFor(config);
  const Spectrogram spec = Stft(clip.samples, config.n_fft, config.hop, Window::kHann);

  MelSpectrogram mel;
  mel.frames = spec.frames;
  mel.n_mels = config.n_mels;
  mel.hop = config.hop;
  mel.sample_rate = config.sample_rate;
  mel.values.assign(mel.frames * static_cast<std::size_t>(config.n_mels), 0.0);

  const int bins = fb->num_bins();
  const double log_floor = std::log(config.log_floor);
  std::vector<double> mag(static_cast<std::size_t>(bins));
  for (std::size_t f = 0; f < spec.frames; ++f) {
    for (int k = 0; k < bins; ++k) mag[k] = std::abs(spec.at(f, k));
    for (int m = 0; m < config.n_mels; ++m) {
      double acc = 0.0;
      for (int k = 0; k < bins; ++k) acc += fb->weight(m, k) * mag[k];
      mel.at(f, m) = acc > config.log_floor ? std::log(acc) : log_floor;
    }
  }
  return mel;
}

void WriteMelf(const MelSpectrogram& mel, const std::filesystem::path& path) {
  ByteWriter out;
  out.Tag("MELF");
  out.U32(static_cast<std::uint32_t>(mel.frames));
  out.U32(static_cast<std::uint32_t>(mel.n_mels));
  for (double v : mel.values) out.F32(static_cast<float>(v));
  WriteFileBytes(path, out.bytes());
}

MelSpectrogram ReadMelf(const std::filesystem::path& path, const MelConfig& config) {
  const auto bytes = ReadFileBytes(path);
  ByteReader in(bytes);
  if (in.remaining() < 12 || in.String(4) != "MELF") {
    Fail(ErrorKind::kFormat, "not a MELF file: " + path.string());
  }
  MelSpectrogram mel;
  mel.frames = in.U32();
  mel.n_mels = static_cast<int>(in.U32());
  mel.hop = config.hop;
  mel.sample_rate = config.sample_rate;
  const std::size_t count = mel.frames * static_cast<std::size_t>(mel.n_mels);
  if (in.remaining() != count * 4) {
    Fail(ErrorKind::kFormat, "MELF payload size does not match header");
  }
  mel.values.resize(count);
  for (double& v : mel.values) v = in.F32();
  return mel;
}

}  // namespace dnsc::signal
