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

#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "common/error.hpp"
#include "signal/stft.hpp"

namespace dnsc::eval {

namespace {

constexpr double kPowerFloor = 1e-10;
constexpr int kLsdFft = 1024;
constexpr int kLsdHop = 256;

std::vector<double> Padded(const std::vector<double>& x, std::size_t n) {
  std::vector<double> out(x);
  out.resize(n, 0.0);
  return out;
}

void CheckMelPair(const signal::MelSpectrogram& ref, const signal::MelSpectrogram& test) {
  Require(ref.frames > 0 && ref.n_mels > 0, ErrorKind::kData, "empty mel spectrogram");
  if (ref.frames != test.frames || ref.n_mels != test.n_mels) {
    Fail(ErrorKind::kData, "mel shapes differ: " + std::to_string(ref.frames) + "x" +
                               std::to_string(ref.n_mels) + " vs " + std::to_string(test.frames) +
                               "x" + std::to_string(test.n_mels));
  }
}

}  // namespace

double Lsd(const signal::AudioClip& ref, const signal::AudioClip& test) {
  Require(!ref.samples.empty() && !test.samples.empty(), ErrorKind::kData, "LSD of an empty clip");
  Require(ref.sample_rate == test.sample_rate, ErrorKind::kData, "LSD clips differ in sample rate");
  const std::size_t n = std::max(ref.size(), test.size());
  const auto a = signal::Stft(Padded(ref.samples, n), kLsdFft, kLsdHop, signal::Window::kHann);
  const auto b = signal::Stft(Padded(test.samples, n), kLsdFft, kLsdHop, signal::Window::kHann);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    const double pa = std::max(std::norm(a.bins[i]), kPowerFloor);
    const double pb = std::max(std::norm(b.bins[i]), kPowerFloor);
    const double d = 10.0 * std::log10(pa / pb);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.bins.size()));
}

double MelLsd(const signal::MelSpectrogram& ref, const signal::MelSpectrogram& test) {
  CheckMelPair(ref, test);
  const double scale = 20.0 / std::numbers::ln10;
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.values.size(); ++i) {
    const double d = scale * (ref.values[i] - test.values[i]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(ref.values.size()));
}

double SiSdr(std::span<const double> ref, std::span<const double> test) {
  const std::size_t n = std::max(ref.size(), test.size());
  auto at = [](std::span<const double> x, std::size_t i) { return i < x.size() ? x[i] : 0.0; };
  double rr = 0.0, tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rr += at(ref, i) * at(ref, i);
    tr += at(test, i) * at(ref, i);
  }
  Require(rr > 0.0, ErrorKind::kData, "SI-SDR reference is silent");
  const double alpha = tr / rr;
  double proj = 0.0, resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = alpha * at(ref, i);
    const double e = at(test, i) - p;
    proj += p * p;
    resid += e * e;
  }
  if (proj == 0.0) return -kSiSdrCap;
  if (resid == 0.0) return kSiSdrCap;
  return std::clamp(10.0 * std::log10(proj / resid), -kSiSdrCap, kSiSdrCap);
}

double Mcd(const signal::MelSpectrogram& ref, const signal::MelSpectrogram& test, int n_coeffs) {
  CheckMelPair(ref, test);
  const std::size_t m = ref.n_mels;
  Require(n_coeffs >= 1 && static_cast<std::size_t>(n_coeffs) < m, ErrorKind::kConfig,
          "cepstral coefficient count must be in [1, n_mels)");
  // Orthonormal DCT-II rows 1..n_coeffs.
  std::vector<double> basis(n_coeffs * m);
  const double norm = std::sqrt(2.0 / m);
  for (int k = 1; k <= n_coeffs; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      basis[(k - 1) * m + i] = norm * std::cos(std::numbers::pi * k * (i + 0.5) / m);
    }
  }
  double total = 0.0;
  for (std::size_t f = 0; f < ref.frames; ++f) {
    double dist = 0.0;
    for (int k = 0; k < n_coeffs; ++k) {
      double c = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        c += basis[k * m + i] * (ref.values[f * m + i] - test.values[f * m + i]);
      }
      dist += c * c;
    }
    total += std::sqrt(dist);
  }
  return 10.0 * std::numbers::sqrt2 / std::numbers::ln10 * total / static_cast<double>(ref.frames);
}

Interval BootstrapMean(std::span<const double> values, int resamples, std::uint64_t seed) {
  Require(!values.empty(), ErrorKind::kData, "bootstrap of an empty sample");
  Require(resamples > 0, ErrorKind::kConfig, "bootstrap needs at least one resample");
  Interval out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> means(resamples);
  for (double& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[pick(rng)];
    m = s / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    const double pos = q * (resamples - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, means.size() - 1);
    return means[lo] + (pos - lo) * (means[hi] - means[lo]);
  };
  out.lower = quantile(0.025);
  out.upper = quantile(0.975);
  return out;
}

}  // namespace dnsc::eval
