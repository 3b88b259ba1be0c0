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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "eval/metrics.hpp"
#include "test_util.hpp"

using namespace dnsc;
using namespace dnsc::eval;
using dnsc::testing::ThrownKind;

namespace {

signal::AudioClip Noise(std::size_t n, std::uint64_t seed, double scale = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  signal::AudioClip c;
  c.samples.resize(n);
  for (double& v : c.samples) v = g(rng);
  return c;
}

signal::MelSpectrogram RandomMel(std::size_t frames, int n_mels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(-4.0, 2.0);
  signal::MelSpectrogram m;
  m.frames = frames;
  m.n_mels = n_mels;
  m.values.resize(frames * n_mels);
  for (double& v : m.values) v = g(rng);
  return m;
}

}  // namespace

TEST_CASE("LSD identities") {
  const auto x = Noise(16000, 1);
  CHECK(Lsd(x, x) == 0.0);
  auto twice = x;
  for (double& v : twice.samples) v *= 2.0;
  CHECK(Lsd(x, twice) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
  signal::AudioClip silence;
  silence.samples.assign(16000, 0.0);
  const double floor_value = Lsd(x, silence);
  CHECK(std::isfinite(floor_value));
  CHECK(floor_value > 50.0);
  const auto y = Noise(12000, 2);
  CHECK(Lsd(x, y) > 0.0);
  CHECK(Lsd(x, y) == doctest::Approx(Lsd(y, x)));
  CHECK(ThrownKind([&] { Lsd(signal::AudioClip{}, x); }) == ErrorKind::kData);
}

TEST_CASE("mel LSD is dB of the amplitude ratio") {
  const auto a = RandomMel(10, 80, 3);
  auto b = a;
  for (double& v : b.values) v += std::log(2.0);
  CHECK(MelLsd(a, a) == 0.0);
  CHECK(MelLsd(a, b) == doctest::Approx(20.0 * std::log10(2.0)));
}

TEST_CASE("SI-SDR") {
  const auto ref = Noise(4000, 4).samples;
  std::vector<double> scaled(ref);
  for (double& v : scaled) v *= -3.5;
  CHECK(SiSdr(ref, scaled) == kSiSdrCap);
  CHECK(SiSdr(ref, ref) == kSiSdrCap);

  // Orthogonal pair: alternating-sign halves.
  const std::vector<double> e1{1, 1, 1, 1};
  const std::vector<double> e2{1, -1, 1, -1};
  CHECK(SiSdr(e1, e2) == -kSiSdrCap);

  // Residual orthogonal to ref with a tenth of the projection power: 10 dB.
  auto noise = Noise(4000, 5).samples;
  double nr = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    nr += noise[i] * ref[i];
    rr += ref[i] * ref[i];
  }
  double nn = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    noise[i] -= nr / rr * ref[i];
    nn += noise[i] * noise[i];
  }
  const double gain = 0.7;
  const double k = std::sqrt(gain * gain * rr / 10.0 / nn);
  std::vector<double> test(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) test[i] = gain * ref[i] + k * noise[i];
  CHECK(SiSdr(ref, test) == doctest::Approx(10.0).epsilon(1e-9));
  std::vector<double> rescaled(test);
  for (double& v : rescaled) v *= 123.0;
  CHECK(SiSdr(ref, rescaled) == doctest::Approx(SiSdr(ref, test)).epsilon(1e-12));

  const std::vector<double> zeros(10, 0.0);
  CHECK(ThrownKind([&] { SiSdr(zeros, e1); }) == ErrorKind::kData);
}

TEST_CASE("MCD") {
  const auto a = RandomMel(12, 80, 6);
  CHECK(Mcd(a, a) == 0.0);
  auto shifted = a;
  for (double& v : shifted.values) v += 0.37;
  CHECK(Mcd(a, shifted) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

  // One frame of 4 bands, 2 coefficients, brute-force DCT.
  signal::MelSpectrogram r, t;
  r.frames = t.frames = 1;
  r.n_mels = t.n_mels = 4;
  r.values = {0.0, 1.0, -2.0, 0.5};
  t.values = {0.3, 0.2, -1.0, 0.0};
  double dist = 0.0;
  for (int k = 1; k <= 2; ++k) {
    double c = 0.0;
    for (int i = 0; i < 4; ++i) {
      c += std::sqrt(0.5) * std::cos(std::numbers::pi * k * (2 * i + 1) / 8.0) *
           (r.values[i] - t.values[i]);
    }
    dist += c * c;
  }
  CHECK(Mcd(r, t, 2) == doctest::Approx(10.0 * std::sqrt(2.0) / std::log(10.0) * std::sqrt(dist)));

  auto shorter = RandomMel(11, 80, 7);
  CHECK(ThrownKind([&] { Mcd(a, shorter); }) == ErrorKind::kData);
}

TEST_CASE("bootstrap interval") {
  const std::vector<double> same(20, 3.0);
  const Interval s = BootstrapMean(same, 1000, 1);
  CHECK(s.mean == 3.0);
  CHECK(s.lower == 3.0);
  CHECK(s.upper == 3.0);
  std::vector<double> v;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(1.0, 1.0);
  for (int i = 0; i < 400; ++i) v.push_back(g(rng));
  const Interval ci = BootstrapMean(v, 1000, 3);
  CHECK(ci.lower < ci.mean);
  CHECK(ci.mean < ci.upper);
  // About 1.96 standard errors each side.
  CHECK(ci.upper - ci.lower == doctest::Approx(2 * 1.96 / 20.0).epsilon(0.2));
  const Interval again = BootstrapMean(v, 1000, 3);
  CHECK(again.lower == ci.lower);
}
