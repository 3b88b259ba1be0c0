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

#include "codec/corpus.hpp"

#include <glob.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "common/error.hpp"

namespace dnsc::codec {

namespace {

constexpr int kDefaultBuiltinClips = 16;

// Two-pole resonator, unity gain at DC-ish frequencies is not needed; the
// output is renormalized at the end.
struct Resonator {
  double y1 = 0.0, y2 = 0.0;
  double Step(double x, double freq, double bandwidth) {
    const double r = std::exp(-std::numbers::pi * bandwidth / kSampleRate);
    const double c = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / kSampleRate);
    const double y = (1.0 - r) * x + c * y1 - r * r * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

struct Vowel {
  double f1, f2, f3;
};

constexpr std::array<Vowel, 6> kVowels = {{
    {730, 1090, 2440},  // a
    {270, 2290, 3010},  // i
    {300, 870, 2240},   // u
    {530, 1840, 2480},  // e
    {570, 840, 2410},   // o
    {660, 1720, 2410},  // ae
}};


}  // namespace

signal::AudioClip SyntheticUtterance(int index, std::size_t samples) {
  std::mt19937_64 rng(0x5eed0000ULL + static_cast<std::uint64_t>(index));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);

  // Four syllables per second on average, each voiced or a fricative.
  const int syllables = 3 + static_cast<int>(u(rng) * 3.0);
  struct Syllable {
    std::size_t start, end;
    bool voiced;
    Vowel from, to;
    double fric_center;
  };
  std::vector<Syllable> plan;
  const double slot = static_cast<double>(samples) / syllables;
  for (int s = 0; s < syllables; ++s) {
    Syllable syl;
    const double begin = s * slot + u(rng) * 0.15 * slot;
    const double length = slot * (0.6 + 0.25 * u(rng));
    syl.start = static_cast<std::size_t>(begin);
    syl.end = std::min(samples, static_cast<std::size_t>(begin + length));
    syl.voiced = u(rng) < 0.75;
    syl.from = kVowels[static_cast<std::size_t>(u(rng) * kVowels.size()) % kVowels.size()];
    syl.to = kVowels[static_cast<std::size_t>(u(rng) * kVowels.size()) % kVowels.size()];
    syl.fric_center = 3000.0 + 3000.0 * u(rng);
    plan.push_back(syl);
  }

  const double f0_base = 90.0 + 130.0 * u(rng);
  const double f0_slope = (u(rng) - 0.5) * 40.0;
  const double vibrato = 2.0 + 3.0 * u(rng);

  signal::AudioClip clip;
  clip.sample_rate = kSampleRate;
  clip.samples.assign(samples, 0.0);
  Resonator r1, r2, r3, fr;
  double phase = 0.0;
  double glottal = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double time = static_cast<double>(n) / kSampleRate;
    double value = 0.0;
    for (const Syllable& syl : plan) {
      if (n < syl.start || n >= syl.end) continue;
      const double pos = static_cast<double>(n - syl.start) / (syl.end - syl.start);
      const double env = std::sin(std::numbers::pi * pos);
      if (syl.voiced) {
        const double f0 = f0_base + f0_slope * time + 6.0 * std::sin(2 * std::numbers::pi * vibrato * time);
        phase += f0 / kSampleRate;
        double pulse = 0.0;
        if (phase >= 1.0) {
          phase -= 1.0;
          pulse = 1.0;
        }
        // Leaky integration gives a glottal-like decaying excitation.
        glottal = 0.96 * glottal + pulse;
        const double f1 = syl.from.f1 + (syl.to.f1 - syl.from.f1) * pos;
        const double f2 = syl.from.f2 + (syl.to.f2 - syl.from.f2) * pos;
        const double f3 = syl.from.f3 + (syl.to.f3 - syl.from.f3) * pos;
        const double excitation = glottal - 0.5 + 0.02 * g(rng);
        value += env * (r1.Step(excitation, f1, 80) * 1.0 + r2.Step(excitation, f2, 100) * 0.6 +
                        r3.Step(excitation, f3, 140) * 0.3);
      } else {
        value += env * 0.5 * fr.Step(g(rng), syl.fric_center, 1500);
      }
    }
    clip.samples[n] = value;
  }
  double peak = 0.0;
  for (double v : clip.samples) peak = std::max(peak, std::abs(v));
  const double gain = peak > 0.0 ? 0.5 / peak : 0.0;
  for (double& v : clip.samples) v = v * gain + 1e-3 * g(rng);
  return clip;
}

std::vector<std::string> GlobSorted(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

Corpus LoadCorpus(const std::string& spec) {
  Corpus corpus;
  if (spec == "builtin" || spec.rfind("builtin:", 0) == 0) {
    int count = kDefaultBuiltinClips;
    if (spec.size() > 8) {
      try {
        count = std::stoi(spec.substr(8));
      } catch (const std::exception&) {
        Fail(ErrorKind::kConfig, "bad builtin corpus size in '" + spec + "'");
      }
    }
    Require(count >= 1, ErrorKind::kConfig, "builtin corpus needs at least one clip");
    for (int i = 0; i < count; ++i) {
      char id[32];
      std::snprintf(id, sizeof(id), "synth_%03d", i);
      corpus.push_back({id, SyntheticUtterance(i)});
    }
    return corpus;
  }
  const auto paths = GlobSorted(spec);
  if (paths.empty()) Fail(ErrorKind::kIo, "corpus glob '" + spec + "' matched no files");
  for (const auto& path : paths) {
    const signal::AudioClip clip = signal::LoadWav(path);
    if (clip.sample_rate != kSampleRate) {
      Fail(ErrorKind::kUnsupported, path + " is " + std::to_string(clip.sample_rate) +
                                        " Hz; the corpus must be 16 kHz");
    }
    const std::string stem = std::filesystem::path(path).stem().string();
    const std::size_t n = clip.size();
    const std::size_t segments = std::max<std::size_t>(1, n / kSegmentSamples);
    for (std::size_t s = 0; s < segments; ++s) {
      Utterance u;
      char suffix[24];
      std::snprintf(suffix, sizeof(suffix), "_%03zu", s);
      u.id = stem + suffix;
      u.clip.sample_rate = kSampleRate;
      const std::size_t begin = s * kSegmentSamples;
      const std::size_t end = std::min(n, begin + kSegmentSamples);
      u.clip.samples.assign(clip.samples.begin() + begin, clip.samples.begin() + end);
      u.clip.samples.resize(kSegmentSamples, 0.0);
      corpus.push_back(std::move(u));
    }
  }
  return corpus;
}

}  // namespace dnsc::codec
