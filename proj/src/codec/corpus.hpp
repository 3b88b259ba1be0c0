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

#ifndef DNSC_CODEC_CORPUS_HPP_
#define DNSC_CODEC_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "signal/audio.hpp"

namespace dnsc::codec {

inline constexpr int kSampleRate = 16000;
inline constexpr std::size_t kSegmentSamples = 16000;  // 1 s

struct Utterance {
  std::string id;
  signal::AudioClip clip;
};

using Corpus = std::vector<Utterance>;

// Voiced/unvoiced speech-like clip: glottal pulse train through moving
// formant resonators, fricative noise bursts, syllabic envelope and a
// 1e-3 noise floor. Fully determined by `index`.
signal::AudioClip SyntheticUtterance(int index, std::size_t samples = kSegmentSamples);

// "builtin" (16 clips) or "builtin:N" gives synthetic clips. Anything else is
// a glob of 16 kHz mono PCM16 WAV files, each cut into 1 s segments; a short
// tail is zero padded when it is the whole file and dropped otherwise.
// Ids are "<stem>_<segment>" or "synth_<index>".
Corpus LoadCorpus(const std::string& spec);

// Filesystem glob, sorted; empty when nothing matches.
std::vector<std::string> GlobSorted(const std::string& pattern);

}  // namespace dnsc::codec

#endif  // DNSC_CODEC_CORPUS_HPP_
