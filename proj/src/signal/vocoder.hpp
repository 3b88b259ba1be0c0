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

#ifndef DNSC_SIGNAL_VOCODER_HPP_
#define DNSC_SIGNAL_VOCODER_HPP_

#include <cstdint>
#include <functional>

#include "signal/audio.hpp"
#include "signal/mel.hpp"

namespace dnsc::signal {

// Any mel -> waveform stage. Griffin-Lim is the default; a learned decoder can
// be slotted in with the same signature.
using Vocoder = std::function<AudioClip(const MelSpectrogram&)>;

// Griffin-Lim phase reconstruction on pseudo-inverted mel magnitudes.
// Output has mel.frames * hop samples. With iterations == 0 the zero-phase
// inverse STFT is returned; otherwise the initial phase is drawn uniformly
// from a generator seeded with `seed`.
AudioClip PhaseReconstruct(const MelSpectrogram& mel, int iterations,
                           std::uint64_t seed, const MelConfig& config = {});

Vocoder GriffinLimVocoder(int iterations = 60, std::uint64_t seed = 0,
                          const MelConfig& config = {});

}  // namespace dnsc::signal

#endif  // DNSC_SIGNAL_VOCODER_HPP_
