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

#ifndef DNSC_EVAL_METRICS_HPP_
#define DNSC_EVAL_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "signal/audio.hpp"
#include "signal/mel.hpp"

namespace dnsc::eval {

// SI-SDR values are clipped to this magnitude.
inline constexpr double kSiSdrCap = 100.0;

// RMS over STFT frames and bins of 10 log10(P_ref / P_test), powers floored
// at 1e-10. The shorter clip is zero padded. 1024-point Hann, hop 256.
double Lsd(const signal::AudioClip& ref, const signal::AudioClip& test);

// Same distance on log-mel values (natural log amplitude), in dB.
double MelLsd(const signal::MelSpectrogram& ref, const signal::MelSpectrogram& test);

// Scale-invariant SDR in dB, clipped to +-kSiSdrCap.
double SiSdr(std::span<const double> ref, std::span<const double> test);

// Mean over frames of the distance between orthonormal DCT-II cepstra of the
// log-mel frames, coefficients 1..n_coeffs, scaled by 10 sqrt(2) / ln 10.
double Mcd(const signal::MelSpectrogram& ref, const signal::MelSpectrogram& test, int n_coeffs = 13);

struct Interval {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Percentile bootstrap of the mean.
Interval BootstrapMean(std::span<const double> values, int resamples = 1000, std::uint64_t seed = 0);

}  // namespace dnsc::eval

#endif  // DNSC_EVAL_METRICS_HPP_
