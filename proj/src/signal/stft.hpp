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

#ifndef DNSC_SIGNAL_STFT_HPP_
#define DNSC_SIGNAL_STFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dnsc::signal {

enum class Window { kHann, kRectangular };

// Periodic window of length n.
std::vector<double> MakeWindow(Window kind, int n);

// Frames x (n_fft/2 + 1) complex bins, row-major.
struct Spectrogram {
  int n_fft = 0;
  int hop = 0;
  std::size_t frames = 0;
  std::vector<std::complex<double>> bins;

  std::size_t num_bins() const { return static_cast<std::size_t>(n_fft / 2 + 1); }
  std::complex<double>& at(std::size_t frame, std::size_t bin) {
    return bins[frame * num_bins() + bin];
  }
  const std::complex<double>& at(std::size_t frame, std::size_t bin) const {
    return bins[frame * num_bins() + bin];
  }
};

// Number of analysis frames for a signal of the given length: ceil(len/hop).
std::size_t FrameCount(std::size_t length, int hop);

// Short-time Fourier transform. The signal is reflect-padded by n_fft/2 on
// the left and as needed on the right so that exactly ceil(len/hop) frames
// start at multiples of hop (frame k is centred on sample k*hop).
Spectrogram Stft(std::span<const double> x, int n_fft, int hop,
                 Window window = Window::kHann);

// Weighted overlap-add inverse of Stft. Returns `length` samples aligned with
// the original signal; length defaults to frames * hop.
std::vector<double> Istft(const Spectrogram& spec, Window window = Window::kHann,
                          std::ptrdiff_t length = -1);

// In-place real FFT helpers backed by FFTW; safe to call concurrently.
void RealFft(std::span<const double> in, std::span<std::complex<double>> out);
void InverseRealFft(std::span<const std::complex<double>> in,
                    std::span<double> out);

}  // namespace dnsc::signal

#endif  // DNSC_SIGNAL_STFT_HPP_
