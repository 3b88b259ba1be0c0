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

#include "signal/stft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "common/error.hpp"

namespace dnsc::signal {
namespace {

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// FFTW's planner is not re-entrant; executing an existing plan on new arrays
// is. Plans are created once per size and never destroyed.
const FftPlans& PlansFor(int n) {
  static std::mutex mu;
  static std::map<int, FftPlans> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  double* real = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* cplx = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  FftPlans p;
  p.forward = fftw_plan_dft_r2c_1d(n, real, cplx, flags);
  p.inverse = fftw_plan_dft_c2r_1d(n, cplx, real, flags);
  fftw_free(real);
  fftw_free(cplx);
  return plans.emplace(n, p).first->second;
}

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t ReflectIndex(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

}  // namespace

std::vector<double> MakeWindow(Window kind, int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (kind == Window::kHann) {
    for (int i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    }
  }
  return w;
}

std::size_t FrameCount(std::size_t length, int hop) {
  return (length + static_cast<std::size_t>(hop) - 1) / static_cast<std::size_t>(hop);
}

void RealFft(std::span<const double> in, std::span<std::complex<double>> out) {
  const int n = static_cast<int>(in.size());
  Require(out.size() == static_cast<std::size_t>(n / 2 + 1), ErrorKind::kShape,
          "RealFft output size mismatch");
  const FftPlans& plans = PlansFor(n);
  // FFTW's r2c interface takes a non-const input pointer but does not write
  // to it for out-of-place transforms.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void InverseRealFft(std::span<const std::complex<double>> in,
                    std::span<double> out) {
  const int n = static_cast<int>(out.size());
  Require(in.size() == static_cast<std::size_t>(n / 2 + 1), ErrorKind::kShape,
          "InverseRealFft input size mismatch");
  const FftPlans& plans = PlansFor(n);
  // c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans.inverse,
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / n;
  for (double& v : out) v *= scale;
}

Spectrogram Stft(std::span<const double> x, int n_fft, int hop, Window window) {
  Require(IsPowerOfTwo(n_fft), ErrorKind::kConfig, "n_fft must be a power of two");
  Require(hop > 0, ErrorKind::kConfig, "hop must be positive");
  Require(hop <= n_fft, ErrorKind::kConfig, "hop must not exceed n_fft");

  Spectrogram spec;
  spec.n_fft = n_fft;
  spec.hop = hop;
  spec.frames = FrameCount(x.size(), hop);
  spec.bins.assign(spec.frames * spec.num_bins(), {0.0, 0.0});
  if (spec.frames == 0) return spec;

  const std::vector<double> w = MakeWindow(window, n_fft);
  std::vector<double> frame(static_cast<std::size_t>(n_fft));
  const std::ptrdiff_t left = n_fft / 2;
  for (std::size_t f = 0; f < spec.frames; ++f) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(f) * hop - left;
    for (int i = 0; i < n_fft; ++i) {
      frame[i] = w[i] * x[ReflectIndex(start + i, x.size())];
    }
    RealFft(frame, std::span(spec.bins).subspan(f * spec.num_bins(), spec.num_bins()));
  }
  return spec;
}

std::vector<double> Istft(const Spectrogram& spec, Window window,
                          std::ptrdiff_t length) {
  const std::size_t out_len = length < 0 ? spec.frames * static_cast<std::size_t>(spec.hop)
                                         : static_cast<std::size_t>(length);
  std::vector<double> out(out_len, 0.0);
  if (spec.frames == 0 || out_len == 0) return out;

  const int n_fft = spec.n_fft;
  const std::ptrdiff_t left = n_fft / 2;
  const std::vector<double> w = MakeWindow(window, n_fft);
  std::vector<double> norm(out_len, 0.0);
  std::vector<double> frame(static_cast<std::size_t>(n_fft));
  for (std::size_t f = 0; f < spec.frames; ++f) {
    InverseRealFft(std::span(spec.bins).subspan(f * spec.num_bins(), spec.num_bins()),
                   frame);
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(f) * spec.hop - left;
    for (int i = 0; i < n_fft; ++i) {
      const std::ptrdiff_t pos = start + i;
      if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(out_len)) continue;
      out[pos] += w[i] * frame[i];
      norm[pos] += w[i] * w[i];
    }
  }
  for (std::size_t i = 0; i < out_len; ++i) {
    if (norm[i] > 1e-10) out[i] /= norm[i];
  }
  return out;
}

}  // namespace dnsc::signal
