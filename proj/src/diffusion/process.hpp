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

#ifndef DNSC_DIFFUSION_PROCESS_HPP_
#define DNSC_DIFFUSION_PROCESS_HPP_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "diffusion/schedule.hpp"
#include "nn/autograd.hpp"
#include "nn/layers.hpp"

namespace dnsc::diffusion {

// What the network predicts. A score model is the eps model rescaled by
// -1/b_t and needs no separate path.
enum class Parameterization { kEpsilon, kX0 };

const char* ParameterizationName(Parameterization p);
Parameterization ParseParameterization(const std::string& name);

struct TimeStep {
  int t = 0;
  double normalized = 0.0;
  double a = 1.0;
  double b = 0.0;
};

TimeStep TimeStepAt(const NoiseSchedule& schedule, int t);

// f(x_t, z, t). Must not keep state between calls.
using Denoiser = std::function<nn::Var(const nn::Var& x_t, const nn::Var& z, const TimeStep& step)>;

nn::Tensor ForwardSample(const nn::Tensor& x0, int t, const nn::Tensor& eps,
                         const NoiseSchedule& schedule);

nn::Tensor X0FromEpsilon(const nn::Tensor& x_t, const nn::Tensor& eps, const TimeStep& step);
nn::Tensor EpsilonFromX0(const nn::Tensor& x_t, const nn::Tensor& x0, const TimeStep& step);

// Mean squared error between the network output and its target at step t.
nn::Var TrainingLoss(const Denoiser& denoiser, const nn::Tensor& x0, const nn::Var& z, int t,
                     const nn::Tensor& eps, const NoiseSchedule& schedule, Parameterization param);

// Optional per-step variance of the x0 estimate (index t, entry 0 unused).
// When given, the reverse noise variance becomes
// posterior_variance[t] + mean_x0[t]^2 * x0_error_variance[t].
using X0ErrorVariance = std::vector<double>;

nn::Tensor ReverseStep(const nn::Tensor& x_t, int t, const nn::Var& z, const Denoiser& denoiser,
                       const NoiseSchedule& schedule, const nn::Tensor& eps, Parameterization param,
                       const X0ErrorVariance* x0_error_variance = nullptr);

// Ancestral sampling from x_T ~ N(0, I); all noise comes from `seed`.
nn::Tensor Sample(const Denoiser& denoiser, const nn::Var& z, const NoiseSchedule& schedule,
                  const nn::Shape& shape, std::uint64_t seed, Parameterization param,
                  const X0ErrorVariance* x0_error_variance = nullptr);

// Per-step mean squared error of the denoiser's x0 estimate on data drawn by
// `draw`, which returns (x0, z).
using DataDraw = std::function<std::pair<nn::Tensor, nn::Var>(nn::Rng&)>;
X0ErrorVariance CalibrateX0ErrorVariance(const Denoiser& denoiser, const NoiseSchedule& schedule,
                                         Parameterization param, const DataDraw& draw, int draws,
                                         std::uint64_t seed);

}  // namespace dnsc::diffusion

#endif  // DNSC_DIFFUSION_PROCESS_HPP_
