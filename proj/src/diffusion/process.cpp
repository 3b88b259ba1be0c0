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

#include "diffusion/process.hpp"

#include <cmath>
#include <random>
#include <string>

#include "common/error.hpp"

namespace dnsc::diffusion {

namespace {

constexpr double kDivisionFloor = 1e-12;

void CheckStep(const NoiseSchedule& schedule, int t, int lo) {
  if (t < lo || t > schedule.steps) {
    Fail(ErrorKind::kIndex, "diffusion step " + std::to_string(t) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(schedule.steps) + "]");
  }
}

nn::Tensor Gaussian(const nn::Shape& shape, nn::Rng& rng) {
  nn::Tensor t(shape);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double& v : t.data()) v = g(rng);
  return t;
}

// x0 estimate from a network output under either parameterization.
nn::Tensor EstimateX0(const nn::Tensor& x_t, const nn::Tensor& out, const TimeStep& step,
                      Parameterization param) {
  return param == Parameterization::kX0 ? out : X0FromEpsilon(x_t, out, step);
}

}  // namespace

const char* ParameterizationName(Parameterization p) {
  return p == Parameterization::kX0 ? "x0" : "eps";
}

Parameterization ParseParameterization(const std::string& name) {
  if (name == "eps") return Parameterization::kEpsilon;
  if (name == "x0") return Parameterization::kX0;
  Fail(ErrorKind::kConfig, "unknown parameterization '" + name + "' (expected eps or x0)");
}

TimeStep TimeStepAt(const NoiseSchedule& schedule, int t) {
  CheckStep(schedule, t, 0);
  return {t, schedule.normalized_time(t), schedule.a[t], schedule.b[t]};
}

nn::Tensor ForwardSample(const nn::Tensor& x0, int t, const nn::Tensor& eps,
                         const NoiseSchedule& schedule) {
  CheckStep(schedule, t, 0);
  Require(x0.SameShape(eps), ErrorKind::kShape, "noise shape differs from data shape");
  nn::Tensor out(x0.shape());
  const double a = schedule.a[t];
  const double b = schedule.b[t];
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x0[i] + b * eps[i];
  return out;
}

nn::Tensor X0FromEpsilon(const nn::Tensor& x_t, const nn::Tensor& eps, const TimeStep& step) {
  Require(x_t.SameShape(eps), ErrorKind::kShape, "noise estimate shape differs from x_t");
  Require(step.a > kDivisionFloor, ErrorKind::kNumeric, "signal coefficient too small to invert");
  nn::Tensor out(x_t.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (x_t[i] - step.b * eps[i]) / step.a;
  return out;
}

nn::Tensor EpsilonFromX0(const nn::Tensor& x_t, const nn::Tensor& x0, const TimeStep& step) {
  Require(x_t.SameShape(x0), ErrorKind::kShape, "x0 estimate shape differs from x_t");
  Require(step.b > kDivisionFloor, ErrorKind::kNumeric, "noise coefficient too small to invert");
  nn::Tensor out(x_t.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (x_t[i] - step.a * x0[i]) / step.b;
  return out;
}

nn::Var TrainingLoss(const Denoiser& denoiser, const nn::Tensor& x0, const nn::Var& z, int t,
                     const nn::Tensor& eps, const NoiseSchedule& schedule, Parameterization param) {
  CheckStep(schedule, t, 1);
  const nn::Tensor x_t = ForwardSample(x0, t, eps, schedule);
  const nn::Tensor& target = param == Parameterization::kX0 ? x0 : eps;
  try {
    const nn::Var out = denoiser(nn::Constant(x_t), z, TimeStepAt(schedule, t));
    Require(out.value().SameShape(target), ErrorKind::kShape,
            "denoiser output " + nn::ShapeString(out.shape()) + " differs from target " +
                nn::ShapeString(target.shape()));
    return nn::MeanSquaredError(out, nn::Constant(target));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNumeric) {
      Fail(ErrorKind::kTraining, std::string("non-finite training loss: ") + e.what());
    }
    throw;
  }
}

nn::Tensor ReverseStep(const nn::Tensor& x_t, int t, const nn::Var& z, const Denoiser& denoiser,
                       const NoiseSchedule& schedule, const nn::Tensor& eps, Parameterization param,
                       const X0ErrorVariance* x0_error_variance) {
  CheckStep(schedule, t, 1);
  Require(x_t.SameShape(eps), ErrorKind::kShape, "noise shape differs from x_t");
  const TimeStep step = TimeStepAt(schedule, t);
  const nn::Tensor out = denoiser(nn::Constant(x_t), z, step).value();
  Require(out.SameShape(x_t), ErrorKind::kShape, "denoiser output shape differs from x_t");
  const nn::Tensor x0 = EstimateX0(x_t, out, step, param);

  double noise = schedule.c[t];
  if (x0_error_variance != nullptr && t > 1) {
    Require(x0_error_variance->size() == static_cast<std::size_t>(schedule.steps) + 1,
            ErrorKind::kShape, "x0 error variance must have one entry per step");
    const double k = schedule.mean_x0[t];
    noise = std::sqrt(schedule.posterior_variance[t] + k * k * (*x0_error_variance)[t]);
  }
  nn::Tensor prev(x_t.shape());
  const double cx0 = schedule.mean_x0[t];
  const double cxt = schedule.mean_xt[t];
  for (std::size_t i = 0; i < prev.size(); ++i) {
    prev[i] = cx0 * x0[i] + cxt * x_t[i] + noise * eps[i];
  }
  return prev;
}

nn::Tensor Sample(const Denoiser& denoiser, const nn::Var& z, const NoiseSchedule& schedule,
                  const nn::Shape& shape, std::uint64_t seed, Parameterization param,
                  const X0ErrorVariance* x0_error_variance) {
  nn::Rng rng(seed);
  nn::Tensor x = Gaussian(shape, rng);
  for (int t = schedule.steps; t >= 1; --t) {
    const nn::Tensor eps = Gaussian(shape, rng);
    x = ReverseStep(x, t, z, denoiser, schedule, eps, param, x0_error_variance);
  }
  return x;
}

X0ErrorVariance CalibrateX0ErrorVariance(const Denoiser& denoiser, const NoiseSchedule& schedule,
                                         Parameterization param, const DataDraw& draw, int draws,
                                         std::uint64_t seed) {
  Require(draws > 0, ErrorKind::kConfig, "calibration needs at least one draw");
  nn::Rng rng(seed);
  X0ErrorVariance result(schedule.steps + 1, 0.0);
  for (int t = 1; t <= schedule.steps; ++t) {
    const TimeStep step = TimeStepAt(schedule, t);
    double sum = 0.0;
    std::size_t count = 0;
    for (int d = 0; d < draws; ++d) {
      auto [x0, z] = draw(rng);
      const nn::Tensor eps = Gaussian(x0.shape(), rng);
      const nn::Tensor x_t = ForwardSample(x0, t, eps, schedule);
      const nn::Tensor out = denoiser(nn::Constant(x_t), z, step).value();
      const nn::Tensor est = EstimateX0(x_t, out, step, param);
      for (std::size_t i = 0; i < est.size(); ++i) sum += (est[i] - x0[i]) * (est[i] - x0[i]);
      count += est.size();
    }
    result[t] = sum / static_cast<double>(count);
  }
  return result;
}

}  // namespace dnsc::diffusion
