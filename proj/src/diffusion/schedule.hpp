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

#ifndef DNSC_DIFFUSION_SCHEDULE_HPP_
#define DNSC_DIFFUSION_SCHEDULE_HPP_

#include <string>
#include <vector>

namespace dnsc::diffusion {

// Discrete variance-preserving schedule, indexed t = 0..steps.
// x_t = a[t] x_0 + b[t] eps. c[t] scales the noise injected by the reverse
// step that produces x_{t-1}; c[1] = 0 so the last step is noiseless.
//
// Steps are taken from a linear-beta reference chain of
// max(steps, 1000) steps at indices 0, 1, 1+s, 1+2s, ..., R with
// s = floor((R-1)/(steps-1)): the first step is one reference step, gaps
// never shrink, and a coarser grid with a stride that is a multiple of a
// finer one is a subset of it (50 sampling steps inside 200 training steps).
struct NoiseSchedule {
  int steps = 0;
  int reference_steps = 0;
  double delta_t = 1.0;
  std::vector<int> reference_index;
  std::vector<double> alpha_bar;
  std::vector<double> beta;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  std::vector<double> posterior_variance;
  // Posterior mean of x_{t-1} is mean_x0[t] * x0 + mean_xt[t] * x_t.
  std::vector<double> mean_x0;
  std::vector<double> mean_xt;

  // Network time input in [0, 1]; shared between schedules over the same
  // reference chain.
  double normalized_time(int t) const {
    return static_cast<double>(reference_index[t]) / reference_steps;
  }
};

NoiseSchedule MakeSchedule(int steps, double beta_min = 1e-4, double beta_max = 0.02);

// "t a b c" rows, t = 0..steps.
std::string ScheduleText(const NoiseSchedule& schedule);

}  // namespace dnsc::diffusion

#endif  // DNSC_DIFFUSION_SCHEDULE_HPP_
