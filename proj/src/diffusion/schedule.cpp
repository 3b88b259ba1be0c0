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

#include "diffusion/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "common/error.hpp"

namespace dnsc::diffusion {

namespace {

constexpr int kMinReferenceSteps = 1000;
constexpr double kMaxPriorSignal = 1e-2;

}  // namespace

NoiseSchedule MakeSchedule(int steps, double beta_min, double beta_max) {
  Require(steps >= 1, ErrorKind::kConfig, "diffusion needs at least one step");
  Require(beta_min > 0.0 && beta_max < 1.0 && beta_min <= beta_max, ErrorKind::kConfig,
          "beta range must satisfy 0 < beta_min <= beta_max < 1");
  NoiseSchedule s;
  s.steps = steps;
  s.reference_steps = std::max(steps, kMinReferenceSteps);
  const int ref = s.reference_steps;

  // Cumulative log signal power along the reference chain.
  std::vector<double> log_alpha_bar(ref + 1, 0.0);
  for (int i = 1; i <= ref; ++i) {
    const double beta_i =
        ref == 1 ? beta_min : beta_min + (beta_max - beta_min) * (i - 1) / (ref - 1);
    log_alpha_bar[i] = log_alpha_bar[i - 1] + std::log1p(-beta_i);
  }

  s.reference_index.resize(steps + 1);
  s.reference_index[0] = 0;
  if (steps == 1) {
    s.reference_index[1] = ref;
  } else {
    const int stride = (ref - 1) / (steps - 1);
    for (int k = 1; k < steps; ++k) s.reference_index[k] = 1 + (k - 1) * stride;
    s.reference_index[steps] = ref;
  }

  const auto n = static_cast<std::size_t>(steps) + 1;
  s.alpha_bar.assign(n, 1.0);
  s.beta.assign(n, 0.0);
  s.a.assign(n, 1.0);
  s.b.assign(n, 0.0);
  s.c.assign(n, 0.0);
  s.posterior_variance.assign(n, 0.0);
  s.mean_x0.assign(n, 0.0);
  s.mean_xt.assign(n, 0.0);
  for (int t = 1; t <= steps; ++t) {
    s.alpha_bar[t] = std::exp(log_alpha_bar[s.reference_index[t]]);
    s.beta[t] = 1.0 - s.alpha_bar[t] / s.alpha_bar[t - 1];
    if (!(s.beta[t] > 0.0 && s.beta[t] < 1.0)) {
      Fail(ErrorKind::kConfig, "step " + std::to_string(t) + " has beta outside (0, 1)");
    }
    s.a[t] = std::sqrt(s.alpha_bar[t]);
    s.b[t] = std::sqrt(1.0 - s.alpha_bar[t]);
    const double one_minus = 1.0 - s.alpha_bar[t];
    s.posterior_variance[t] = (1.0 - s.alpha_bar[t - 1]) / one_minus * s.beta[t];
    s.mean_x0[t] = std::sqrt(s.alpha_bar[t - 1]) * s.beta[t] / one_minus;
    s.mean_xt[t] = std::sqrt(1.0 - s.beta[t]) * (1.0 - s.alpha_bar[t - 1]) / one_minus;
    s.c[t] = t == 1 ? 0.0 : std::sqrt(s.posterior_variance[t]);
  }
  if (s.a[steps] > kMaxPriorSignal) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "schedule ends with signal coefficient %.4g > %.0e; the prior is not reached",
                  s.a[steps], kMaxPriorSignal);
    Fail(ErrorKind::kConfig, buf);
  }
  return s;
}

std::string ScheduleText(const NoiseSchedule& schedule) {
  std::string out = "# t a b c\n";
  char line[128];
  for (int t = 0; t <= schedule.steps; ++t) {
    std::snprintf(line, sizeof(line), "%d %.17g %.17g %.17g\n", t, schedule.a[t], schedule.b[t],
                  schedule.c[t]);
    out += line;
  }
  return out;
}

}  // namespace dnsc::diffusion
