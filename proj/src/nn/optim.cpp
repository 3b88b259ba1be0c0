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

#include "nn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace dnsc::nn {

void Adam::Step(ParameterSet& params) {
  double norm_sq = 0.0;
  for (const auto& p : params.all()) {
    if (!p->grad.AllFinite()) {
      Fail(ErrorKind::kTraining, "non-finite gradient for " + p->name);
    }
    for (double g : p->grad.data()) norm_sq += g * g;
  }
  double clip = 1.0;
  if (options_.clip_norm > 0.0) {
    const double norm = std::sqrt(norm_sq);
    if (norm > options_.clip_norm) clip = options_.clip_norm / norm;
  }

  ++steps_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (auto& p : params.all()) {
    Moments& st = state_[p.get()];
    if (st.m.empty()) {
      st.m = Tensor(p->value.shape(), 0.0);
      st.v = Tensor(p->value.shape(), 0.0);
    }
    std::vector<double>& w = p->value.data();
    const std::vector<double>& g = p->grad.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g[i] * clip;
      st.m[i] = b1 * st.m[i] + (1.0 - b1) * gi;
      st.v[i] = b2 * st.v[i] + (1.0 - b2) * gi * gi;
      const double m_hat = st.m[i] / correction1;
      const double v_hat = st.v[i] / correction2;
      w[i] -= options_.lr * m_hat / (std::sqrt(v_hat) + options_.eps);
    }
  }
}

double GradCheck(ParameterSet& params, const std::function<Var()>& loss_fn,
                 GradCheckOptions options) {
  const std::size_t total = params.TotalSize();
  if (total == 0) return 0.0;

  params.ZeroGrad();
  Backward(loss_fn());

  // Flat coordinate -> (parameter, offset).
  std::vector<std::pair<Parameter*, std::size_t>> coords;
  coords.reserve(total);
  for (const auto& p : params.all()) {
    for (std::size_t i = 0; i < p->value.size(); ++i) coords.emplace_back(p.get(), i);
  }
  if (coords.size() > options.max_coordinates) {
    Rng rng(options.seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(options.max_coordinates);
  }

  double worst = 0.0;
  for (auto [param, i] : coords) {
    const double analytic = param->grad[i];
    const double original = param->value[i];
    param->value[i] = original + options.eps;
    const double plus = loss_fn().value()[0];
    param->value[i] = original - options.eps;
    const double minus = loss_fn().value()[0];
    param->value[i] = original;
    const double numeric = (plus - minus) / (2.0 * options.eps);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

}  // namespace dnsc::nn
