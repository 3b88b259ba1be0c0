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

#ifndef DNSC_NN_OPTIM_HPP_
#define DNSC_NN_OPTIM_HPP_

#include <functional>
#include <map>

#include "nn/layers.hpp"

namespace dnsc::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Global gradient-norm clip; 0 disables.
  double clip_norm = 0.0;
};

// Adam with bias correction. Moment state is keyed by parameter identity and
// starts at zero on the first step.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  // Applies one update to every parameter in `params` from its grad. A
  // non-finite gradient is a training error; no parameter is modified then.
  void Step(ParameterSet& params);

  long steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }

 private:
  struct Moments {
    Tensor m;
    Tensor v;
  };
  AdamOptions options_;
  long steps_ = 0;
  std::map<const Parameter*, Moments> state_;
};

struct GradCheckOptions {
  double eps = 1e-5;
  // Above this many coordinates a random subset of this size is probed.
  std::size_t max_coordinates = 400;
  std::uint64_t seed = 0;
};

// Compares Backward() against central finite differences of `loss_fn` on the
// parameters. Returns max |a - n| / max(|a|, |n|, 1e-8) over probed
// coordinates (0 when there are no parameters).
double GradCheck(ParameterSet& params, const std::function<Var()>& loss_fn,
                 GradCheckOptions options = {});

}  // namespace dnsc::nn

#endif  // DNSC_NN_OPTIM_HPP_
