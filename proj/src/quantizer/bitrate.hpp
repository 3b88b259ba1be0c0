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

#ifndef DNSC_QUANTIZER_BITRATE_HPP_
#define DNSC_QUANTIZER_BITRATE_HPP_

#include <cstddef>

#include "quantizer/scalar.hpp"

namespace dnsc::quantizer {

struct BitrateSpec {
  int target_bps = 3000;
  int sample_rate = 16000;
  int hop = 256;

  double frame_rate() const { return static_cast<double>(sample_rate) / hop; }
  // target_bps * hop / sample_rate; config error unless a positive integer.
  std::size_t bits_per_frame() const;
};

enum class BitrateStrategy {
  kPreferThreeBits,  // L = 8, falling back to L = 4
};

// Returns a geometry with code_dim * bits_per_dim == bits_per_frame.
// input_dim is copied through.
SqGeometry PlanBitrate(const BitrateSpec& spec, std::size_t input_dim,
                       BitrateStrategy strategy = BitrateStrategy::kPreferThreeBits);

}  // namespace dnsc::quantizer

#endif  // DNSC_QUANTIZER_BITRATE_HPP_
