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

#include "quantizer/bitrate.hpp"

#include <string>

#include "common/error.hpp"

namespace dnsc::quantizer {

std::size_t BitrateSpec::bits_per_frame() const {
  Require(target_bps > 0 && sample_rate > 0 && hop > 0, ErrorKind::kConfig,
          "bitrate, sample rate and hop must be positive");
  const long long num = static_cast<long long>(target_bps) * hop;
  if (num % sample_rate != 0) {
    Fail(ErrorKind::kConfig, std::to_string(target_bps) + " bps is not a whole number of bits per " +
                                 std::to_string(hop) + "-sample frame at " +
                                 std::to_string(sample_rate) + " Hz");
  }
  return static_cast<std::size_t>(num / sample_rate);
}

SqGeometry PlanBitrate(const BitrateSpec& spec, std::size_t input_dim, BitrateStrategy strategy) {
  const std::size_t bits = spec.bits_per_frame();
  switch (strategy) {
    case BitrateStrategy::kPreferThreeBits:
      for (int levels : {8, 4}) {
        const SqGeometry g{input_dim, 1, levels};
        const auto per_dim = static_cast<std::size_t>(g.bits_per_dim());
        if (bits % per_dim == 0) return {input_dim, bits / per_dim, levels};
      }
      break;
  }
  Fail(ErrorKind::kConfig, "no (code_dim, levels) split for " + std::to_string(bits) + " bits per frame");
}

}  // namespace dnsc::quantizer
