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

#ifndef DNSC_COMMON_INDEX_MATRIX_HPP_
#define DNSC_COMMON_INDEX_MATRIX_HPP_

#include <cstdint>
#include <vector>

namespace dnsc {

// Quantizer indices, frames x dims, frame-major.
struct IndexMatrix {
  std::size_t frames = 0;
  std::size_t dims = 0;
  std::vector<std::uint32_t> data;

  IndexMatrix() = default;
  IndexMatrix(std::size_t f, std::size_t d) : frames(f), dims(d), data(f * d, 0) {}

  std::uint32_t& at(std::size_t frame, std::size_t dim) { return data[frame * dims + dim]; }
  std::uint32_t at(std::size_t frame, std::size_t dim) const { return data[frame * dims + dim]; }

  bool operator==(const IndexMatrix&) const = default;
};

}  // namespace dnsc

#endif  // DNSC_COMMON_INDEX_MATRIX_HPP_
