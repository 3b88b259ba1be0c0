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

#ifndef DNSC_NN_CHECKPOINT_HPP_
#define DNSC_NN_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nn/tensor.hpp"

namespace dnsc::nn {

inline constexpr std::uint8_t kCheckpointVersion = 1;

using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

// "DNSM" checkpoint: magic, u8 version, then records until end of file:
//   u32 name length, name bytes, u32 rank, rank x u32 dims, float64 data.
// All integers little-endian.
std::vector<std::uint8_t> SerializeCheckpoint(const NamedTensors& tensors);
NamedTensors ParseCheckpoint(const std::vector<std::uint8_t>& bytes);

void SaveCheckpoint(const NamedTensors& tensors, const std::filesystem::path& path);
NamedTensors LoadCheckpoint(const std::filesystem::path& path);

// Returns the tensor called `name`; throws a format error if absent.
const Tensor& FindTensor(const NamedTensors& tensors, const std::string& name);
// Entries whose name starts with `prefix`, with the prefix stripped.
NamedTensors WithPrefix(const NamedTensors& tensors, const std::string& prefix);
void AppendPrefixed(NamedTensors& out, const NamedTensors& in, const std::string& prefix);

}  // namespace dnsc::nn

#endif  // DNSC_NN_CHECKPOINT_HPP_
