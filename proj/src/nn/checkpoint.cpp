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

#include "nn/checkpoint.hpp"

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace dnsc::nn {

std::vector<std::uint8_t> SerializeCheckpoint(const NamedTensors& tensors) {
  ByteWriter out;
  out.Tag("DNSM");
  out.U8(kCheckpointVersion);
  for (const auto& [name, t] : tensors) {
    out.U32(static_cast<std::uint32_t>(name.size()));
    out.Tag(name);
    out.U32(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) out.U32(static_cast<std::uint32_t>(d));
    for (double v : t.data()) out.F64(v);
  }
  return out.Take();
}

NamedTensors ParseCheckpoint(const std::vector<std::uint8_t>& bytes) {
  ByteReader in(bytes);
  if (in.remaining() < 5 || in.String(4) != "DNSM") {
    Fail(ErrorKind::kFormat, "not a DNSM checkpoint");
  }
  const std::uint8_t version = in.U8();
  if (version != kCheckpointVersion) {
    Fail(ErrorKind::kFormat, "unsupported checkpoint version " + std::to_string(version));
  }
  NamedTensors out;
  while (!in.AtEnd()) {
    const std::uint32_t name_len = in.U32();
    if (name_len > in.remaining()) Fail(ErrorKind::kTruncation, "checkpoint record name overruns file");
    std::string name = in.String(name_len);
    const std::uint32_t rank = in.U32();
    if (rank > 8) Fail(ErrorKind::kFormat, "implausible rank for " + name);
    Shape shape(rank);
    for (auto& d : shape) d = in.U32();
    const std::size_t count = ShapeSize(shape);
    if (count > in.remaining() / 8) {
      Fail(ErrorKind::kTruncation, "checkpoint data for " + name + " overruns file");
    }
    std::vector<double> data(count);
    for (double& v : data) v = in.F64();
    out.emplace_back(std::move(name), Tensor(std::move(shape), std::move(data)));
  }
  return out;
}

void SaveCheckpoint(const NamedTensors& tensors, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeCheckpoint(tensors));
}

NamedTensors LoadCheckpoint(const std::filesystem::path& path) {
  return ParseCheckpoint(ReadFileBytes(path));
}

const Tensor& FindTensor(const NamedTensors& tensors, const std::string& name) {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  Fail(ErrorKind::kFormat, "checkpoint lacks tensor " + name);
}

NamedTensors WithPrefix(const NamedTensors& tensors, const std::string& prefix) {
  NamedTensors out;
  for (const auto& [n, t] : tensors) {
    if (n.starts_with(prefix)) out.emplace_back(n.substr(prefix.size()), t);
  }
  return out;
}

void AppendPrefixed(NamedTensors& out, const NamedTensors& in, const std::string& prefix) {
  for (const auto& [n, t] : in) out.emplace_back(prefix + n, t);
}

}  // namespace dnsc::nn
