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

#ifndef DNSC_BITSTREAM_BITSTREAM_HPP_
#define DNSC_BITSTREAM_BITSTREAM_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "common/index_matrix.hpp"

namespace dnsc::bitstream {

// On-disk layout, little-endian, version 1:
//   0  "DNSC"
//   4  u8  version
//   5  u8  config id (0..5)
//   6  u32 sample rate
//  10  u16 hop
//  12  u32 frames
//  16  u8  code dim
//  17  u8  bits per dim
//  18  u32 target bit rate
//  22  payload: indices, MSB first, frame-major, zero padded to a byte
//  ..  u32 CRC32 of everything before it
inline constexpr std::size_t kHeaderBytes = 22;
inline constexpr std::size_t kCrcBytes = 4;
inline constexpr std::uint8_t kVersion = 1;
inline constexpr int kConfigCount = 6;

struct Header {
  std::uint8_t version = kVersion;
  std::uint8_t config_id = 0;
  std::uint32_t sample_rate = 16000;
  std::uint16_t hop = 256;
  std::uint32_t frames = 0;
  std::uint8_t code_dim = 0;
  std::uint8_t bits_per_dim = 0;
  std::uint32_t target_bps = 0;

  std::size_t payload_bytes() const;
  bool operator==(const Header&) const = default;
};

struct Bitstream {
  Header header;
  std::vector<std::uint8_t> payload;

  bool operator==(const Bitstream&) const = default;
};

std::vector<std::uint8_t> Pack(const IndexMatrix& indices, int bits_per_dim);
IndexMatrix Unpack(const std::vector<std::uint8_t>& payload, std::size_t frames, std::size_t dims,
                   int bits_per_dim);

// Packs `indices` under `header`; frames and code_dim are taken from the matrix.
Bitstream Encode(Header header, const IndexMatrix& indices);
IndexMatrix Decode(const Bitstream& stream);

std::vector<std::uint8_t> Serialize(const Bitstream& stream);
Bitstream Parse(const std::vector<std::uint8_t>& bytes);

void Write(const Bitstream& stream, const std::filesystem::path& path);
Bitstream Read(const std::filesystem::path& path);

}  // namespace dnsc::bitstream

#endif  // DNSC_BITSTREAM_BITSTREAM_HPP_
