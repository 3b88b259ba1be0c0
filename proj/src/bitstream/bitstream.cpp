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

#include "bitstream/bitstream.hpp"

#include <string>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace dnsc::bitstream {

namespace {

constexpr char kMagic[4] = {'D', 'N', 'S', 'C'};

void CheckBits(int bits_per_dim) {
  Require(bits_per_dim >= 1 && bits_per_dim <= 32, ErrorKind::kConfig,
          "bits per dimension must be in [1, 32]");
}

void CheckHeader(const Header& h, ErrorKind kind) {
  Require(h.version == kVersion, kind, "unsupported bitstream version " + std::to_string(h.version));
  Require(h.config_id < kConfigCount, kind, "config id " + std::to_string(h.config_id) + " >= 6");
  Require(h.bits_per_dim >= 1 && h.bits_per_dim <= 32, kind, "bits per dimension outside [1, 32]");
  Require(h.code_dim >= 1, kind, "code dimension is zero");
  Require(h.sample_rate > 0 && h.hop > 0, kind, "sample rate and hop must be positive");
}

}  // namespace

std::size_t Header::payload_bytes() const {
  const std::uint64_t bits = static_cast<std::uint64_t>(frames) * code_dim * bits_per_dim;
  return static_cast<std::size_t>((bits + 7) / 8);
}

std::vector<std::uint8_t> Pack(const IndexMatrix& indices, int bits_per_dim) {
  CheckBits(bits_per_dim);
  Require(indices.data.size() == indices.frames * indices.dims, ErrorKind::kShape,
          "index matrix storage does not match frames x dims");
  const std::uint64_t limit = std::uint64_t{1} << bits_per_dim;
  std::vector<std::uint8_t> out((indices.data.size() * bits_per_dim + 7) / 8, 0);
  std::size_t bit = 0;
  for (std::uint32_t v : indices.data) {
    if (v >= limit) {
      Fail(ErrorKind::kData, "index " + std::to_string(v) + " does not fit in " +
                                 std::to_string(bits_per_dim) + " bits");
    }
    for (int k = bits_per_dim - 1; k >= 0; --k, ++bit) {
      if ((v >> k) & 1U) out[bit / 8] |= static_cast<std::uint8_t>(0x80U >> (bit % 8));
    }
  }
  return out;
}

IndexMatrix Unpack(const std::vector<std::uint8_t>& payload, std::size_t frames, std::size_t dims,
                   int bits_per_dim) {
  CheckBits(bits_per_dim);
  IndexMatrix out(frames, dims);
  const std::size_t needed = (frames * dims * bits_per_dim + 7) / 8;
  if (payload.size() < needed) {
    Fail(ErrorKind::kTruncation, "payload has " + std::to_string(payload.size()) +
                                     " bytes, indices need " + std::to_string(needed));
  }
  std::size_t bit = 0;
  for (std::uint32_t& v : out.data) {
    std::uint32_t value = 0;
    for (int k = 0; k < bits_per_dim; ++k, ++bit) {
      value = (value << 1) | ((payload[bit / 8] >> (7 - bit % 8)) & 1U);
    }
    v = value;
  }
  return out;
}

Bitstream Encode(Header header, const IndexMatrix& indices) {
  Require(indices.dims >= 1 && indices.dims <= 255, ErrorKind::kConfig,
          "code dimension must be in [1, 255] to fit the header");
  header.frames = static_cast<std::uint32_t>(indices.frames);
  header.code_dim = static_cast<std::uint8_t>(indices.dims);
  CheckHeader(header, ErrorKind::kConfig);
  return {header, Pack(indices, header.bits_per_dim)};
}

IndexMatrix Decode(const Bitstream& stream) {
  const Header& h = stream.header;
  return Unpack(stream.payload, h.frames, h.code_dim, h.bits_per_dim);
}

std::vector<std::uint8_t> Serialize(const Bitstream& stream) {
  const Header& h = stream.header;
  CheckHeader(h, ErrorKind::kConfig);
  Require(stream.payload.size() == h.payload_bytes(), ErrorKind::kData,
          "payload length disagrees with the header");
  ByteWriter w;
  w.Tag(std::string(kMagic, 4));
  w.U8(h.version);
  w.U8(h.config_id);
  w.U32(h.sample_rate);
  w.U16(h.hop);
  w.U32(h.frames);
  w.U8(h.code_dim);
  w.U8(h.bits_per_dim);
  w.U32(h.target_bps);
  w.Bytes(stream.payload);
  std::vector<std::uint8_t> bytes = w.Take();
  const std::uint32_t crc = Crc32(bytes);
  ByteWriter tail;
  tail.U32(crc);
  const auto crc_bytes = tail.Take();
  bytes.insert(bytes.end(), crc_bytes.begin(), crc_bytes.end());
  return bytes;
}

Bitstream Parse(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= 4 && std::string(bytes.begin(), bytes.begin() + 4) != std::string(kMagic, 4)) {
    Fail(ErrorKind::kFormat, "not a DNSC bitstream (bad magic)");
  }
  if (bytes.size() < kHeaderBytes) {
    Fail(ErrorKind::kTruncation, "file has " + std::to_string(bytes.size()) +
                                     " bytes, shorter than the 22-byte header");
  }
  ByteReader r(bytes);
  r.Skip(4);
  Bitstream s;
  Header& h = s.header;
  h.version = r.U8();
  h.config_id = r.U8();
  h.sample_rate = r.U32();
  h.hop = r.U16();
  h.frames = r.U32();
  h.code_dim = r.U8();
  h.bits_per_dim = r.U8();
  h.target_bps = r.U32();
  CheckHeader(h, ErrorKind::kFormat);

  const std::size_t expected = kHeaderBytes + h.payload_bytes() + kCrcBytes;
  if (bytes.size() < expected) {
    Fail(ErrorKind::kTruncation, "file has " + std::to_string(bytes.size()) + " bytes, header implies " +
                                     std::to_string(expected));
  }
  if (bytes.size() > expected) {
    Fail(ErrorKind::kFormat, std::to_string(bytes.size() - expected) + " trailing bytes after the CRC");
  }
  const std::span<const std::uint8_t> covered(bytes.data(), expected - kCrcBytes);
  ByteReader crc_reader(std::span<const std::uint8_t>(bytes.data() + expected - kCrcBytes, kCrcBytes));
  if (crc_reader.U32() != Crc32(covered)) Fail(ErrorKind::kCorruption, "CRC mismatch");
  const auto payload = r.Bytes(h.payload_bytes());
  s.payload.assign(payload.begin(), payload.end());
  return s;
}

void Write(const Bitstream& stream, const std::filesystem::path& path) {
  WriteFileBytes(path, Serialize(stream));
}

Bitstream Read(const std::filesystem::path& path) { return Parse(ReadFileBytes(path)); }

}  // namespace dnsc::bitstream
