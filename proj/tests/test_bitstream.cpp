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

#include <filesystem>
#include <random>

#include "bitstream/bitstream.hpp"
#include "common/bytes.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace dnsc;
using namespace dnsc::bitstream;
using dnsc::testing::ThrownKind;

namespace {

IndexMatrix RandomIndices(std::size_t frames, std::size_t dims, int bits, std::mt19937_64& rng) {
  IndexMatrix m(frames, dims);
  std::uniform_int_distribution<std::uint32_t> pick(0, (1U << bits) - 1);
  for (auto& v : m.data) v = pick(rng);
  return m;
}

Header ThreeKbps() {
  Header h;
  h.config_id = 2;
  h.bits_per_dim = 3;
  h.target_bps = 3000;
  return h;
}

std::filesystem::path TempPath(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("packing layout") {
  IndexMatrix m(1, 2);
  m.data = {5, 2};
  CHECK(Pack(m, 3) == std::vector<std::uint8_t>{0xA8});
  IndexMatrix zeros(7, 5);
  for (auto b : Pack(zeros, 3)) CHECK(b == 0);
  CHECK(Pack(zeros, 3).size() == 14);  // 105 bits
  IndexMatrix wide(1, 1);
  wide.data = {0xABCD};
  CHECK(Pack(wide, 16) == std::vector<std::uint8_t>{0xAB, 0xCD});
  m.data = {8, 0};
  CHECK(ThrownKind([&] { Pack(m, 3); }) == ErrorKind::kData);
}

TEST_CASE("pack and unpack are inverse") {
  std::mt19937_64 rng(8);
  for (int bits = 1; bits <= 12; ++bits) {
    for (std::size_t frames : {0, 1, 3, 63}) {
      const IndexMatrix m = RandomIndices(frames, 7, bits, rng);
      const auto packed = Pack(m, bits);
      REQUIRE(packed.size() == (frames * 7 * bits + 7) / 8);
      REQUIRE(Unpack(packed, frames, 7, bits) == m);
    }
  }
}

TEST_CASE("one-second stream at 3 kbps is 404 bytes") {
  std::mt19937_64 rng(9);
  const Bitstream s = Encode(ThreeKbps(), RandomIndices(63, 16, 3, rng));
  CHECK(s.payload.size() == 378);
  CHECK(Serialize(s).size() == 404);
  CHECK(Decode(s) == Unpack(s.payload, 63, 16, 3));
}

TEST_CASE("file round trip is byte exact") {
  std::mt19937_64 rng(10);
  const IndexMatrix m = RandomIndices(40, 32, 3, rng);
  const Bitstream s = Encode(ThreeKbps(), m);
  const auto path = TempPath("dnsc_roundtrip.dnsc");
  Write(s, path);
  const Bitstream back = Read(path);
  CHECK(back == s);
  CHECK(Decode(back) == m);
  const auto first = ReadFileBytes(path);
  Write(back, path);
  CHECK(ReadFileBytes(path) == first);
  CHECK(first.size() == kHeaderBytes + s.payload.size() + kCrcBytes);
  std::filesystem::remove(path);
}

TEST_CASE("every single-bit flip is rejected") {
  std::mt19937_64 rng(11);
  const auto bytes = Serialize(Encode(ThreeKbps(), RandomIndices(63, 16, 3, rng)));
  for (std::size_t bit = 0; bit < bytes.size() * 8; ++bit) {
    auto flipped = bytes;
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
    REQUIRE(ThrownKind([&] { Parse(flipped); }).has_value());
  }
  // A payload flip specifically trips the CRC.
  auto flipped = bytes;
  flipped[100] ^= 0x10;
  CHECK(ThrownKind([&] { Parse(flipped); }) == ErrorKind::kCorruption);
}

TEST_CASE("truncation and malformed headers") {
  std::mt19937_64 rng(12);
  const auto bytes = Serialize(Encode(ThreeKbps(), RandomIndices(63, 16, 3, rng)));
  const std::vector<std::uint8_t> header_only(bytes.begin(), bytes.begin() + kHeaderBytes);
  CHECK(ThrownKind([&] { Parse(header_only); }) == ErrorKind::kTruncation);
  for (std::size_t n : {std::size_t{0}, std::size_t{3}, std::size_t{10}, bytes.size() - 1}) {
    const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + n);
    REQUIRE(ThrownKind([&] { Parse(cut); }) == ErrorKind::kTruncation);
  }
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(ThrownKind([&] { Parse(bad_magic); }) == ErrorKind::kFormat);
  auto bad_config = bytes;
  bad_config[5] = 6;
  CHECK(ThrownKind([&] { Parse(bad_config); }) == ErrorKind::kFormat);
  auto bad_version = bytes;
  bad_version[4] = 2;
  CHECK(ThrownKind([&] { Parse(bad_version); }) == ErrorKind::kFormat);
  auto longer = bytes;
  longer.push_back(0);
  CHECK(ThrownKind([&] { Parse(longer); }) == ErrorKind::kFormat);
  CHECK(ThrownKind([] { Read("/nonexistent/dir/x.dnsc"); }) == ErrorKind::kIo);
}

TEST_CASE("empty stream") {
  const Bitstream s = Encode(ThreeKbps(), IndexMatrix(0, 16));
  const auto bytes = Serialize(s);
  CHECK(bytes.size() == kHeaderBytes + kCrcBytes);
  CHECK(Parse(bytes) == s);
}
