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

#include "signal/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace dnsc::signal {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioClip ParseWav(const std::vector<std::uint8_t>& bytes) {
  ByteReader in(bytes);
  try {
    if (in.String(4) != "RIFF") Fail(ErrorKind::kFormat, "missing RIFF tag");
    in.U32();  // riff size; not trusted
    if (in.String(4) != "WAVE") Fail(ErrorKind::kFormat, "missing WAVE tag");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kTruncation) {
      Fail(ErrorKind::kFormat, "file too short for a RIFF header");
    }
    throw;
  }

  bool have_fmt = false;
  AudioClip clip;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  while (!in.AtEnd()) {
    if (in.remaining() < 8) Fail(ErrorKind::kFormat, "dangling chunk header");
    const std::string id = in.String(4);
    const std::uint32_t size = in.U32();
    if (size > in.remaining()) {
      Fail(ErrorKind::kFormat, "chunk '" + id + "' overruns file");
    }
    if (id == "fmt ") {
      if (size < 16) Fail(ErrorKind::kFormat, "fmt chunk too small");
      ByteReader fmt(in.Bytes(size));
      const std::uint16_t format = fmt.U16();
      channels = fmt.U16();
      const std::uint32_t rate = fmt.U32();
      fmt.U32();  // byte rate
      fmt.U16();  // block align
      bits = fmt.U16();
      if (format != kFormatPcm && format != kFormatExtensible) {
        Fail(ErrorKind::kUnsupported,
             "WAV encoding " + std::to_string(format) + " is not PCM");
      }
      if (bits != 16) {
        Fail(ErrorKind::kUnsupported,
             "only 16-bit PCM is supported, got " + std::to_string(bits));
      }
      if (channels != 1) {
        Fail(ErrorKind::kUnsupported,
             "only mono is supported, got " + std::to_string(channels) +
                 " channels");
      }
      if (rate == 0) Fail(ErrorKind::kFormat, "sample rate is zero");
      clip.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) Fail(ErrorKind::kFormat, "data chunk precedes fmt chunk");
      ByteReader data(in.Bytes(size));
      clip.samples.resize(size / 2);
      for (double& s : clip.samples) s = data.I16() / 32768.0;
      return clip;
    } else {
      in.Skip(size);
    }
    if ((size & 1u) && !in.AtEnd()) in.Skip(1);
  }
  Fail(ErrorKind::kFormat, have_fmt ? "missing data chunk" : "missing fmt chunk");
}

AudioClip LoadWav(const std::filesystem::path& path) {
  return ParseWav(ReadFileBytes(path));
}

std::vector<std::uint8_t> SerializeWav(const AudioClip& clip) {
  Require(clip.sample_rate > 0, ErrorKind::kData, "sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  ByteWriter out;
  out.Tag("RIFF");
  out.U32(36 + data_bytes);
  out.Tag("WAVE");
  out.Tag("fmt ");
  out.U32(16);
  out.U16(kFormatPcm);
  out.U16(1);
  out.U32(static_cast<std::uint32_t>(clip.sample_rate));
  out.U32(static_cast<std::uint32_t>(clip.sample_rate) * 2);
  out.U16(2);
  out.U16(16);
  out.Tag("data");
  out.U32(data_bytes);
  for (double s : clip.samples) {
    Require(std::isfinite(s), ErrorKind::kData, "non-finite sample");
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    out.I16(static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
  }
  return out.Take();
}

void SaveWav(const AudioClip& clip, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeWav(clip));
}

double Rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace dnsc::signal
