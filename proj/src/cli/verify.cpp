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

#include "cli/verify.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "bitstream/bitstream.hpp"
#include "cli/manifest.hpp"
#include "codec/corpus.hpp"
#include "codec/pipeline.hpp"
#include "common/error.hpp"
#include "diffusion/schedule.hpp"
#include "quantizer/scalar.hpp"

namespace dnsc::cli {
namespace {

constexpr double kGradTolerance = 1e-4;
constexpr std::uint64_t kVerifySeed = 0x7e51f1edULL;

std::string Num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Runner {
 public:
  explicit Runner(const CheckObserver& observer) : observer_(observer) {}

  // fn yields (passed, detail); an exception counts as a failure.
  template <typename Fn>
  void Run(const std::string& name, Fn&& fn) {
    CheckResult r{name, false, {}};
    try {
      auto [ok, detail] = fn();
      r.passed = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    Record(std::move(r));
  }

  void Skip(const std::string& name, const std::string& why) { Record({name, false, why}); }

  std::vector<CheckResult> Take() { return std::move(results_); }

 private:
  void Record(CheckResult r) {
    if (observer_) observer_(r);
    results_.push_back(std::move(r));
  }

  const CheckObserver& observer_;
  std::vector<CheckResult> results_;
};

using Outcome = std::pair<bool, std::string>;

Outcome CheckManifest(const std::filesystem::path& dir) {
  const auto recorded = ReadManifestChecksums(dir);
  const auto actual = ArtifactChecksums(dir);
  for (const auto& [name, hash] : recorded) {
    auto it = actual.find(name);
    if (it == actual.end()) return {false, name + " missing"};
    if (it->second != hash) return {false, name + " checksum mismatch"};
  }
  for (const auto& [name, hash] : actual) {
    if (!recorded.count(name)) return {false, name + " not in manifest"};
  }
  return {true, std::to_string(recorded.size()) + " artifacts"};
}

Outcome CheckSchedule(int steps) {
  const auto s = diffusion::MakeSchedule(steps);
  double worst = 0.0;
  for (int t = 0; t <= s.steps; ++t) {
    worst = std::max(worst, std::abs(s.a[t] * s.a[t] + s.b[t] * s.b[t] - 1.0));
  }
  if (worst > 1e-12) return {false, "a^2+b^2 off by " + Num(worst)};
  for (int t = 1; t <= s.steps; ++t) {
    if (!(s.alpha_bar[t] < s.alpha_bar[t - 1])) return {false, "alpha_bar not decreasing at " + std::to_string(t)};
    if (!(s.beta[t] > 0.0 && s.beta[t] < 1.0)) return {false, "beta out of (0,1) at " + std::to_string(t)};
    if (!(s.posterior_variance[t] >= 0.0)) return {false, "negative posterior variance at " + std::to_string(t)};
  }
  return {true, "T=" + std::to_string(steps) + " max |a^2+b^2-1| " + Num(worst)};
}

Outcome CheckQuantizer(const quantizer::SqGeometry& geometry) {
  auto sq = quantizer::ScalarQuantizer::Identity(geometry.code_dim, geometry.levels);
  std::mt19937_64 rng(kVerifySeed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double bound = sq.geometry().step() / 2.0 + 1e-12;
  std::vector<double> x(geometry.code_dim);
  for (int n = 0; n < 10000; ++n) {
    for (double& v : x) v = u(rng);
    const auto idx = sq.QuantizeFrame(x);
    const auto y = sq.DequantizeFrame(idx);
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double clipped = std::clamp(x[d], -1.0, 1.0);
      if (std::abs(y[d] - clipped) > bound) return {false, "error exceeds half step"};
    }
    if (sq.QuantizeFrame(y) != idx) return {false, "index round trip differs"};
  }
  return {true, std::to_string(geometry.code_dim) + " dims x " + std::to_string(geometry.levels) + " levels"};
}

Outcome CheckBitstream(const codec::Pipeline& p, const bitstream::Bitstream& stream) {
  const auto bytes = bitstream::Serialize(stream);
  if (!(bitstream::Parse(bytes) == stream)) return {false, "parse(serialize) differs"};
  if (bitstream::Serialize(bitstream::Parse(bytes)) != bytes) return {false, "not byte exact"};
  std::mt19937_64 rng(kVerifySeed);
  for (int trial = 0; trial < 32; ++trial) {
    auto flipped = bytes;
    const std::size_t bit = rng() % (flipped.size() * 8);
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      bitstream::Parse(flipped);
      return {false, "bit flip at " + std::to_string(bit) + " not detected"};
    } catch (const Error&) {
    }
  }
  for (std::size_t keep : {std::size_t{0}, bytes.size() / 2, bytes.size() - 1}) {
    std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(keep));
    try {
      bitstream::Parse(cut);
      return {false, "truncation to " + std::to_string(keep) + " bytes not detected"};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kTruncation && e.kind() != ErrorKind::kFormat) {
        return {false, std::string("truncation raised ") + ErrorKindName(e.kind())};
      }
    }
  }
  const std::size_t bits = stream.header.frames * p.geometry().bits_per_frame();
  return {true, std::to_string(bytes.size()) + " bytes, " + std::to_string(bits) + " payload bits"};
}

Outcome CheckDecode(const codec::Pipeline& p, const bitstream::Bitstream& stream) {
  const auto a = p.Decode(stream, kVerifySeed);
  const auto b = p.Decode(stream, kVerifySeed);
  const std::size_t expected = stream.header.frames * codec::kHop;
  if (a.size() != expected) {
    return {false, std::to_string(a.size()) + " samples, expected " + std::to_string(expected)};
  }
  if (a.samples != b.samples) return {false, "same seed gave different audio"};
  for (double v : a.samples) {
    if (!std::isfinite(v)) return {false, "non-finite sample"};
  }
  return {true, std::to_string(expected) + " samples, repeatable"};
}

}  // namespace

std::vector<CheckResult> VerifyRun(const std::filesystem::path& run_dir, const CheckObserver& observer) {
  Runner runner(observer);
  runner.Run("manifest", [&] { return CheckManifest(run_dir); });

  std::optional<codec::Pipeline> pipeline;
  runner.Run("load", [&]() -> Outcome {
    pipeline.emplace(codec::Pipeline::Load(run_dir));
    const auto& c = pipeline->config();
    return {true, codec::ConfigLabel(c.cond_domain, c.out_domain)};
  });

  if (!pipeline) {
    for (const char* name : {"schedule", "gradients", "quantizer", "encode", "bitstream", "decode"}) {
      runner.Skip(name, "run did not load");
    }
    return runner.Take();
  }
  const auto& config = pipeline->config();

  runner.Run("schedule", [&]() -> Outcome {
    for (int steps : {config.T_train, config.T_sample}) {
      auto r = CheckSchedule(steps);
      if (!r.first) return r;
    }
    const auto expected = diffusion::ScheduleText(diffusion::MakeSchedule(config.T_sample));
    if (ReadText(run_dir / "schedule.txt") != expected) return {false, "schedule.txt does not match"};
    return {true, "T_train=" + std::to_string(config.T_train) + " T_sample=" + std::to_string(config.T_sample)};
  });

  for (const auto& [module, err] : pipeline->GradientChecks(kVerifySeed)) {
    const std::string name = "gradients/" + module;
    runner.Run(name, [&, err = err]() -> Outcome {
      return {std::isfinite(err) && err < kGradTolerance, "max relative error " + Num(err)};
    });
  }

  runner.Run("quantizer", [&] { return CheckQuantizer(pipeline->geometry()); });

  std::optional<bitstream::Bitstream> stream;
  runner.Run("encode", [&]() -> Outcome {
    const auto clip = codec::SyntheticUtterance(0);
    stream.emplace(pipeline->Encode(clip));
    return {true, std::to_string(stream->header.frames) + " frames"};
  });
  if (!stream) {
    runner.Skip("bitstream", "encode failed");
    runner.Skip("decode", "encode failed");
    return runner.Take();
  }
  runner.Run("bitstream", [&] { return CheckBitstream(*pipeline, *stream); });
  runner.Run("decode", [&] { return CheckDecode(*pipeline, *stream); });
  return runner.Take();
}

bool AllPassed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

}  // namespace dnsc::cli
