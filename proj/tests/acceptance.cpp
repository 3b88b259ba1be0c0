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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Trains a full mel-to-mel cell, so it takes minutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bitstream/bitstream.hpp"
#include "codec/config.hpp"
#include "codec/corpus.hpp"
#include "codec/networks.hpp"
#include "codec/pipeline.hpp"
#include "common/bytes.hpp"
#include "common/error.hpp"
#include "diffusion/process.hpp"
#include "diffusion/schedule.hpp"
#include "eval/harness.hpp"
#include "nn/autograd.hpp"
#include "nn/denoiser.hpp"
#include "nn/layers.hpp"
#include "nn/optim.hpp"
#include "quantizer/bitrate.hpp"
#include "quantizer/rvq.hpp"
#include "quantizer/scalar.hpp"
#include "signal/audio.hpp"
#include "training_util.hpp"

using namespace dnsc;
namespace fs = std::filesystem;
using nn::Tensor;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

Tensor RandomNormal(nn::Shape shape, nn::Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> g(0.0, scale);
  for (double& v : t.data()) v = g(rng);
  return t;
}

fs::path Scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "dnsc_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// --- 1: Gaussian sampling oracle --------------------------------------------

Verdict GaussianOracle() {
  const auto start = std::chrono::steady_clock::now();
  const double mu = 0.5, sigma = 0.3, s2 = sigma * sigma;
  const std::size_t dims = 8, n = 10000;
  const auto schedule = diffusion::MakeSchedule(100);
  // E[x0 | x_t] for x0 ~ N(mu, s2).
  const diffusion::Denoiser posterior_mean = [&](const nn::Var& x_t, const nn::Var&,
                                                  const diffusion::TimeStep& step) {
    const double a = step.a, b2 = step.b * step.b;
    Tensor x0(x_t.shape());
    for (std::size_t i = 0; i < x0.size(); ++i) {
      x0[i] = (a * s2 * x_t.value()[i] + b2 * mu) / (a * a * s2 + b2);
    }
    return nn::Constant(x0);
  };
  const nn::Var none = nn::Constant(Tensor({1, 1}, 0.0));
  const diffusion::DataDraw draw = [&](nn::Rng& rng) {
    Tensor x0({dims, 1000});
    std::normal_distribution<double> g(mu, sigma);
    for (double& v : x0.data()) v = g(rng);
    return std::make_pair(x0, none);
  };
  const auto variance = diffusion::CalibrateX0ErrorVariance(
      posterior_mean, schedule, diffusion::Parameterization::kX0, draw, 4, 101);
  const Tensor x = diffusion::Sample(posterior_mean, none, schedule, {dims, n}, 102,
                                     diffusion::Parameterization::kX0, &variance);
  double worst_mean = 0.0, worst_var = 0.0;
  for (std::size_t r = 0; r < dims; ++r) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x.at(r, i);
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (x.at(r, i) - mean) * (x.at(r, i) - mean);
    var /= n - 1;
    worst_mean = std::max(worst_mean, std::abs(mean - mu));
    worst_var = std::max(worst_var, std::abs(var - s2) / s2);
  }
  const double elapsed = Seconds(start);
  const double mean_bound = 4.0 * sigma / std::sqrt(static_cast<double>(n));
  return {worst_mean < mean_bound && worst_var < 0.05 && elapsed < 60.0,
          Fmt("max |mean-mu| %.4f (< %.4f), max rel var error %.4f (< 0.05), %.1f s", worst_mean,
              mean_bound, worst_var, elapsed)};
}

// --- 2: forward prior -------------------------------------------------------

Verdict ForwardPrior() {
  const auto s = diffusion::MakeSchedule(1000);
  double identity = 0.0;
  for (int t = 0; t <= s.steps; ++t) identity = std::max(identity, std::abs(s.a[t] * s.a[t] + s.b[t] * s.b[t] - 1.0));
  const std::size_t dims = 4, n = 100000;
  Tensor x0({dims, n}, 0.0);
  for (std::size_t i = 0; i < n; ++i) x0.at(0, i) = 1.0;
  nn::Rng rng(202);
  const Tensor x = diffusion::ForwardSample(x0, 1000, RandomNormal({dims, n}, rng), s);
  double worst_mean = 0.0, worst_var = 0.0;
  for (std::size_t r = 0; r < dims; ++r) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x.at(r, i);
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (x.at(r, i) - mean) * (x.at(r, i) - mean);
    var /= n - 1;
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_var = std::max(worst_var, std::abs(var - 1.0));
  }
  return {worst_mean < 0.02 && worst_var < 0.05 && identity <= 1e-12,
          Fmt("max |mean| %.4f, max |var-1| %.4f, max |a^2+b^2-1| %.2e", worst_mean, worst_var, identity)};
}

// --- 3: gradient checks -----------------------------------------------------

Verdict GradientChecks() {
  constexpr std::size_t kMinCoordinates = 200;
  nn::Rng rng(303);
  double worst = 0.0;
  std::string worst_name;
  int cases = 0;
  std::string undersized;
  auto record = [&](const std::string& name, double err) {
    ++cases;
    if (!(err <= worst)) {
      worst = err;
      worst_name = name;
    }
  };
  auto run = [&](const std::string& name, nn::Shape in_shape, auto make_layer) {
    nn::ParameterSet params;
    auto x = params.Add("x", RandomNormal(in_shape, rng));
    auto layer = make_layer(params);
    if (params.TotalSize() < kMinCoordinates) undersized += " " + name;
    const Tensor w = RandomNormal(layer(nn::Leaf(x)).shape(), rng);
    record(name, nn::GradCheck(params, [&] { return nn::Sum(nn::Mul(layer(nn::Leaf(x)), nn::Constant(w))); },
                               {1e-5, 400, 7}));
  };
  run("linear", {16, 16}, [&](nn::ParameterSet& p) { return nn::LinearLayer(p, "l", 16, 8, rng); });
  run("conv1d", {6, 40}, [&](nn::ParameterSet& p) { return nn::Conv1dLayer(p, "c", 6, 5, 3, rng); });
  run("conv1d dilated", {6, 40}, [&](nn::ParameterSet& p) { return nn::Conv1dLayer(p, "c", 6, 5, 3, rng, 1, 4); });
  run("conv1d strided", {4, 64}, [&](nn::ParameterSet& p) { return nn::Conv1dLayer(p, "c", 4, 6, 8, rng, 4, 1, 2); });
  run("conv transpose", {6, 16}, [&](nn::ParameterSet& p) { return nn::ConvTranspose1dLayer(p, "t", 6, 4, 8, 4, 2, rng); });
  for (auto [name, act] : {std::pair{"silu", nn::Activation::kSilu}, std::pair{"tanh", nn::Activation::kTanh},
                           std::pair{"elu", nn::Activation::kElu}}) {
    run(name, {8, 32}, [act](nn::ParameterSet&) { return [act](const nn::Var& v) { return nn::Activate(v, act); }; });
  }
  run("relu", {8, 32}, [&](nn::ParameterSet& p) {
    for (double& v : p.Get("x")->value.data()) v = v >= 0 ? v + 0.1 : v - 0.1;
    return [](const nn::Var& v) { return nn::Activate(v, nn::Activation::kRelu); };
  });
  run("bias concat repeat", {6, 20}, [&](nn::ParameterSet& p) {
    auto b = p.Add("b", RandomNormal({6}, rng));
    auto o = p.Add("o", RandomNormal({4, 20}, rng));
    return [b, o](const nn::Var& v) {
      return nn::RepeatTime(nn::ConcatChannels(nn::AddChannelBias(v, nn::Leaf(b)), nn::Leaf(o)), 3);
    };
  });
  run("sub scale clamp", {8, 20}, [&](nn::ParameterSet& p) {
    auto q = p.Add("q", RandomNormal({8, 20}, rng));
    return [q](const nn::Var& v) { return nn::Clamp(nn::Scale(nn::Sub(v, nn::Leaf(q)), 0.3), -0.5, 0.5); };
  });
  run("mse mae", {8, 20}, [&](nn::ParameterSet& p) {
    auto q = p.Add("q", RandomNormal({8, 20}, rng));
    return [q](const nn::Var& v) {
      return nn::Add(nn::MeanSquaredError(v, nn::Leaf(q)), nn::MeanAbsoluteError(v, nn::Leaf(q)));
    };
  });
  for (std::size_t upsample : {std::size_t{1}, std::size_t{4}}) {
    nn::ParameterSet params;
    nn::DenoiserSpec spec;
    spec.data_channels = upsample == 1 ? 6 : 1;
    spec.cond_channels = 5;
    spec.upsample = upsample;
    spec.width = 8;
    spec.blocks = 3;
    spec.time_dim = 8;
    nn::ResidualDenoiser net(spec, params, "dn.", rng);
    const Tensor x = RandomNormal({spec.data_channels, 12 * upsample}, rng);
    const Tensor z = RandomNormal({5, 12}, rng);
    const Tensor w = RandomNormal({spec.data_channels, 12 * upsample}, rng);
    record(upsample == 1 ? "denoiser frame rate" : "denoiser sample rate",
           nn::GradCheck(params,
                         [&] { return nn::Sum(nn::Mul(net.Forward(nn::Constant(x), nn::Constant(z), 0.37),
                                                       nn::Constant(w))); },
                         {1e-5, 400, 11}));
  }
  // Codec modules as built for a run: encoder, quantizer projections, decoders.
  for (const auto& [cond, out] : {std::pair{codec::Domain::kMel, codec::Domain::kMel},
                                  std::pair{codec::Domain::kLat, codec::Domain::kLat}}) {
    codec::CodecConfig c;
    c.cond_domain = cond;
    c.out_domain = out;
    codec::Pipeline p(c);
    for (const auto& [name, err] : p.GradientChecks(304, 400)) record(codec::ConfigLabel(cond, out) + "/" + name, err);
  }
  const bool ok = worst < 1e-4 && undersized.empty();
  return {ok, Fmt("%d checks, worst %.2e (%s)%s", cases, worst, worst_name.c_str(),
                  undersized.empty() ? "" : (" undersized:" + undersized).c_str())};
}

// --- 4: quantizer bounds ----------------------------------------------------

Verdict QuantizerBounds() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const std::size_t dim = 8;
  double worst_slack = -1.0;
  bool round_trip = true;
  for (int levels : {3, 5, 8, 16}) {
    const auto sq = quantizer::ScalarQuantizer::Identity(dim, levels);
    const double half = sq.geometry().step() / 2.0;
    std::vector<double> x(dim);
    for (int n = 0; n < 100000; ++n) {
      for (double& v : x) v = u(rng);
      const auto idx = sq.QuantizeFrame(x);
      const auto y = sq.DequantizeFrame(idx);
      for (std::size_t d = 0; d < dim; ++d) {
        worst_slack = std::max(worst_slack, std::abs(y[d] - std::clamp(x[d], -1.0, 1.0)) - half);
      }
    }
    std::vector<std::uint32_t> idx(dim);
    for (int n = 0; n < 2000; ++n) {
      for (auto& i : idx) i = static_cast<std::uint32_t>(rng() % levels);
      round_trip = round_trip && sq.QuantizeFrame(sq.DequantizeFrame(idx)) == idx;
    }
  }
  std::normal_distribution<double> g;
  Tensor data({2000, 6});
  for (double& v : data.data()) v = g(rng);
  const auto rvq = quantizer::ResidualVq::Fit(data, 4, 16, 10, 405);
  int increases = 0;
  for (int n = 0; n < 10000; ++n) {
    std::vector<double> x(6);
    for (double& v : x) v = g(rng);
    double previous = 0.0;
    for (double v : x) previous += v * v;
    for (std::size_t k = 1; k <= rvq.stages(); ++k) {
      const auto y = rvq.Dequantize(rvq.Quantize(x, k));
      double err = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) err += (x[i] - y[i]) * (x[i] - y[i]);
      increases += err > previous + 1e-12;
      previous = err;
    }
  }
  return {worst_slack <= 1e-12 && round_trip && increases == 0,
          Fmt("worst error minus half step %.2e, index round trip %s, RVQ stage increases %d", worst_slack,
              round_trip ? "exact" : "BROKEN", increases)};
}

// --- 5: bitrate ledger ------------------------------------------------------

Verdict BitrateLedger() {
  auto bits = [](int bps) { return quantizer::BitrateSpec{bps, 16000, 256}.bits_per_frame(); };
  const auto g = quantizer::PlanBitrate({3000, 16000, 256}, 80);
  const std::size_t frames = codec::FramesFor(16000);
  bitstream::Header h;
  h.config_id = 2;
  h.target_bps = 3000;
  h.bits_per_dim = static_cast<std::uint8_t>(g.bits_per_dim());
  const auto bytes = bitstream::Serialize(bitstream::Encode(h, IndexMatrix(frames, g.code_dim)));
  const bool ok = bits(3000) == 48 && g.bits_per_frame() == 48 && bits(1500) == 24 && bits(6000) == 96 &&
                  frames == 63 && bytes.size() == 404 && bitstream::kHeaderBytes == 22 && bitstream::kCrcBytes == 4;
  return {ok, Fmt("bits/frame 1.5k %zu, 3k %zu, 6k %zu; 1 s stream %zu frames, %zu bytes", bits(1500), bits(3000),
                  bits(6000), frames, bytes.size())};
}

// --- 6: bitstream robustness ------------------------------------------------

Verdict BitstreamRobustness() {
  std::mt19937_64 rng(606);
  IndexMatrix m(63, 16);
  for (auto& v : m.data) v = static_cast<std::uint32_t>(rng() % 8);
  bitstream::Header h;
  h.config_id = 2;
  h.target_bps = 3000;
  h.bits_per_dim = 3;
  const auto stream = bitstream::Encode(h, m);
  const auto bytes = bitstream::Serialize(stream);
  const auto back = bitstream::Parse(bytes);
  const bool exact = back == stream && bitstream::Decode(back) == m && bitstream::Serialize(back) == bytes;
  std::size_t undetected_flips = 0;
  for (std::size_t bit = 0; bit < bytes.size() * 8; ++bit) {
    auto flipped = bytes;
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      bitstream::Parse(flipped);
      ++undetected_flips;
    } catch (const Error&) {
    }
  }
  std::size_t undetected_cuts = 0;
  for (std::size_t keep = 0; keep < bytes.size(); ++keep) {
    try {
      bitstream::Parse(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(keep)));
      ++undetected_cuts;
    } catch (const Error& e) {
      undetected_cuts += e.kind() != ErrorKind::kTruncation;
    }
  }
  return {exact && undetected_flips == 0 && undetected_cuts == 0,
          Fmt("round trip %s; %zu bit flips, %zu undetected; %zu truncations, %zu undetected",
              exact ? "byte exact" : "DIFFERS", bytes.size() * 8, undetected_flips, bytes.size(), undetected_cuts)};
}

// --- 7 and 10: six-cell smoke runs ------------------------------------------

codec::CodecConfig SmokeConfig(codec::CodecConfig c) {
  c.steps = 200;
  c.codec_steps = 200;
  c.decoder_steps = 200;
  c.finetune_steps = 50;
  c.corpus_glob = "builtin:4";
  c.seed = 7;
  return c;
}

// Trains every cell into <root>/<label>, encodes and decodes a 1 s clip and
// scores the cells; returns the decoded WAV bytes and stream bytes per cell.
struct SmokeRun {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint8_t>> streams;
  std::vector<std::vector<std::uint8_t>> wavs;
  std::string csv;
};

SmokeRun TrainSmokeCells(const fs::path& root) {
  SmokeRun run;
  const auto clip = codec::SyntheticUtterance(40);
  std::vector<fs::path> dirs;
  for (const auto& base : codec::EnumerateConfigs()) {
    const auto c = SmokeConfig(base);
    const std::string label = codec::ConfigLabel(c.cond_domain, c.out_domain);
    const auto pipeline = codec::Pipeline::Train(c, codec::LoadCorpus(c.corpus_glob));
    pipeline.Save(root / label);
    const auto stream = pipeline.Encode(clip);
    run.labels.push_back(label);
    run.streams.push_back(bitstream::Serialize(stream));
    run.wavs.push_back(signal::SerializeWav(pipeline.Decode(stream, 9)));
    dirs.push_back(root / label);
  }
  run.csv = eval::CsvText(eval::RunMatrix(dirs, codec::LoadCorpus("builtin:2"), 3));
  return run;
}

const SmokeRun& FirstSmokeRun() {
  static const SmokeRun run = TrainSmokeCells(Scratch() / "smoke_a");
  return run;
}

Verdict SixConfigClosure() {
  const auto& run = FirstSmokeRun();
  std::string lengths;
  bool ok = run.labels.size() == 6;
  for (std::size_t i = 0; i < run.wavs.size(); ++i) {
    const auto clip = signal::ParseWav(run.wavs[i]);
    ok = ok && clip.size() == 16128 && run.streams[i].size() == 404;
    lengths += Fmt(" %s=%zu", run.labels[i].c_str(), clip.size());
  }
  bool rejected = false;
  try {
    codec::CodecConfig c;
    c.cond_domain = codec::Domain::kWav;
    codec::Pipeline p(c);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::kConfig;
  }
  return {ok && rejected, "samples" + lengths + (rejected ? "; wav conditioning rejected" : "; wav conditioning ACCEPTED")};
}

std::string FileBytes(const fs::path& p) {
  const auto b = ReadFileBytes(p);
  return std::string(b.begin(), b.end());
}

Verdict Determinism() {
  const auto& a = FirstSmokeRun();
  const SmokeRun b = TrainSmokeCells(Scratch() / "smoke_b");
  std::size_t files = 0, differing = 0;
  for (const auto& label : a.labels) {
    for (const auto& entry : fs::directory_iterator(Scratch() / "smoke_a" / label)) {
      ++files;
      const fs::path other = Scratch() / "smoke_b" / label / entry.path().filename();
      if (!fs::exists(other) || FileBytes(entry.path()) != FileBytes(other)) ++differing;
    }
  }
  const bool streams = a.streams == b.streams;
  const bool wavs = a.wavs == b.wavs;
  const bool csv = a.csv == b.csv;
  return {differing == 0 && streams && wavs && csv,
          Fmt("%zu checkpoint files, %zu differ; bitstreams %s; WAVs %s; CSV %s", files, differing,
              streams ? "identical" : "DIFFER", wavs ? "identical" : "DIFFER", csv ? "identical" : "DIFFERS")};
}

// --- 8 and 9: desk-scale mel-to-mel -----------------------------------------

struct MelCell {
  codec::Corpus corpus;
  std::unique_ptr<codec::Pipeline> pipeline;
  double train_seconds = 0.0;
};

const MelCell& TrainedMelToMel() {
  static const MelCell cell = [] {
    MelCell c;
    const codec::CodecConfig config;  // defaults: mel to mel, 5000 steps, builtin corpus
    c.corpus = codec::LoadCorpus(config.corpus_glob);
    const auto start = std::chrono::steady_clock::now();
    c.pipeline = std::make_unique<codec::Pipeline>(codec::Pipeline::Train(config, c.corpus));
    c.train_seconds = Seconds(start);
    c.pipeline->Save(Scratch() / "mel2mel");
    return c;
  }();
  return cell;
}

Verdict MelEnhancement() {
  const auto start = std::chrono::steady_clock::now();
  const auto& cell = TrainedMelToMel();
  double corpus_seconds = 0.0;
  for (const auto& u : cell.corpus) corpus_seconds += u.clip.duration_seconds();
  const auto trained = testing::MelEnhancement(*cell.pipeline, cell.corpus, 7);
  const auto control = testing::MelEnhancement(
      testing::WithUntrainedDenoiser(Scratch() / "mel2mel", Scratch() / "control"), cell.corpus, 7);
  const double elapsed = Seconds(start);
  const bool ok = corpus_seconds <= 60.0 && trained.win_fraction() >= 0.9 && control.win_fraction() < 0.9 &&
                  elapsed < 1800.0;
  return {ok, Fmt("trained %d/%d (LSD %.2f vs %.2f dB), untrained %d/%d, corpus %.0f s, %.0f s", trained.wins,
                  trained.total, trained.mean_dm_lsd, trained.mean_cond_lsd, control.wins, control.total,
                  corpus_seconds, elapsed)};
}

Verdict MatchedCondition() {
  const auto& cell = TrainedMelToMel();
  if (!cell.pipeline->has_finetuned_decoder()) return {false, "no fine-tuned decoder"};
  const auto paired = testing::MatchedVsPretrained(*cell.pipeline, cell.corpus, 1000);
  int better = 0;
  for (std::size_t i = 0; i < paired.matched.size(); ++i) better += paired.matched[i] >= paired.pretrained[i];
  return {paired.mean_difference() >= 0.0,
          Fmt("mean SI-SDR gain %+.2f dB, fine-tuned at least as good on %d/%zu", paired.mean_difference(), better,
              paired.matched.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"Gaussian sampling oracle", GaussianOracle},
      {"forward-prior convergence", ForwardPrior},
      {"gradient checks", GradientChecks},
      {"quantizer bounds", QuantizerBounds},
      {"bitrate ledger", BitrateLedger},
      {"bitstream robustness", BitstreamRobustness},
      {"six-config closure", SixConfigClosure},
      {"mel-to-mel enhancement", MelEnhancement},
      {"matched-condition decoder", MatchedCondition},
      {"determinism", Determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.passed;
    std::printf("%s %2zu %s: %s\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
