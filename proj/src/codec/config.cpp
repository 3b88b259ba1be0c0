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

#include "codec/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "common/error.hpp"
#include "quantizer/bitrate.hpp"

namespace dnsc::codec {

namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    Fail(ErrorKind::kConfig, "bad value '" + value + "' for " + key);
  }
  return out;
}

std::string FormatDouble(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

constexpr std::pair<Domain, Domain> kCells[] = {
    {Domain::kMel, Domain::kWav}, {Domain::kLat, Domain::kWav}, {Domain::kMel, Domain::kMel},
    {Domain::kLat, Domain::kMel}, {Domain::kMel, Domain::kLat}, {Domain::kLat, Domain::kLat},
};

}  // namespace

const char* DomainName(Domain domain) {
  switch (domain) {
    case Domain::kWav: return "wav";
    case Domain::kMel: return "mel";
    case Domain::kLat: return "lat";
  }
  return "?";
}

Domain ParseDomain(const std::string& name) {
  if (name == "wav") return Domain::kWav;
  if (name == "mel") return Domain::kMel;
  if (name == "lat") return Domain::kLat;
  Fail(ErrorKind::kConfig, "unknown domain '" + name + "' (expected wav, mel or lat)");
}

int ConfigId(Domain cond, Domain out) {
  for (int i = 0; i < 6; ++i) {
    if (kCells[i].first == cond && kCells[i].second == out) return i;
  }
  Fail(ErrorKind::kConfig, std::string("conditioning on ") + DomainName(cond) +
                               " is not supported: a waveform is too large to transmit at low "
                               "bit rates");
}

std::pair<Domain, Domain> DomainsOf(int config_id) {
  Require(config_id >= 0 && config_id < 6, ErrorKind::kFormat,
          "config id " + std::to_string(config_id) + " out of range");
  return kCells[config_id];
}

std::string ConfigLabel(Domain cond, Domain out) {
  return std::string(DomainName(cond)) + "2" + DomainName(out);
}

std::size_t EffectiveWidth(const CodecConfig& config) {
  if (config.width != 0) return config.width;
  return config.out_domain == Domain::kWav ? 32 : 64;
}

void Validate(const CodecConfig& c) {
  ConfigId(c.cond_domain, c.out_domain);
  const quantizer::BitrateSpec spec{c.bitrate_bps};
  quantizer::PlanBitrate(spec, 80);
  if (c.out_domain == Domain::kLat) quantizer::PlanBitrate({c.target_bps}, 80);
  Require(c.T_train >= 1 && c.T_sample >= 1, ErrorKind::kConfig, "T_train and T_sample must be >= 1");
  Require(c.steps >= 0 && c.codec_steps >= 0 && c.decoder_steps >= 0 && c.finetune_steps >= 0,
          ErrorKind::kConfig, "step counts must be >= 0");
  Require(c.lambda >= 0.0, ErrorKind::kConfig, "lambda must be >= 0");
  Require(c.lr > 0.0, ErrorKind::kConfig, "lr must be > 0");
  Require(c.blocks >= 1, ErrorKind::kConfig, "blocks must be >= 1");
  Require(c.crop_frames >= 1, ErrorKind::kConfig, "crop_frames must be >= 1");
  Require(!c.corpus_glob.empty(), ErrorKind::kConfig, "corpus_glob is empty");
}

void SetConfigValue(CodecConfig& c, const std::string& key, const std::string& value) {
  if (key == "cond_domain") {
    c.cond_domain = ParseDomain(value);
  } else if (key == "out_domain") {
    c.out_domain = ParseDomain(value);
  } else if (key == "bitrate_bps") {
    c.bitrate_bps = ParseNumber<int>(key, value);
  } else if (key == "T_train") {
    c.T_train = ParseNumber<int>(key, value);
  } else if (key == "T_sample") {
    c.T_sample = ParseNumber<int>(key, value);
  } else if (key == "steps") {
    c.steps = ParseNumber<long>(key, value);
  } else if (key == "seed") {
    c.seed = ParseNumber<std::uint64_t>(key, value);
  } else if (key == "corpus_glob") {
    c.corpus_glob = value;
  } else if (key == "param") {
    c.param = diffusion::ParseParameterization(value);
  } else if (key == "lambda") {
    c.lambda = ParseNumber<double>(key, value);
  } else if (key == "width") {
    c.width = ParseNumber<std::size_t>(key, value);
  } else if (key == "blocks") {
    c.blocks = ParseNumber<std::size_t>(key, value);
  } else if (key == "lr") {
    c.lr = ParseNumber<double>(key, value);
  } else if (key == "crop_frames") {
    c.crop_frames = ParseNumber<std::size_t>(key, value);
  } else if (key == "sampler_variance") {
    if (value == "posterior") {
      c.sampler_variance = SamplerVariance::kPosterior;
    } else if (value == "calibrated") {
      c.sampler_variance = SamplerVariance::kCalibrated;
    } else {
      Fail(ErrorKind::kConfig, "sampler_variance must be posterior or calibrated");
    }
  } else if (key == "codec_steps") {
    c.codec_steps = ParseNumber<long>(key, value);
  } else if (key == "target_bps") {
    c.target_bps = ParseNumber<int>(key, value);
  } else if (key == "vocoder") {
    if (value == "learned") {
      c.vocoder = VocoderKind::kLearned;
    } else if (value == "griffin_lim") {
      c.vocoder = VocoderKind::kGriffinLim;
    } else {
      Fail(ErrorKind::kConfig, "vocoder must be learned or griffin_lim");
    }
  } else if (key == "decoder_steps") {
    c.decoder_steps = ParseNumber<long>(key, value);
  } else if (key == "finetune_steps") {
    c.finetune_steps = ParseNumber<long>(key, value);
  } else {
    Fail(ErrorKind::kUsage, "unknown config key '" + key + "'");
  }
}

CodecConfig ParseConfig(const std::string& text) {
  CodecConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorKind::kUsage, "config line " + std::to_string(line_no) + " has no '='");
    }
    SetConfigValue(c, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  Validate(c);
  return c;
}

CodecConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) Fail(ErrorKind::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseConfig(ss.str());
}

std::string ConfigText(const CodecConfig& c) {
  std::ostringstream os;
  os << "cond_domain = " << DomainName(c.cond_domain) << "\n"
     << "out_domain = " << DomainName(c.out_domain) << "\n"
     << "bitrate_bps = " << c.bitrate_bps << "\n"
     << "T_train = " << c.T_train << "\n"
     << "T_sample = " << c.T_sample << "\n"
     << "steps = " << c.steps << "\n"
     << "seed = " << c.seed << "\n"
     << "corpus_glob = " << c.corpus_glob << "\n"
     << "param = " << diffusion::ParameterizationName(c.param) << "\n"
     << "lambda = " << FormatDouble(c.lambda) << "\n"
     << "width = " << c.width << "\n"
     << "blocks = " << c.blocks << "\n"
     << "lr = " << FormatDouble(c.lr) << "\n"
     << "crop_frames = " << c.crop_frames << "\n"
     << "sampler_variance = "
     << (c.sampler_variance == SamplerVariance::kCalibrated ? "calibrated" : "posterior") << "\n"
     << "codec_steps = " << c.codec_steps << "\n"
     << "target_bps = " << c.target_bps << "\n"
     << "vocoder = " << (c.vocoder == VocoderKind::kGriffinLim ? "griffin_lim" : "learned") << "\n"
     << "decoder_steps = " << c.decoder_steps << "\n"
     << "finetune_steps = " << c.finetune_steps << "\n";
  return os.str();
}

std::vector<CodecConfig> EnumerateConfigs() {
  std::vector<CodecConfig> out;
  for (const auto& [cond, outd] : kCells) {
    CodecConfig c;
    c.cond_domain = cond;
    c.out_domain = outd;
    out.push_back(c);
  }
  return out;
}

}  // namespace dnsc::codec
