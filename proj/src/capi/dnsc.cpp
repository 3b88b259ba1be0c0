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

#include "dnsc/dnsc.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "bitstream/bitstream.hpp"
#include "cli/manifest.hpp"
#include "cli/verify.hpp"
#include "codec/config.hpp"
#include "codec/corpus.hpp"
#include "codec/pipeline.hpp"
#include "common/bytes.hpp"
#include "common/error.hpp"
#include "eval/harness.hpp"
#include "signal/audio.hpp"

struct dnsc_codec {
  dnsc::codec::Pipeline pipeline;
};

namespace {

namespace fs = std::filesystem;
using dnsc::ErrorKind;

thread_local std::string g_last_error;

dnsc_status Report(dnsc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into a status and the thread's message.
template <typename Fn>
dnsc_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return DNSC_OK;
  } catch (const dnsc::Error& e) {
    return Report(static_cast<dnsc_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return Report(DNSC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Report(DNSC_ERR_INTERNAL, e.what());
  } catch (...) {
    return Report(DNSC_ERR_INTERNAL, "unknown exception");
  }
}

#define DNSC_REQUIRE_ARG(cond, what) \
  if (!(cond)) return Report(DNSC_ERR_ARGUMENT, std::string("invalid argument: ") + (what))

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) dnsc::Fail(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <typename T>
T* CopyOut(const std::vector<T>& v) {
  T* out = static_cast<T*>(std::malloc(std::max<std::size_t>(1, v.size()) * sizeof(T)));
  if (!out) throw std::bad_alloc();
  if (!v.empty()) std::memcpy(out, v.data(), v.size() * sizeof(T));
  return out;
}

// Writes next to the destination and renames, so failures leave nothing.
template <typename WriteFn>
void WriteAtomically(const fs::path& dest, WriteFn&& write) {
  fs::path tmp = dest;
  tmp += ".partial";
  try {
    write(tmp);
    fs::rename(tmp, dest);
  } catch (...) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw;
  }
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  dnsc::WriteFileBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace

extern "C" {

const char* dnsc_status_name(dnsc_status status) {
  switch (status) {
    case DNSC_OK: return "ok";
    case DNSC_ERR_INTERNAL: return "internal";
    case DNSC_ERR_ARGUMENT: return "argument";
    default:
      if (status >= DNSC_ERR_CONFIG && status <= DNSC_ERR_USAGE) {
        return dnsc::ErrorKindName(static_cast<ErrorKind>(status));
      }
      return "unknown";
  }
}

const char* dnsc_last_error(void) { return g_last_error.c_str(); }

int dnsc_exit_code(dnsc_status status) {
  switch (status) {
    case DNSC_OK: return 0;
    case DNSC_ERR_TRAINING:
    case DNSC_ERR_NUMERIC:
    case DNSC_ERR_STRUCTURE:
    case DNSC_ERR_SHAPE:
    case DNSC_ERR_INDEX:
    case DNSC_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

void dnsc_free(void* ptr) { std::free(ptr); }

dnsc_status dnsc_train(const char* config_path, const char* out_dir, const dnsc_train_options* options) {
  DNSC_REQUIRE_ARG(config_path && out_dir, "config_path and out_dir are required");
  return Guard([&] {
    dnsc::cli::RunInputs inputs;
    inputs.started = dnsc::cli::UtcNow();
    inputs.config_file = ReadText(config_path);
    dnsc::codec::CodecConfig config = dnsc::codec::ParseConfig(inputs.config_file);
    dnsc::codec::ProgressFn progress;
    if (options) {
      for (std::size_t i = 0; i < options->override_count; ++i) {
        const std::string kv = options->overrides[i] ? options->overrides[i] : "";
        const auto eq = kv.find('=');
        dnsc::Require(eq != std::string::npos, ErrorKind::kUsage, "override '" + kv + "' is not key=value");
        dnsc::codec::SetConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (options->command_line) inputs.command_line = options->command_line;
      if (options->progress) {
        progress = [cb = options->progress, user = options->progress_user](const std::string& stage, long step,
                                                                           double loss) {
          cb(user, stage.c_str(), step, loss);
        };
      }
    }
    dnsc::codec::Validate(config);
    inputs.config_text = dnsc::codec::ConfigText(config);
    inputs.seed = config.seed;
    const auto corpus = dnsc::codec::LoadCorpus(config.corpus_glob);
    const std::string inputs_hash = dnsc::cli::InputsHash(inputs.config_text, corpus);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    fs::remove(dir / dnsc::cli::kManifestName);
    const auto save_stage = [&](const dnsc::codec::Pipeline& p, const std::string&) { p.Save(dir); };
    try {
      const auto pipeline = dnsc::codec::Pipeline::Train(config, corpus, progress, nullptr, save_stage);
      pipeline.Save(dir);
    } catch (const dnsc::Error& e) {
      inputs.finished = dnsc::cli::UtcNow();
      inputs.status = std::string("failed: ") + e.what();
      dnsc::cli::WriteManifest(dir, inputs, inputs_hash);
      throw;
    }
    inputs.finished = dnsc::cli::UtcNow();
    dnsc::cli::WriteManifest(dir, inputs, inputs_hash);
  });
}

dnsc_status dnsc_open(const char* run_dir, dnsc_codec** out) {
  DNSC_REQUIRE_ARG(run_dir && out, "run_dir and out are required");
  *out = nullptr;
  return Guard([&] { *out = new dnsc_codec{dnsc::codec::Pipeline::Load(run_dir)}; });
}

void dnsc_close(dnsc_codec* codec) { delete codec; }

dnsc_status dnsc_info(const dnsc_codec* codec, dnsc_codec_info* out) {
  DNSC_REQUIRE_ARG(codec && out, "codec and out are required");
  return Guard([&] {
    const auto& c = codec->pipeline.config();
    *out = dnsc_codec_info{};
    out->config_id = codec->pipeline.config_id();
    out->bitrate_bps = c.bitrate_bps;
    out->sample_rate = dnsc::codec::kSampleRate;
    out->hop = static_cast<int>(dnsc::codec::kHop);
    out->bits_per_frame = static_cast<int>(codec->pipeline.geometry().bits_per_frame());
    const std::string label = dnsc::codec::ConfigLabel(c.cond_domain, c.out_domain);
    std::snprintf(out->label, sizeof(out->label), "%s", label.c_str());
  });
}

dnsc_status dnsc_encode(const dnsc_codec* codec, const double* samples, size_t count, int sample_rate,
                        uint8_t** bytes, size_t* size) {
  DNSC_REQUIRE_ARG(codec && (samples || count == 0) && bytes && size, "null pointer");
  *bytes = nullptr;
  *size = 0;
  return Guard([&] {
    dnsc::signal::AudioClip clip;
    clip.samples.assign(samples, samples + count);
    clip.sample_rate = sample_rate;
    const auto out = dnsc::bitstream::Serialize(codec->pipeline.Encode(clip));
    *bytes = CopyOut(out);
    *size = out.size();
  });
}

dnsc_status dnsc_decode(const dnsc_codec* codec, const uint8_t* bytes, size_t size, uint64_t seed, int steps,
                        double** samples, size_t* count) {
  DNSC_REQUIRE_ARG(codec && (bytes || size == 0) && samples && count, "null pointer");
  DNSC_REQUIRE_ARG(steps >= 0, "steps must be non-negative");
  *samples = nullptr;
  *count = 0;
  return Guard([&] {
    const auto stream = dnsc::bitstream::Parse(std::vector<std::uint8_t>(bytes, bytes + size));
    const auto clip = codec->pipeline.Decode(stream, seed, steps);
    *samples = CopyOut(clip.samples);
    *count = clip.samples.size();
  });
}

dnsc_status dnsc_encode_file(const dnsc_codec* codec, const char* wav_path, const char* out_path) {
  DNSC_REQUIRE_ARG(codec && wav_path && out_path, "null pointer");
  return Guard([&] {
    const auto stream = codec->pipeline.Encode(dnsc::signal::LoadWav(wav_path));
    WriteAtomically(out_path, [&](const fs::path& tmp) { dnsc::bitstream::Write(stream, tmp); });
  });
}

dnsc_status dnsc_decode_file(const dnsc_codec* codec, const char* stream_path, const char* wav_path,
                             uint64_t seed, int steps) {
  DNSC_REQUIRE_ARG(codec && stream_path && wav_path, "null pointer");
  DNSC_REQUIRE_ARG(steps >= 0, "steps must be non-negative");
  return Guard([&] {
    const auto clip = codec->pipeline.Decode(dnsc::bitstream::Read(stream_path), seed, steps);
    WriteAtomically(wav_path, [&](const fs::path& tmp) { dnsc::signal::SaveWav(clip, tmp); });
  });
}

dnsc_status dnsc_matrix(const char* runs_glob, const char* corpus, uint64_t seed, const char* out_csv) {
  DNSC_REQUIRE_ARG(runs_glob && corpus && out_csv, "null pointer");
  return Guard([&] {
    std::vector<fs::path> dirs;
    for (const auto& p : dnsc::codec::GlobSorted(runs_glob)) {
      if (fs::is_directory(p)) dirs.emplace_back(p);
    }
    dnsc::Require(!dirs.empty(), ErrorKind::kIo, std::string("no run directories match '") + runs_glob + "'");
    const auto report = dnsc::eval::RunMatrix(dirs, dnsc::codec::LoadCorpus(corpus), seed);
    const fs::path csv(out_csv);
    fs::path summary = csv;
    summary += ".summary";
    WriteAtomically(csv, [&](const fs::path& tmp) { WriteTextFile(tmp, dnsc::eval::CsvText(report)); });
    WriteAtomically(summary, [&](const fs::path& tmp) { WriteTextFile(tmp, dnsc::eval::SummaryText(report)); });
  });
}

dnsc_status dnsc_verify(const char* run_dir, dnsc_check_fn on_check, void* user, int* all_passed) {
  DNSC_REQUIRE_ARG(run_dir && all_passed, "run_dir and all_passed are required");
  *all_passed = 0;
  return Guard([&] {
    dnsc::cli::CheckObserver observer;
    if (on_check) {
      observer = [&](const dnsc::cli::CheckResult& r) {
        on_check(user, r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str());
      };
    }
    const auto results = dnsc::cli::VerifyRun(run_dir, observer);
    *all_passed = dnsc::cli::AllPassed(results) ? 1 : 0;
  });
}

}  // extern "C"
