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

// Command-line front end over the C interface.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnsc/dnsc.h"

namespace {

int Finish(dnsc_status status, const char* what) {
  if (status != DNSC_OK) {
    std::fprintf(stderr, "dnsc %s: %s\n", what, dnsc_last_error());
  }
  return dnsc_exit_code(status);
}

struct Progress {
  long every = 250;
};

void PrintProgress(void* user, const char* stage, long step, double loss) {
  const auto* p = static_cast<const Progress*>(user);
  if (p->every > 0 && step % p->every == 0) {
    std::fprintf(stderr, "%-12s step %7ld  loss %.6f\n", stage, step, loss);
  }
}

void PrintCheck(void*, const char* name, int passed, const char* detail) {
  std::printf("%s %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
  std::fflush(stdout);
}

std::string JoinArgs(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

// Opens run_dir, reporting failures the same way as the other commands.
dnsc_codec* OpenOrReport(const std::string& run_dir, int* exit_code) {
  dnsc_codec* codec = nullptr;
  const dnsc_status s = dnsc_open(run_dir.c_str(), &codec);
  if (s != DNSC_OK) *exit_code = Finish(s, "open");
  return codec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion-enhanced neural speech codec"};
  app.require_subcommand(1);

  std::string config_path, out, run_dir, input, runs_glob, corpus = "builtin";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  int steps = 0;
  long train_steps = -1;
  long long train_seed = -1;
  Progress progress;

  auto* train = app.add_subcommand("train", "Train one cell into a run directory");
  train->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out, "Run directory")->required();
  train->add_option("--seed", train_seed, "Override the config seed")->check(CLI::NonNegativeNumber);
  train->add_option("--steps", train_steps, "Override denoiser training steps")->check(CLI::NonNegativeNumber);
  train->add_option("--set", overrides, "Extra key=value config override");
  train->add_option("--log-every", progress.every, "Progress interval in steps (0 silences)");

  auto* encode = app.add_subcommand("encode", "Encode a 16 kHz WAV file");
  encode->add_option("run_dir", run_dir, "Run directory")->required();
  encode->add_option("input", input, "Input WAV")->required();
  encode->add_option("--out", out, "Output stream file")->required();

  auto* decode = app.add_subcommand("decode", "Decode a stream file to WAV");
  decode->add_option("run_dir", run_dir, "Run directory")->required();
  decode->add_option("input", input, "Input stream file")->required();
  decode->add_option("--out", out, "Output WAV")->required();
  decode->add_option("--seed", seed, "Sampling seed");
  decode->add_option("--steps", steps, "Sampling steps (0 = trained value)")->check(CLI::NonNegativeNumber);

  auto* matrix = app.add_subcommand("matrix", "Score run directories on a corpus");
  matrix->add_option("runs", runs_glob, "Glob of run directories")->required();
  matrix->add_option("corpus", corpus, "Corpus glob or builtin[:N]");
  matrix->add_option("--out", out, "Output CSV")->required();
  matrix->add_option("--seed", seed, "Decode seed");

  auto* verify = app.add_subcommand("verify", "Run property checks on a run directory");
  verify->add_option("run_dir", run_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*train) {
    if (train_seed >= 0) overrides.push_back("seed=" + std::to_string(train_seed));
    if (train_steps >= 0) overrides.push_back("steps=" + std::to_string(train_steps));
    std::vector<const char*> raw;
    for (const auto& o : overrides) raw.push_back(o.c_str());
    const std::string command_line = JoinArgs(argc, argv);
    dnsc_train_options options{};
    options.overrides = raw.data();
    options.override_count = raw.size();
    options.command_line = command_line.c_str();
    options.progress = PrintProgress;
    options.progress_user = &progress;
    return Finish(dnsc_train(config_path.c_str(), out.c_str(), &options), "train");
  }
  if (*encode || *decode) {
    int rc = 0;
    dnsc_codec* codec = OpenOrReport(run_dir, &rc);
    if (!codec) return rc;
    const dnsc_status s = *encode ? dnsc_encode_file(codec, input.c_str(), out.c_str())
                                  : dnsc_decode_file(codec, input.c_str(), out.c_str(), seed, steps);
    dnsc_close(codec);
    return Finish(s, *encode ? "encode" : "decode");
  }
  if (*matrix) {
    return Finish(dnsc_matrix(runs_glob.c_str(), corpus.c_str(), seed, out.c_str()), "matrix");
  }
  int all_passed = 0;
  const dnsc_status s = dnsc_verify(run_dir.c_str(), PrintCheck, nullptr, &all_passed);
  if (s != DNSC_OK) return Finish(s, "verify");
  if (!all_passed) {
    std::fprintf(stderr, "dnsc verify: one or more checks failed\n");
    return 1;
  }
  return 0;
}
