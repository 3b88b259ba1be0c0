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

#ifndef DNSC_CLI_MANIFEST_HPP_
#define DNSC_CLI_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "codec/corpus.hpp"

namespace dnsc::cli {

inline constexpr const char* kManifestName = "manifest.json";

struct RunInputs {
  std::string command_line;
  std::string config_file;  // as read from disk
  std::string config_text;  // effective config after overrides
  std::uint64_t seed = 0;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  std::string status = "complete";
};

// Git blob hash over the canonical config text and every corpus sample.
std::string InputsHash(const std::string& config_text, const codec::Corpus& corpus);

// Git blob hashes of every regular file in the run directory except the
// manifest, keyed by file name.
std::map<std::string, std::string> ArtifactChecksums(const std::filesystem::path& run_dir);

// Writes <run_dir>/manifest.json. Only the timestamps vary between reruns
// with identical inputs.
void WriteManifest(const std::filesystem::path& run_dir, const RunInputs& inputs,
                   const std::string& inputs_hash);

// Artifact checksums recorded in the manifest; format error if malformed.
std::map<std::string, std::string> ReadManifestChecksums(const std::filesystem::path& run_dir);

std::string UtcNow();

}  // namespace dnsc::cli

#endif  // DNSC_CLI_MANIFEST_HPP_
