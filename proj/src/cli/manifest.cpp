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

#include "cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "json.hpp"

namespace dnsc::cli {

std::string InputsHash(const std::string& config_text, const codec::Corpus& corpus) {
  ByteWriter w;
  w.U64(config_text.size());
  w.Tag(config_text);
  for (const auto& u : corpus) {
    w.U64(u.id.size());
    w.Tag(u.id);
    w.U64(u.clip.samples.size());
    w.U32(static_cast<std::uint32_t>(u.clip.sample_rate));
    for (double v : u.clip.samples) w.F64(v);
  }
  return GitBlobHash(w.bytes());
}

std::map<std::string, std::string> ArtifactChecksums(const std::filesystem::path& run_dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == kManifestName) continue;
    out[name] = GitBlobHash(ReadFileBytes(entry.path()));
  }
  return out;
}

void WriteManifest(const std::filesystem::path& run_dir, const RunInputs& inputs,
                   const std::string& inputs_hash) {
  nlohmann::ordered_json j;
  j["command_line"] = inputs.command_line;
  j["config_file"] = inputs.config_file;
  j["config"] = inputs.config_text;
  j["seed"] = inputs.seed;
  j["inputs_hash"] = inputs_hash;
  j["artifacts"] = ArtifactChecksums(run_dir);
  j["started"] = inputs.started;
  j["finished"] = inputs.finished;
  j["status"] = inputs.status;
  const std::string text = j.dump(2) + "\n";
  WriteFileBytes(run_dir / kManifestName,
                 std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::map<std::string, std::string> ReadManifestChecksums(const std::filesystem::path& run_dir) {
  const auto bytes = ReadFileBytes(run_dir / kManifestName);
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    return j.at("artifacts").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("bad manifest: ") + e.what());
  }
}

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace dnsc::cli
