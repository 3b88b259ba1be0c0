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

#ifndef DNSC_EVAL_HARNESS_HPP_
#define DNSC_EVAL_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "codec/corpus.hpp"
#include "codec/pipeline.hpp"
#include "eval/metrics.hpp"

namespace dnsc::eval {

inline constexpr const char* kCsvHeader = "id,config,bitrate_bps,variant,lsd_db,mcd_db,si_sdr_db";

// Printed with every report: the metrics here are local objective stand-ins.
inline constexpr const char* kSurrogateNote =
    "LSD, MCD and SI-SDR are objective surrogates computed by this tool. They are not "
    "ViSQOL or SCOREQ scores and their config rankings are not calibrated against them.";

struct MetricRow {
  std::string id;
  std::string config;
  int bitrate_bps = 0;
  std::string variant;  // "dm" or "passthrough"
  double lsd_db = 0.0;
  double mcd_db = 0.0;
  double si_sdr_db = 0.0;
};

struct CellSummary {
  std::string config;
  int bitrate_bps = 0;
  std::string variant;
  std::size_t count = 0;
  Interval lsd, mcd, si_sdr;
};

struct AbsentCell {
  std::string run;
  std::string reason;
};

struct MetricReport {
  std::vector<MetricRow> rows;
  std::vector<CellSummary> summary;
  std::vector<AbsentCell> absent;
};

// One decoded utterance against its reference; the decoded clip is cut to the
// reference length.
MetricRow ScoreUtterance(const signal::AudioClip& ref, const signal::AudioClip& decoded);

// Codes every utterance through every pipeline, once with the denoiser
// ("dm", decode seed `seed` + utterance index) and once as quantized
// passthrough. Rows are ordered by (config id, bit rate, utterance, variant).
MetricReport RunMatrix(const std::vector<const codec::Pipeline*>& pipelines,
                       const codec::Corpus& corpus, std::uint64_t seed);

// Same over run directories. A directory that fails to load is listed as
// absent and the run continues.
MetricReport RunMatrix(const std::vector<std::filesystem::path>& run_dirs,
                       const codec::Corpus& corpus, std::uint64_t seed);

// Fixed column order, header row, LF line endings.
std::string CsvText(const MetricReport& report);
// Note, per-cell means with bootstrap 95% intervals, absent cells.
std::string SummaryText(const MetricReport& report);

}  // namespace dnsc::eval

#endif  // DNSC_EVAL_HARNESS_HPP_
