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

#include "eval/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <tuple>

#include "common/error.hpp"

namespace dnsc::eval {

namespace {

constexpr int kBootstrapResamples = 1000;

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void Summarize(MetricReport& report, std::uint64_t seed) {
  // Rows arrive grouped by cell; keep that order.
  std::vector<std::tuple<std::string, int, std::string>> keys;
  std::map<std::tuple<std::string, int, std::string>, std::vector<const MetricRow*>> groups;
  for (const auto& r : report.rows) {
    const auto key = std::make_tuple(r.config, r.bitrate_bps, r.variant);
    if (!groups.contains(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  for (const auto& key : keys) {
    const auto& rows = groups[key];
    std::vector<double> lsd, mcd, sdr;
    for (const MetricRow* r : rows) {
      lsd.push_back(r->lsd_db);
      mcd.push_back(r->mcd_db);
      sdr.push_back(r->si_sdr_db);
    }
    CellSummary s;
    std::tie(s.config, s.bitrate_bps, s.variant) = key;
    s.count = rows.size();
    s.lsd = BootstrapMean(lsd, kBootstrapResamples, seed);
    s.mcd = BootstrapMean(mcd, kBootstrapResamples, seed);
    s.si_sdr = BootstrapMean(sdr, kBootstrapResamples, seed);
    report.summary.push_back(s);
  }
}

}  // namespace

MetricRow ScoreUtterance(const signal::AudioClip& ref, const signal::AudioClip& decoded) {
  signal::AudioClip test = decoded;
  test.sample_rate = ref.sample_rate;
  test.samples.resize(ref.size(), 0.0);
  MetricRow row;
  row.lsd_db = Lsd(ref, test);
  row.mcd_db = Mcd(signal::ComputeMelSpectrogram(ref), signal::ComputeMelSpectrogram(test));
  row.si_sdr_db = SiSdr(ref.samples, test.samples);
  return row;
}

MetricReport RunMatrix(const std::vector<const codec::Pipeline*>& pipelines,
                       const codec::Corpus& corpus, std::uint64_t seed) {
  std::vector<const codec::Pipeline*> order = pipelines;
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::make_pair(a->config_id(), a->config().bitrate_bps) <
           std::make_pair(b->config_id(), b->config().bitrate_bps);
  });
  MetricReport report;
  for (const codec::Pipeline* p : order) {
    const std::string label = codec::ConfigLabel(p->config().cond_domain, p->config().out_domain);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto stream = p->Encode(corpus[i].clip);
      for (const char* variant : {"dm", "passthrough"}) {
        const bool dm = variant[0] == 'd';
        const signal::AudioClip decoded = dm ? p->Decode(stream, seed + i) : p->Passthrough(stream);
        MetricRow row = ScoreUtterance(corpus[i].clip, decoded);
        row.id = corpus[i].id;
        row.config = label;
        row.bitrate_bps = p->config().bitrate_bps;
        row.variant = variant;
        report.rows.push_back(row);
      }
    }
  }
  Summarize(report, seed);
  return report;
}

MetricReport RunMatrix(const std::vector<std::filesystem::path>& run_dirs,
                       const codec::Corpus& corpus, std::uint64_t seed) {
  std::vector<codec::Pipeline> loaded;
  std::vector<AbsentCell> absent;
  for (const auto& dir : run_dirs) {
    try {
      loaded.push_back(codec::Pipeline::Load(dir));
    } catch (const Error& e) {
      absent.push_back({dir.string(), e.what()});
    }
  }
  std::vector<const codec::Pipeline*> ptrs;
  for (const auto& p : loaded) ptrs.push_back(&p);
  MetricReport report = RunMatrix(ptrs, corpus, seed);
  report.absent = std::move(absent);
  return report;
}

std::string CsvText(const MetricReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : report.rows) {
    out += r.id + "," + r.config + "," + std::to_string(r.bitrate_bps) + "," + r.variant + "," +
           Fixed(r.lsd_db) + "," + Fixed(r.mcd_db) + "," + Fixed(r.si_sdr_db) + "\n";
  }
  return out;
}

std::string SummaryText(const MetricReport& report) {
  std::string out = std::string("# ") + kSurrogateNote + "\n";
  out += "# Intervals: percentile bootstrap of the mean, 1000 resamples, 95%.\n";
  out += "config,bitrate_bps,variant,n,lsd_db,lsd_lo,lsd_hi,mcd_db,mcd_lo,mcd_hi,si_sdr_db,si_sdr_lo,si_sdr_hi\n";
  for (const auto& s : report.summary) {
    out += s.config + "," + std::to_string(s.bitrate_bps) + "," + s.variant + "," +
           std::to_string(s.count);
    for (const Interval& i : {s.lsd, s.mcd, s.si_sdr}) {
      out += "," + Fixed(i.mean) + "," + Fixed(i.lower) + "," + Fixed(i.upper);
    }
    out += "\n";
  }
  for (const auto& a : report.absent) out += "# absent: " + a.run + ": " + a.reason + "\n";
  return out;
}

}  // namespace dnsc::eval
