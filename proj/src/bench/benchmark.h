// Copyright 2026 The AIC Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef AIC_BENCH_BENCHMARK_H_
#define AIC_BENCH_BENCHMARK_H_

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "catalog/manifest.h"
#include "scale/bootstrap.h"
#include "scale/model_io.h"

namespace aic::bench {

struct StimulusKey {
  std::string source_id;
  std::string codec_id;
  int level = 0;
  auto operator<=>(const StimulusKey&) const = default;
};

enum class Polarity { kHigherIsBetter, kHigherIsWorse };

// Scores of one objective metric; std::nullopt marks an explicit "NA".
struct MetricScoreTable {
  std::string metric;
  Polarity polarity = Polarity::kHigherIsBetter;
  std::map<StimulusKey, std::optional<double>> scores;
};

// Tab-separated: header lines "# metric: <name>" and
// "# polarity: higher-is-better|higher-is-worse", then rows of
// source_id codec_id level score (score may be NA).
absl::StatusOr<MetricScoreTable> ParseScoreTable(const std::string& text,
                                                 const std::string& fallback_name);
absl::StatusOr<MetricScoreTable> LoadScoreTable(const std::filesystem::path& path);
std::string SerializeScoreTable(const MetricScoreTable& table);
// Every *.tsv / *.txt file in `dir`, sorted by file name.
absl::StatusOr<std::vector<MetricScoreTable>> LoadScoreDirectory(
    const std::filesystem::path& dir);

// Every manifest stimulus must have exactly one row (score or NA).
absl::Status CheckCoverage(const MetricScoreTable& table,
                           const catalog::StudyManifest& manifest);

using JndMap = std::map<StimulusKey, double>;

// d(actual_bpp) from each stimulus' fitted (source, codec) curve.
absl::StatusOr<JndMap> JndFromModels(const scale::ModelFile& models,
                                     const catalog::StudyManifest& manifest);
// Point estimates of a bands file interpolated at each stimulus bitrate.
absl::StatusOr<JndMap> JndFromBands(const std::vector<scale::RdCurveBand>& bands,
                                    const catalog::StudyManifest& manifest);

enum class GroupBy { kCodec, kSource };

struct GroupCorrelation {
  std::string group;
  size_t n = 0;
  double plcc = 0;
  double srcc = 0;
};

struct GroupedCorrelation {
  double mean_plcc = 0;
  double mean_srcc = 0;
  std::vector<GroupCorrelation> groups;
  std::vector<std::string> warnings;
};

// Per-group PLCC/SRCC and their unweighted means. Degenerate groups are
// reported in `warnings` and left out of the mean.
absl::StatusOr<GroupedCorrelation> GroupedCorrelationOf(const MetricScoreTable& table,
                                                        const JndMap& jnd,
                                                        GroupBy group_by);

struct CorrelationReport {
  std::string metric;
  Polarity polarity = Polarity::kHigherIsBetter;
  size_t n = 0;
  double plcc = 0;
  double srcc = 0;
  GroupedCorrelation per_codec;
  GroupedCorrelation per_source;
  std::vector<std::string> warnings;
};

absl::StatusOr<CorrelationReport> Correlate(const MetricScoreTable& table,
                                            const JndMap& jnd);

// Which correlations the pairwise tests compare.
enum class SignificanceScope { kOverall, kPerCodec, kPerSource };

absl::string_view ScopeName(SignificanceScope scope);
absl::StatusOr<SignificanceScope> ParseScope(absl::string_view name);

struct SignificanceEntry {
  std::string metric_a;
  std::string metric_b;
  size_t n = 0;  // stimuli used, summed over groups
  double z = 0;
  double p = 1;
  int groups = 0;
};

// Pairwise MRR tests on SRCC with scores oriented by polarity, so both
// correlations are positive for metrics that track distortion. The correlation
// between two metrics is their SRCC over the stimuli both score. Per-group
// scopes test within each group and combine z values as sum(z)/sqrt(groups).
std::vector<SignificanceEntry> PairwiseSignificance(
    const std::vector<MetricScoreTable>& tables, const JndMap& jnd,
    SignificanceScope scope = SignificanceScope::kOverall);

// Table of overall / per-codec / per-source PLCC and SRCC, optionally
// followed by the pairwise z and p matrices.
std::string RenderReport(const std::vector<CorrelationReport>& reports,
                         const std::vector<SignificanceEntry>* significance,
                         SignificanceScope scope = SignificanceScope::kOverall);

}  // namespace aic::bench

#endif  // AIC_BENCH_BENCHMARK_H_
