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
#ifndef AIC_SCALE_BOOTSTRAP_H_
#define AIC_SCALE_BOOTSTRAP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "catalog/manifest.h"
#include "scale/fit.h"
#include "scale/model.h"

namespace aic::scale {

// d(r) on an equally spaced bitrate grid with percentile bounds.
struct RdCurveBand {
  std::string source_id;
  std::string codec_id;
  std::vector<double> bpp;
  std::vector<double> estimate;
  std::vector<double> lower;
  std::vector<double> upper;
};

enum class ResampleMode {
  kPooled,      // triplets of both methods drawn from one pool
  kStratified,  // BTC and PTC triplets resampled separately
  kIdentity,    // every replicate reuses the original data
};

struct BootstrapConfig {
  int replicates = 1000;
  int grid_size = 100;
  uint64_t seed = 1;
  ResampleMode mode = ResampleMode::kPooled;
  double coverage = 0.95;
  // Replicate fits start at the full-data estimate.
  int replicate_restarts = 1;
  double max_failure_fraction = 0.05;
  // 0 = hardware concurrency.
  int threads = 0;
  FitConfig fit;
};

struct BootstrapResult {
  SourceModel estimate;
  std::vector<RdCurveBand> bands;
  int replicates = 0;
  int failures = 0;
};

// Grid of `n` equally spaced bitrates spanning the (source, codec) ladder.
std::vector<double> BitrateGrid(const catalog::StudyManifest& manifest,
                                const std::string& source_id,
                                const std::string& codec_id, int n);

// Percentile `pct` in [0, 100] of `values`, interpolating linearly between
// order statistics.
double Percentile(std::vector<double> values, double pct);

// Resamples triplet questions with replacement (all responses of a triplet
// move together), refits each replicate and takes per-grid-point percentile
// bounds. When `estimate` is null the full data is fitted first.
absl::StatusOr<BootstrapResult> BootstrapBands(const LikelihoodProblem& problem,
                                               const catalog::StudyManifest& manifest,
                                               const BootstrapConfig& config,
                                               const SourceModel* estimate = nullptr);

// Band width (upper - lower) where the point estimate crosses `distortion`,
// interpolated linearly on the grid; nullopt when it never crosses.
std::optional<double> WidthAtDistortion(const RdCurveBand& band, double distortion);

}  // namespace aic::scale

#endif  // AIC_SCALE_BOOTSTRAP_H_
