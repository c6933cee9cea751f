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
#ifndef AIC_CATALOG_BITRATE_MATCH_H_
#define AIC_CATALOG_BITRATE_MATCH_H_

#include <filesystem>
#include <functional>

#include "absl/status/statusor.h"
#include "catalog/manifest.h"

namespace aic::catalog {

// Encodes at a quality setting and reports the resulting bits per pixel.
using BitrateProbe = std::function<absl::StatusOr<double>(int quality)>;

struct MatchResult {
  int quality = 0;
  double actual_bpp = 0;
  // Target after the recipe's bitrate rule.
  double adjusted_target_bpp = 0;
  // (actual - target) / target.
  double relative_deviation = 0;
  int evaluations = 0;
  // Target lies outside [bpp(q_min), bpp(q_max)]; the boundary setting is
  // returned.
  bool out_of_range = false;
  bool within_tolerance = false;
};

// Binary search over the recipe's integer quality range for the setting whose
// bitrate is closest to the adjusted target. The closest candidate seen is
// kept, so non-monotone encoders still get the best evaluated setting. Ties
// resolve to the lower bitrate side of the search axis.
absl::StatusOr<MatchResult> MatchBitrate(const CodecRecipe& recipe,
                                         const SourceImage& source,
                                         double target_bpp, double tolerance,
                                         const BitrateProbe& probe);

// Upper bound on probe invocations made by MatchBitrate.
int MaxMatchEvaluations(const CodecRecipe& recipe);

// Runs recipe.encode_command through the shell with {quality}, {input},
// {output}, {width} and {height} substituted, then measures the output size.
BitrateProbe MakeCommandProbe(const CodecRecipe& recipe,
                              const SourceImage& source,
                              const std::filesystem::path& base_dir,
                              const std::filesystem::path& work_dir);

}  // namespace aic::catalog

#endif  // AIC_CATALOG_BITRATE_MATCH_H_
