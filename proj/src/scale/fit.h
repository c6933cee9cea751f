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
#ifndef AIC_SCALE_FIT_H_
#define AIC_SCALE_FIT_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "catalog/manifest.h"
#include "scale/model.h"
#include "scale/optimizer.h"

namespace aic::scale {

struct FitConfig {
  double k = 1.0;
  int restarts = 8;
  uint64_t seed = 1;
  // Log-normal spread of restart perturbations.
  double init_sigma = 0.3;
  double init_alpha = 2.0;
  double init_gamma1 = 2.0;
  double init_gamma2 = 0.1;
  MinimizeOptions minimize;
};

// alpha0 = init_alpha, beta0 = ln(alpha0) / median ladder bitrate (so the
// curve crosses 1 JND mid-ladder), gamma1 = init_gamma1, gamma2 = init_gamma2.
std::vector<CodecParams> InitialParams(const LikelihoodProblem& problem,
                                       const catalog::StudyManifest& manifest,
                                       const FitConfig& config);

// Multi-start maximum likelihood. Restart 0 starts from `start`; the others
// multiply every parameter by independent log-normal noise. Returns the best
// restart; diagnostics.converged is false when it hit the iteration limit.
absl::StatusOr<SourceModel> FitFromStart(const LikelihoodProblem& problem,
                                         const std::vector<CodecParams>& start,
                                         const FitConfig& config);

absl::StatusOr<SourceModel> FitSource(const LikelihoodProblem& problem,
                                      const catalog::StudyManifest& manifest,
                                      const FitConfig& config);

// Fits every source of the manifest that has responses.
absl::StatusOr<std::vector<SourceModel>> FitAll(
    const std::vector<store::ResponseRecord>& rows,
    const catalog::StudyManifest& manifest, const FitConfig& config);

}  // namespace aic::scale

#endif  // AIC_SCALE_FIT_H_
