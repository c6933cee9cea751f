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
#ifndef AIC_SCALE_SIMULATE_H_
#define AIC_SCALE_SIMULATE_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "catalog/manifest.h"
#include "common/random.h"
#include "design/batches.h"
#include "scale/model.h"
#include "store/response.h"

namespace aic::scale {

// Synthetic observer that answers according to the unified model.
struct ObserverModel {
  double k = 1.0;
  // In [0, 1]. A fraction of min(p, 1 - p) of each side's probability mass
  // turns into "not sure", which keeps left + not_sure / 2 distributed as p.
  double not_sure_propensity = 0.0;
  // Share of batch instances answered by a uniform left/right guesser.
  double guesser_fraction = 0.0;
};

struct SimulationConfig {
  int responses_per_triplet = 24;
  uint64_t seed = 1;
  ObserverModel observer;
};

// Probability that `truth` makes an observer call the left image more
// distorted in `triplet`.
absl::StatusOr<double> TrueLeftProbability(const design::Triplet& triplet,
                                           const std::vector<SourceModel>& truth,
                                           const catalog::StudyManifest& manifest,
                                           double k);

store::Choice SampleChoice(double p_left, const ObserverModel& observer, bool guesser,
                           Rng& rng);

// `responses_per_triplet` instances of every batch, one synthetic participant
// per instance ("sim-<batch>-<n>").
absl::StatusOr<std::vector<store::ResponseRecord>> SimulateResponses(
    const design::Design& design, const catalog::StudyManifest& manifest,
    const std::vector<SourceModel>& truth, const SimulationConfig& config);

}  // namespace aic::scale

#endif  // AIC_SCALE_SIMULATE_H_
