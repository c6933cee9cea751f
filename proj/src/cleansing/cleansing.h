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
#ifndef AIC_CLEANSING_CLEANSING_H_
#define AIC_CLEANSING_CLEANSING_H_

#include <limits>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "catalog/manifest.h"
#include "design/triplet.h"
#include "store/response.h"

namespace aic::cleansing {

// One participant's sitting of one batch.
struct BatchInstance {
  std::string participant_id;
  std::string batch_id;
  design::Method method = design::Method::kBtc;
  std::vector<store::ResponseRecord> responses;
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  double consistency = std::numeric_limits<double>::quiet_NaN();
  // Why scoring failed, if it did.
  std::string note;

  double MeanScore() const { return 0.5 * (accuracy + consistency); }
};

// Groups rows by (participant, batch), preserving first-seen order.
std::vector<BatchInstance> GroupInstances(const std::vector<store::ResponseRecord>& rows);

// Weighted share of correct same-codec judgments; not-sure earns half credit
// and each question weighs |level_left - level_right| (source = level 0).
// Skips and cross-codec questions are ignored.
absl::StatusOr<double> Accuracy(const BatchInstance& instance,
                                const catalog::StudyManifest* manifest = nullptr);

// Weighted agreement between a same-codec question and its mirror: 1 when
// both answers fall in the same class (correct, incorrect, not sure), 0.375
// when exactly one is not sure, else 0. Pairs with a skip are ignored.
absl::StatusOr<double> Consistency(const BatchInstance& instance,
                                   const catalog::StudyManifest* manifest = nullptr);

// Fills accuracy and consistency; unscorable instances keep NaN plus a note.
void ScoreInstances(std::vector<BatchInstance>& instances,
                    const catalog::StudyManifest* manifest = nullptr);

struct FilterResult {
  std::vector<BatchInstance> retained;
  std::vector<BatchInstance> excluded;
};

inline constexpr double kDefaultThreshold = 0.7;

// Keeps an instance iff (accuracy + consistency) / 2 >= threshold. Unscored
// instances are excluded.
FilterResult FilterInstances(std::vector<BatchInstance> instances,
                             double threshold = kDefaultThreshold);

std::vector<store::ResponseRecord> Flatten(const std::vector<BatchInstance>& instances);

// Tab-separated audit listing every instance with its scores and decision.
std::string AuditReport(const FilterResult& result, double threshold);

}  // namespace aic::cleansing

#endif  // AIC_CLEANSING_CLEANSING_H_
