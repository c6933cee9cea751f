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
#ifndef AIC_BENCH_CORRELATION_H_
#define AIC_BENCH_CORRELATION_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace aic::bench {

// Pearson linear correlation. Needs >= 3 pairs and non-zero variance.
absl::StatusOr<double> Plcc(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation: Pearson on tie-averaged ranks.
absl::StatusOr<double> Srcc(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> AverageRanks(std::span<const double> values);

struct MrrResult {
  double z = 0;
  double p = 1;  // two-sided
};

// Meng-Rosenthal-Rubin test for two correlations that share one variable.
// r_a and r_b correlate metrics A and B with the shared variable; r_ab is the
// correlation between A and B; n is the number of observations.
absl::StatusOr<MrrResult> MengRosenthalRubin(double r_a, double r_b, double r_ab, int n);

// P(|Z| >= |z|) for a standard normal Z.
double TwoSidedNormalP(double z);

}  // namespace aic::bench

#endif  // AIC_BENCH_CORRELATION_H_
