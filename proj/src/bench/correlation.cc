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
#include "bench/correlation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace aic::bench {

absl::StatusOr<double> Plcc(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return absl::InvalidArgumentError("length mismatch");
  if (x.size() < 3) {
    return absl::InvalidArgumentError(absl::StrCat("need >= 3 pairs, got ", x.size()));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return absl::InvalidArgumentError("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

absl::StatusOr<double> Srcc(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return absl::InvalidArgumentError("length mismatch");
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  return Plcc(rx, ry);
}

double TwoSidedNormalP(double z) {
  return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

absl::StatusOr<MrrResult> MengRosenthalRubin(double r_a, double r_b, double r_ab, int n) {
  if (n <= 3) return absl::InvalidArgumentError("MRR test needs n > 3");
  for (double r : {r_a, r_b, r_ab}) {
    if (!(std::abs(r) < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("correlation ", r, " outside (-1, 1)"));
    }
  }
  const double mean_sq = 0.5 * (r_a * r_a + r_b * r_b);
  const double f = std::min(1.0, (1.0 - r_ab) / (2.0 * (1.0 - mean_sq)));
  const double h = (1.0 - f * mean_sq) / (1.0 - mean_sq);
  MrrResult out;
  out.z = (std::atanh(r_a) - std::atanh(r_b)) *
          std::sqrt((n - 3) / (2.0 * (1.0 - r_ab) * h));
  out.p = TwoSidedNormalP(out.z);
  return out;
}

}  // namespace aic::bench
