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
#include "scale/simulate.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"

namespace aic::scale {

absl::StatusOr<double> TrueLeftProbability(const design::Triplet& triplet,
                                           const std::vector<SourceModel>& truth,
                                           const catalog::StudyManifest& manifest,
                                           double k) {
  const SourceModel* model = nullptr;
  for (const auto& m : truth) {
    if (m.source_id == triplet.source_id) model = &m;
  }
  if (model == nullptr) {
    return absl::NotFoundError(absl::StrCat("no model for source '", triplet.source_id, "'"));
  }
  auto scale_value = [&](const design::StimulusRef& ref) -> absl::StatusOr<double> {
    if (ref.IsSource()) return 0.0;
    const auto* p = model->Find(ref.codec);
    const auto* st = manifest.FindStimulus(triplet.source_id, ref.codec, ref.level);
    if (p == nullptr || st == nullptr) {
      return absl::NotFoundError(absl::StrCat("cannot place ", ref.ToString()));
    }
    const double d = RdDistortion(*p, st->actual_bpp);
    return triplet.method == design::Method::kBtc ? Boost(*p, d) : d;
  };
  auto l = scale_value(triplet.left);
  if (!l.ok()) return l.status();
  auto r = scale_value(triplet.right);
  if (!r.ok()) return r.status();
  return ChoiceProbability(*l, *r, k);
}

store::Choice SampleChoice(double p_left, const ObserverModel& observer, bool guesser,
                           Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng);
  if (guesser) return x < 0.5 ? store::Choice::kLeft : store::Choice::kRight;
  const double unsure = observer.not_sure_propensity * std::min(p_left, 1.0 - p_left);
  if (x < p_left - unsure) return store::Choice::kLeft;
  if (x < p_left + unsure) return store::Choice::kNotSure;
  return store::Choice::kRight;
}

absl::StatusOr<std::vector<store::ResponseRecord>> SimulateResponses(
    const design::Design& design, const catalog::StudyManifest& manifest,
    const std::vector<SourceModel>& truth, const SimulationConfig& config) {
  std::vector<store::ResponseRecord> rows;
  Rng rng(config.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::geometric_distribution<int> extra_toggles(0.5);
  for (const auto& batch : design.batches) {
    std::vector<double> p_left;
    std::vector<const design::Triplet*> triplets;
    for (const auto& id : batch.questions) {
      const auto* t = design.FindTriplet(id);
      if (t == nullptr) return absl::NotFoundError(absl::StrCat("unknown triplet ", id));
      auto p = TrueLeftProbability(*t, truth, manifest, config.observer.k);
      if (!p.ok()) return p.status();
      triplets.push_back(t);
      p_left.push_back(*p);
    }
    for (int n = 0; n < config.responses_per_triplet; ++n) {
      const bool guesser = u(rng) < config.observer.guesser_fraction;
      const std::string participant = absl::StrCat("sim-", batch.id, "-", n + 1);
      int64_t clock_ms = 0;
      for (size_t q = 0; q < triplets.size(); ++q) {
        store::ResponseRecord row;
        row.triplet = *triplets[q];
        row.question_index = static_cast<int>(q);
        auto& r = row.response;
        r.triplet_id = triplets[q]->id;
        r.batch_id = batch.id;
        r.participant_id = participant;
        r.choice = SampleChoice(p_left[q], config.observer, guesser, rng);
        // Harder questions take longer.
        const double ease = std::abs(p_left[q] - 0.5) * 2.0;
        r.response_time_ms =
            static_cast<int64_t>(1500.0 + 6000.0 * (1.0 - ease) * u(rng) + 500.0 * u(rng));
        r.toggle_count =
            triplets[q]->method == design::Method::kPtc ? 1 + extra_toggles(rng) : -1;
        clock_ms += r.response_time_ms;
        r.submitted_at_ms = clock_ms;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace aic::scale
