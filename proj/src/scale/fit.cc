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
#include "scale/fit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"
#include "common/random.h"
#include "common/status_macros.h"

namespace aic::scale {

std::vector<CodecParams> InitialParams(const LikelihoodProblem& problem,
                                       const catalog::StudyManifest& manifest,
                                       const FitConfig& config) {
  std::vector<CodecParams> params;
  for (const auto& codec : problem.codec_ids()) {
    std::vector<double> rates;
    for (const auto* st : manifest.Ladder(problem.source_id(), codec)) {
      rates.push_back(st->actual_bpp);
    }
    double median = 1.0;
    if (!rates.empty()) {
      std::sort(rates.begin(), rates.end());
      const size_t m = rates.size() / 2;
      median = rates.size() % 2 ? rates[m] : 0.5 * (rates[m - 1] + rates[m]);
    }
    CodecParams p;
    p.alpha = config.init_alpha;
    p.beta = std::log(config.init_alpha) / median;
    if (!(p.beta > 0)) p.beta = 1.0;
    p.gamma1 = config.init_gamma1;
    p.gamma2 = config.init_gamma2;
    params.push_back(p);
  }
  return params;
}

absl::StatusOr<SourceModel> FitFromStart(const LikelihoodProblem& problem,
                                         const std::vector<CodecParams>& start,
                                         const FitConfig& config) {
  AIC_RETURN_IF_ERROR(problem.CheckIdentifiable());
  if (start.size() != problem.codec_ids().size()) {
    return absl::InvalidArgumentError("start has the wrong number of codecs");
  }
  const Objective objective = [&problem](std::span<const double> x,
                                         std::span<double> g) {
    return problem.EvaluateTheta(x, g);
  };
  Rng rng(config.seed);
  std::normal_distribution<double> noise(0.0, config.init_sigma);
  const int restarts = std::max(1, config.restarts);

  SourceModel best;
  best.source_id = problem.source_id();
  best.codec_ids = problem.codec_ids();
  double best_value = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<CodecParams> init = start;
    if (restart > 0) {
      for (auto& p : init) {
        p.alpha *= std::exp(noise(rng));
        p.beta *= std::exp(noise(rng));
        p.gamma1 *= std::exp(noise(rng));
        p.gamma2 *= std::exp(noise(rng));
      }
    }
    MinimizeResult r = MinimizeQuasiNewton(objective, LikelihoodProblem::ToTheta(init),
                                           config.minimize);
    if (!std::isfinite(r.value) || !(r.value < best_value)) continue;
    best_value = r.value;
    best.params = LikelihoodProblem::FromTheta(r.x);
    best.diagnostics.negative_log_likelihood = r.value;
    best.diagnostics.iterations = r.iterations;
    best.diagnostics.restart = restart;
    best.diagnostics.converged = r.converged;
    best.diagnostics.used_fallback = r.used_fallback;
    best.diagnostics.termination = r.termination;
  }
  if (best.params.empty()) {
    return absl::InternalError(
        absl::StrCat("source '", problem.source_id(), "': every restart failed"));
  }
  for (const auto& p : best.params) {
    if (!p.IsValid()) {
      return absl::InternalError(
          absl::StrCat("source '", problem.source_id(), "': fit left the valid domain"));
    }
  }
  return best;
}

absl::StatusOr<SourceModel> FitSource(const LikelihoodProblem& problem,
                                      const catalog::StudyManifest& manifest,
                                      const FitConfig& config) {
  return FitFromStart(problem, InitialParams(problem, manifest, config), config);
}

absl::StatusOr<std::vector<SourceModel>> FitAll(
    const std::vector<store::ResponseRecord>& rows,
    const catalog::StudyManifest& manifest, const FitConfig& config) {
  std::vector<SourceModel> out;
  for (const auto& source : manifest.sources) {
    AIC_ASSIGN_OR_RETURN(auto problem,
                         LikelihoodProblem::Build(source.id, rows, manifest, config.k));
    if (problem.votes().empty()) continue;
    FitConfig c = config;
    c.seed = DeriveSeed(config.seed, source.id);
    AIC_ASSIGN_OR_RETURN(auto model, FitSource(problem, manifest, c));
    out.push_back(std::move(model));
  }
  if (out.empty()) return absl::FailedPreconditionError("no responses to fit");
  return out;
}

}  // namespace aic::scale
