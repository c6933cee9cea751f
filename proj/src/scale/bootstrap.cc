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
#include "scale/bootstrap.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "absl/strings/str_cat.h"
#include "common/random.h"
#include "common/status_macros.h"

namespace aic::scale {

std::vector<double> BitrateGrid(const catalog::StudyManifest& manifest,
                                const std::string& source_id,
                                const std::string& codec_id, int n) {
  const auto ladder = manifest.Ladder(source_id, codec_id);
  if (ladder.empty() || n < 1) return {};
  double lo = ladder.front()->actual_bpp;
  double hi = lo;
  for (const auto* st : ladder) {
    lo = std::min(lo, st->actual_bpp);
    hi = std::max(hi, st->actual_bpp);
  }
  std::vector<double> grid(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid[static_cast<size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return grid;
}

double Percentile(std::vector<double> values, double pct) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const size_t i = static_cast<size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= values.size()) return values.back();
  return values[i] + frac * (values[i + 1] - values[i]);
}

namespace {

std::vector<double> Multiplicities(const LikelihoodProblem& problem, ResampleMode mode,
                                   Rng& rng) {
  const auto& votes = problem.votes();
  std::vector<double> mult(votes.size(), 0.0);
  if (mode == ResampleMode::kIdentity) {
    std::fill(mult.begin(), mult.end(), 1.0);
    return mult;
  }
  std::vector<std::vector<size_t>> strata(mode == ResampleMode::kStratified ? 2 : 1);
  for (size_t i = 0; i < votes.size(); ++i) {
    const size_t s =
        mode == ResampleMode::kStratified && votes[i].method == design::Method::kPtc ? 1 : 0;
    strata[s].push_back(i);
  }
  for (const auto& stratum : strata) {
    if (stratum.empty()) continue;
    std::uniform_int_distribution<size_t> pick(0, stratum.size() - 1);
    for (size_t draw = 0; draw < stratum.size(); ++draw) mult[stratum[pick(rng)]] += 1.0;
  }
  return mult;
}

}  // namespace

absl::StatusOr<BootstrapResult> BootstrapBands(const LikelihoodProblem& problem,
                                               const catalog::StudyManifest& manifest,
                                               const BootstrapConfig& config,
                                               const SourceModel* estimate) {
  if (config.replicates < 1) return absl::InvalidArgumentError("replicates must be >= 1");
  if (config.grid_size < 2) return absl::InvalidArgumentError("grid size must be >= 2");
  BootstrapResult result;
  if (estimate != nullptr) {
    result.estimate = *estimate;
  } else {
    AIC_ASSIGN_OR_RETURN(result.estimate, FitSource(problem, manifest, config.fit));
  }
  const size_t num_codecs = problem.codec_ids().size();
  std::vector<CodecParams> start;
  for (const auto& id : problem.codec_ids()) {
    const auto* p = result.estimate.Find(id);
    if (p == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat("estimate lacks codec '", id, "'"));
    }
    start.push_back(*p);
  }
  std::vector<std::vector<double>> grids(num_codecs);
  for (size_t c = 0; c < num_codecs; ++c) {
    grids[c] = BitrateGrid(manifest, problem.source_id(), problem.codec_ids()[c],
                           config.grid_size);
  }

  // curves[replicate][codec][grid]; empty when the replicate failed.
  const size_t n = static_cast<size_t>(config.replicates);
  std::vector<std::vector<std::vector<double>>> curves(n);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t b = next++; b < n; b = next++) {
      Rng rng(DeriveSeed(config.seed, b));
      LikelihoodProblem replicate = problem;
      const auto mult = Multiplicities(problem, config.mode, rng);
      for (size_t i = 0; i < mult.size(); ++i) replicate.mutable_votes()[i].weight = mult[i];
      FitConfig fit = config.fit;
      fit.restarts = config.replicate_restarts;
      fit.seed = DeriveSeed(config.seed ^ 0x5bd1e995ULL, b);
      auto model = FitFromStart(replicate, start, fit);
      if (!model.ok()) continue;
      std::vector<std::vector<double>> curve(num_codecs);
      for (size_t c = 0; c < num_codecs; ++c) {
        for (double r : grids[c]) curve[c].push_back(RdDistortion(model->params[c], r));
      }
      curves[b] = std::move(curve);
    }
  };
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.replicates);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.replicates = config.replicates;
  for (const auto& c : curves) {
    if (c.empty()) ++result.failures;
  }
  if (result.failures > config.max_failure_fraction * config.replicates) {
    return absl::InternalError(absl::StrCat("source '", problem.source_id(), "': ",
                                            result.failures, " of ", config.replicates,
                                            " bootstrap fits failed"));
  }
  const double tail = 50.0 * (1.0 - config.coverage);
  for (size_t c = 0; c < num_codecs; ++c) {
    RdCurveBand band;
    band.source_id = problem.source_id();
    band.codec_id = problem.codec_ids()[c];
    band.bpp = grids[c];
    for (size_t g = 0; g < grids[c].size(); ++g) {
      std::vector<double> samples;
      samples.reserve(n);
      for (const auto& curve : curves) {
        if (!curve.empty()) samples.push_back(curve[c][g]);
      }
      const double point = RdDistortion(start[c], grids[c][g]);
      // Percentile bounds are widened to include the point estimate.
      band.estimate.push_back(point);
      band.lower.push_back(std::min(point, Percentile(samples, tail)));
      band.upper.push_back(std::max(point, Percentile(samples, 100.0 - tail)));
    }
    result.bands.push_back(std::move(band));
  }
  return result;
}

std::optional<double> WidthAtDistortion(const RdCurveBand& band, double distortion) {
  for (size_t i = 0; i + 1 < band.estimate.size(); ++i) {
    const double a = band.estimate[i] - distortion;
    const double b = band.estimate[i + 1] - distortion;
    if (a == 0) return band.upper[i] - band.lower[i];
    if ((a > 0) != (b > 0) || b == 0) {
      const double t = a / (a - b);
      const double lo = band.lower[i] + t * (band.lower[i + 1] - band.lower[i]);
      const double hi = band.upper[i] + t * (band.upper[i + 1] - band.upper[i]);
      return hi - lo;
    }
  }
  return std::nullopt;
}

}  // namespace aic::scale
