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

#include "design/batches.h"
#include "gtest/gtest.h"
#include "scale/bootstrap.h"
#include "scale/simulate.h"
#include "test_util.h"

namespace aic::scale {
namespace {

using design::Method;

design::Design BothMethods(const catalog::StudyManifest& m, int cross, int batch) {
  design::DesignOptions opt;
  opt.cross_count = cross;
  opt.batch_size = batch;
  auto btc = design::GenerateDesign(m, Method::kBtc, opt);
  auto ptc = design::GenerateDesign(m, Method::kPtc, opt);
  EXPECT_TRUE(btc.ok() && ptc.ok());
  btc->Merge(*ptc);
  return *btc;
}

std::vector<store::ResponseRecord> Simulate(const design::Design& d,
                                            const catalog::StudyManifest& m,
                                            const SourceModel& truth, int n, uint64_t seed) {
  SimulationConfig sim;
  sim.responses_per_triplet = n;
  sim.seed = seed;
  sim.observer.not_sure_propensity = 0.3;
  auto rows = SimulateResponses(d, m, {truth}, sim);
  EXPECT_TRUE(rows.ok()) << rows.status();
  return *rows;
}

double MaxCurveError(const SourceModel& fit, const SourceModel& truth,
                     const catalog::StudyManifest& m) {
  double worst = 0;
  for (size_t c = 0; c < truth.codec_ids.size(); ++c) {
    const auto* p = fit.Find(truth.codec_ids[c]);
    for (double r : BitrateGrid(m, truth.source_id, truth.codec_ids[c], 100)) {
      worst = std::max(worst, std::abs(RdDistortion(*p, r) - RdDistortion(truth.params[c], r)));
    }
  }
  return worst;
}

TEST(FitTest, InitialParamsCrossOneJndMidLadder) {
  const auto m = testing::MakeManifest(1, 2, 5);
  const auto d = BothMethods(m, 4, 4);
  const auto truth = testing::UniformModel(m, "s1", {3, 1.2, 2, 0.3});
  auto problem = LikelihoodProblem::Build("s1", Simulate(d, m, truth, 1, 1), m);
  ASSERT_TRUE(problem.ok());
  FitConfig config;
  const auto init = InitialParams(*problem, m, config);
  ASSERT_EQ(init.size(), 2u);
  // Median bitrate of c1 ladder 1.25, 1.0, 0.75, 0.5, 0.25 is 0.75.
  EXPECT_DOUBLE_EQ(init[0].alpha, 2.0);
  EXPECT_NEAR(RdDistortion(init[0], 0.75), 1.0, 1e-12);
  EXPECT_NEAR(RdDistortion(init[1], 0.75 * 1.03), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(init[0].gamma1, 2.0);
  EXPECT_DOUBLE_EQ(init[0].gamma2, 0.1);
}

// One codec with two levels: the optimizer must beat an exhaustive coarse grid.
TEST(FitTest, BeatsExhaustiveGrid) {
  const auto m = testing::MakeManifest(1, 1, 2);
  const auto d = BothMethods(m, 0, 2);
  const auto truth = testing::UniformModel(m, "s1", {2.5, 1.5, 1.8, 0.2});
  const auto rows = Simulate(d, m, truth, 40, 9);
  auto problem = LikelihoodProblem::Build("s1", rows, m);
  ASSERT_TRUE(problem.ok());
  double grid_min = std::numeric_limits<double>::infinity();
  auto axis = [](double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
    return v;
  };
  for (double a : axis(0.5, 8, 12)) {
    for (double b : axis(0.2, 5, 12)) {
      for (double g1 : axis(0.5, 4, 10)) {
        for (double g2 : {0.0, 0.05, 0.1, 0.2, 0.4, 0.8}) {
          grid_min = std::min(grid_min, problem->Evaluate({{a, b, g1, g2}}));
        }
      }
    }
  }
  auto fit = FitSource(*problem, m, FitConfig{});
  ASSERT_TRUE(fit.ok()) << fit.status();
  EXPECT_LE(fit->diagnostics.negative_log_likelihood, grid_min + 1e-9);
  EXPECT_NEAR(fit->diagnostics.negative_log_likelihood, problem->Evaluate(fit->params), 1e-9);
}

TEST(FitTest, RecoversGeneratingCurvesAndBeatsNullModel) {
  const auto m = testing::MakeManifest(1, 2, 5);
  const auto d = BothMethods(m, 8, 4);
  const auto truth = testing::UniformModel(m, "s1", {3, 1.2, 2, 0.3});
  const auto rows = Simulate(d, m, truth, 200, 4);
  auto problem = LikelihoodProblem::Build("s1", rows, m);
  ASSERT_TRUE(problem.ok());
  auto fit = FitSource(*problem, m, FitConfig{});
  ASSERT_TRUE(fit.ok()) << fit.status();
  EXPECT_TRUE(fit->diagnostics.converged);
  EXPECT_LE(MaxCurveError(*fit, truth, m), 0.15);
  // Null model: every comparison is a coin flip.
  size_t answered = 0;
  for (const auto& r : rows) answered += r.response.choice != store::Choice::kSkip;
  EXPECT_LE(fit->diagnostics.negative_log_likelihood, answered * std::log(2.0));
  EXPECT_LE(fit->diagnostics.negative_log_likelihood, problem->Evaluate(truth.params) + 1e-6);
  for (const auto& p : fit->params) EXPECT_TRUE(p.IsValid());
}

TEST(FitTest, Deterministic) {
  const auto m = testing::MakeManifest(1, 2, 5);
  const auto d = BothMethods(m, 8, 4);
  const auto truth = testing::UniformModel(m, "s1", {3, 1.2, 2, 0.3});
  auto problem = LikelihoodProblem::Build("s1", Simulate(d, m, truth, 10, 5), m);
  FitConfig config;
  config.seed = 77;
  auto a = FitSource(*problem, m, config);
  auto b = FitSource(*problem, m, config);
  ASSERT_TRUE(a.ok() && b.ok());
  for (size_t c = 0; c < a->params.size(); ++c) {
    EXPECT_EQ(a->params[c].alpha, b->params[c].alpha);
    EXPECT_EQ(a->params[c].beta, b->params[c].beta);
    EXPECT_EQ(a->params[c].gamma1, b->params[c].gamma1);
    EXPECT_EQ(a->params[c].gamma2, b->params[c].gamma2);
  }
  EXPECT_EQ(a->diagnostics.restart, b->diagnostics.restart);
}

TEST(FitTest, FitAllCoversSourcesAndRejectsMissingCodec) {
  const auto m = testing::MakeManifest(2, 2, 3);
  const auto d = BothMethods(m, 4, 4);
  SimulationConfig sim;
  sim.responses_per_triplet = 4;
  auto rows = *SimulateResponses(d, m,
                                 {testing::UniformModel(m, "s1", {2, 1, 2, 0.2}),
                                  testing::UniformModel(m, "s2", {3, 2, 1.5, 0.1})},
                                 sim);
  auto all = FitAll(rows, m, FitConfig{});
  ASSERT_TRUE(all.ok()) << all.status();
  ASSERT_EQ(all->size(), 2u);
  EXPECT_EQ((*all)[0].source_id, "s1");
  EXPECT_EQ((*all)[1].source_id, "s2");
  EXPECT_EQ((*all)[0].NumParameters(), 8u);

  std::erase_if(rows, [](const store::ResponseRecord& r) {
    return r.triplet.left.codec == "c2" || r.triplet.right.codec == "c2";
  });
  EXPECT_FALSE(FitAll(rows, m, FitConfig{}).ok());
}

}  // namespace
}  // namespace aic::scale
