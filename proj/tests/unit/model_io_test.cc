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
#include "scale/model_io.h"

#include <random>

#include "absl/strings/match.h"
#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace aic::scale {
namespace {

ModelFile RandomModels(std::mt19937_64& rng) {
  std::lognormal_distribution<double> ln(0.0, 1.0);
  ModelFile f;
  f.k = 1.5;
  for (int s = 0; s < 3; ++s) {
    SourceModel m;
    m.source_id = absl::StrCat("s", s + 1);
    for (int c = 0; c < 4; ++c) {
      m.codec_ids.push_back(absl::StrCat("c", c + 1));
      m.params.push_back({ln(rng), ln(rng), ln(rng), c == 0 ? 0.0 : ln(rng)});
    }
    m.diagnostics = {1234.5678 * ln(rng), 42, s, s != 1, s == 2, "CONVERGENCE"};
    f.sources.push_back(m);
  }
  return f;
}

TEST(ModelIoTest, ModelRoundTripIsExact) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = RandomModels(rng);
    const std::string text = SerializeModels(f);
    auto back = ParseModels(text);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(back->k, f.k);
    ASSERT_EQ(back->sources.size(), 3u);
    for (size_t s = 0; s < 3; ++s) {
      const auto& a = f.sources[s];
      const auto& b = back->sources[s];
      EXPECT_EQ(a.codec_ids, b.codec_ids);
      for (size_t c = 0; c < a.params.size(); ++c) {
        EXPECT_EQ(a.params[c].alpha, b.params[c].alpha);
        EXPECT_EQ(a.params[c].beta, b.params[c].beta);
        EXPECT_EQ(a.params[c].gamma1, b.params[c].gamma1);
        EXPECT_EQ(a.params[c].gamma2, b.params[c].gamma2);
      }
      EXPECT_EQ(a.diagnostics.negative_log_likelihood, b.diagnostics.negative_log_likelihood);
      EXPECT_EQ(a.diagnostics.converged, b.diagnostics.converged);
      EXPECT_EQ(a.diagnostics.restart, b.diagnostics.restart);
    }
    EXPECT_EQ(SerializeModels(*back), text);
    EXPECT_NE(back->Find("s2"), nullptr);
    EXPECT_EQ(back->Find("s9"), nullptr);
  }
}

TEST(ModelIoTest, ModelErrors) {
  EXPECT_FALSE(ParseModels("{").ok());
  EXPECT_FALSE(ParseModels("{\"sources\": [{\"source\": \"s1\"}]}").ok());
  auto bad = ParseModels(
      R"({"sources": [{"source": "s1", "codecs": [{"codec": "c1", "alpha": -1,
          "beta": 1, "gamma1": 1, "gamma2": 0}]}]})");
  ASSERT_FALSE(bad.ok());
  EXPECT_TRUE(absl::StrContains(bad.status().message(), "invalid params"));
}

TEST(ModelIoTest, FileRoundTrip) {
  std::mt19937_64 rng(2);
  const auto f = RandomModels(rng);
  const auto path = testing::TempDir("model_io") / "model.json";
  ASSERT_TRUE(WriteModels(f, path).ok());
  auto back = LoadModels(path);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(SerializeModels(*back), SerializeModels(f));
  EXPECT_EQ(LoadModels(path.parent_path() / "missing.json").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(ModelIoTest, BandsRoundTrip) {
  std::vector<RdCurveBand> bands = {
      {"s1", "c1", {0.1, 0.2, 0.3}, {2.0, 1.5, 1.0}, {1.9, 1.4, 0.9}, {2.1, 1.6, 1.2}},
      {"s1", "c2", {0.5, 1.0}, {0.8, 0.4}, {0.7, 0.35}, {0.9, 0.5}}};
  const std::string text = SerializeBands(bands);
  auto back = ParseBands(text);
  ASSERT_TRUE(back.ok()) << back.status();
  ASSERT_EQ(back->size(), 2u);
  EXPECT_EQ((*back)[0].bpp, bands[0].bpp);
  EXPECT_EQ((*back)[1].upper, bands[1].upper);
  EXPECT_EQ(SerializeBands(*back), text);
  EXPECT_FALSE(ParseBands("s1\tc1\t0\t0.1\n").ok());
  EXPECT_FALSE(ParseBands("s1\tc1\tx\t0.1\t1\t1\t1\n").ok());
}

TEST(ModelIoTest, PlotDataSeries) {
  const auto m = testing::MakeManifest(1, 2, 5);
  ModelFile f;
  f.sources.push_back(testing::UniformModel(m, "s1", {2, 1, 2, 0.1}));
  std::vector<RdCurveBand> bands = {
      {"s1", "c1", {0.25, 1.25}, {1.5, 0.5}, {1.4, 0.4}, {1.6, 0.6}}};
  const std::string text = PlotData(f, bands, m, 10);
  int curve_c1 = 0, curve_c2 = 0, stimulus = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
    if (line.front() == '#') continue;
    std::vector<absl::string_view> cols = absl::StrSplit(line, '\t');
    ASSERT_EQ(cols.size(), 7u);
    if (cols[2] == "stimulus") ++stimulus;
    if (cols[2] == "curve" && cols[1] == "c1") {
      ++curve_c1;
      EXPECT_NE(cols[5], "NA");
    }
    if (cols[2] == "curve" && cols[1] == "c2") {
      ++curve_c2;
      EXPECT_EQ(cols[5], "NA");
    }
  }
  EXPECT_EQ(curve_c1, 2);
  EXPECT_EQ(curve_c2, 10);
  EXPECT_EQ(stimulus, 10);
}

}  // namespace
}  // namespace aic::scale
