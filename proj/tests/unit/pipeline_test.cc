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
#include "pipeline/run.h"

#include <fstream>

#include "common/file_io.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace aic::pipeline {
namespace {

using nlohmann::json;

const std::filesystem::path kData = std::filesystem::path(AIC_TEST_DATA) / "synthetic";

std::filesystem::path WriteConfig(const std::filesystem::path& dir) {
  json doc = json::parse(*ReadFile(kData / "run.json"));
  doc["manifest"] = (kData / "manifest.json").string();
  doc["collect"]["truth"] = (kData / "truth.json").string();
  doc["bench"]["scores"] = (kData / "scores").string();
  doc["bootstrap"]["replicates"] = 20;
  doc["bootstrap"]["threads"] = 2;
  doc["fit"]["restarts"] = 2;
  const auto path = dir / "run.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

absl::StatusOr<RunReport> RunIn(const std::filesystem::path& dir,
                                const std::vector<std::string>& stages = {}) {
  auto config = LoadRunConfig(dir / "run.json");
  if (!config.ok()) return config.status();
  return pipeline::Run(*config, stages);
}

TEST(PipelineTest, FullRunIsGreenAndDeterministic) {
  const auto dir1 = testing::TempDir("pipeline");
  const auto dir2 = testing::TempDir("pipeline");
  WriteConfig(dir1);
  WriteConfig(dir2);
  auto r1 = RunIn(dir1);
  ASSERT_TRUE(r1.ok()) << r1.status();
  ASSERT_EQ(r1->stages.size(), 6u);
  for (size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(r1->stages[i].name, StageNames()[i]);
    EXPECT_EQ(r1->stages[i].status, "ok") << r1->stages[i].diagnostics;
    EXPECT_FALSE(r1->stages[i].outputs.empty()) << r1->stages[i].name;
  }
  const auto* clean = r1->Find("clean");
  EXPECT_GT(clean->metrics["retained_btc"].get<int>(), 100);
  EXPECT_LE(clean->metrics["retained_btc"].get<int>(), 144);
  EXPECT_EQ(r1->Find("fit")->metrics["unconverged"].get<int>(), 0);
  EXPECT_TRUE(std::filesystem::exists(dir1 / "out" / "run_report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir1 / "out" / "bench.tsv"));

  auto r2 = RunIn(dir2);
  ASSERT_TRUE(r2.ok()) << r2.status();
  EXPECT_EQ(r1->ToJson().dump(), r2->ToJson().dump());
  EXPECT_EQ(*ReadFile(dir1 / "out" / "run_report.json"), *ReadFile(dir2 / "out" / "run_report.json"));

  // A later stage alone reuses the recorded upstream outputs.
  auto again = RunIn(dir1, {"bench"});
  ASSERT_TRUE(again.ok()) << again.status();
  EXPECT_EQ(again->ToJson().dump(), r1->ToJson().dump());

  // Tampering with an intermediate artifact is caught downstream.
  std::ofstream(dir1 / "out" / "retained.tsv", std::ios::app) << "# edited\n";
  auto tampered = RunIn(dir1, {"fit"});
  ASSERT_FALSE(tampered.ok());
  EXPECT_THAT(std::string(tampered.status().message()),
              ::testing::HasSubstr("changed since stage 'clean'"));
  auto report = RunReport::FromJson(json::parse(*ReadFile(dir1 / "out" / "run_report.json")));
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->Find("fit")->status, "failed");
}

TEST(PipelineTest, ConfigErrors) {
  const auto dir = testing::TempDir("pipeline");
  WriteConfig(dir);
  auto config = LoadRunConfig(dir / "run.json");
  ASSERT_TRUE(config.ok());
  EXPECT_EQ(pipeline::Run(*config, {"train"}).status().code(), absl::StatusCode::kInvalidArgument);
  std::ofstream(dir / "bad.json") << R"({"root_seed": 1})";
  EXPECT_FALSE(LoadRunConfig(dir / "bad.json").ok());
  EXPECT_FALSE(LoadRunConfig(dir / "none.json").ok());
  // Fitting without upstream outputs fails with the stage named.
  auto r = pipeline::Run(*config, {"fit"});
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(std::string(r.status().message()), ::testing::HasSubstr("stage 'fit' failed"));
}

}  // namespace
}  // namespace aic::pipeline
