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
#include "aic/aic.h"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

using nlohmann::json;

const std::string kData = std::string(AIC_TEST_DATA) + "/synthetic";

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json TakeJson(char* s) {
  json j = json::parse(s);
  aic_string_free(s);
  return j;
}

class CapiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::path(::testing::TempDir()) /
           ("aic_capi_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
    ASSERT_EQ(aic_manifest_load((kData + "/manifest.json").c_str(), &manifest_), AIC_OK)
        << aic_last_error();
  }
  void TearDown() override { aic_manifest_free(manifest_); }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
  aic_manifest* manifest_ = nullptr;
};

TEST_F(CapiTest, BasicsAndErrors) {
  EXPECT_STREQ(aic_version(), "0.1.0");
  EXPECT_STREQ(aic_status_name(AIC_OK), "ok");
  EXPECT_STREQ(aic_status_name(AIC_NOT_FOUND), "not found");
  EXPECT_EQ(aic_manifest_stimulus_count(manifest_), 100u);
  aic_manifest* none = nullptr;
  EXPECT_EQ(aic_manifest_load(P("missing.json").c_str(), &none), AIC_NOT_FOUND);
  EXPECT_NE(std::string(aic_last_error()).find("missing.json"), std::string::npos);
  EXPECT_EQ(none, nullptr);
  EXPECT_EQ(aic_manifest_load(nullptr, &none), AIC_INVALID_ARGUMENT);
  EXPECT_EQ(aic_manifest_write(manifest_, P("copy.json").c_str()), AIC_OK);
  aic_manifest* copy = nullptr;
  ASSERT_EQ(aic_manifest_load(P("copy.json").c_str(), &copy), AIC_OK);
  EXPECT_EQ(aic_manifest_stimulus_count(copy), 100u);
  aic_manifest_free(copy);
  aic_manifest_free(nullptr);
  aic_string_free(nullptr);
}

// Linear encoder: bpp = quality / 50.
int LinearProbe(void* user, int quality, double* bpp) {
  ++*static_cast<int*>(user);
  *bpp = quality / 50.0;
  return 0;
}

int FailingProbe(void*, int, double*) { return 1; }

TEST_F(CapiTest, MatchWithCallback) {
  int calls = 0;
  aic_match_result r;
  ASSERT_EQ(aic_catalog_match_probe(manifest_, "garden", "jxl", 1.0, 0.02, LinearProbe,
                                    &calls, &r),
            AIC_OK)
      << aic_last_error();
  EXPECT_EQ(r.quality, 50);
  EXPECT_DOUBLE_EQ(r.actual_bpp, 1.0);
  EXPECT_EQ(r.evaluations, calls);
  EXPECT_TRUE(r.within_tolerance);
  EXPECT_FALSE(r.out_of_range);
  EXPECT_NE(aic_catalog_match_probe(manifest_, "garden", "jxl", 1.0, 0.02, FailingProbe,
                                    nullptr, &r),
            AIC_OK);
  EXPECT_EQ(aic_catalog_match_probe(manifest_, "nowhere", "jxl", 1.0, 0.02, LinearProbe,
                                    &calls, &r),
            AIC_NOT_FOUND);
}

TEST_F(CapiTest, StoreRoundTripAndServer) {
  aic_design_options d;
  aic_design_options_default(&d);
  EXPECT_EQ(d.batch_size, 120);
  d.method = "btc";
  ASSERT_EQ(aic_design_generate(manifest_, &d, P("design.json").c_str(), 0), AIC_OK)
      << aic_last_error();
  aic_store_options so;
  aic_store_options_default(&so);
  so.fsync = 0;
  aic_store* store = nullptr;
  ASSERT_EQ(aic_store_open(P("data").c_str(), P("design.json").c_str(), &so, &store), AIC_OK)
      << aic_last_error();
  char* text = nullptr;
  ASSERT_EQ(aic_store_enroll(store, "btc", &text), AIC_OK);
  const json who = TakeJson(text);
  const std::string pid = who["participant_id"];
  ASSERT_EQ(aic_store_assign(store, pid.c_str(), &text), AIC_OK);
  const json batch = TakeJson(text);
  ASSERT_EQ(batch["questions"].size(), 120u);
  json resp = {{"participant_id", pid},
               {"batch_id", batch["batch_id"]},
               {"triplet_id", batch["questions"][0]},
               {"choice", "not_sure"},
               {"response_time_ms", 900},
               {"submitted_at_ms", 5}};
  int dup = -1, done = -1;
  ASSERT_EQ(aic_store_record(store, resp.dump().c_str(), &dup, &done), AIC_OK)
      << aic_last_error();
  EXPECT_EQ(dup, 0);
  EXPECT_EQ(done, 0);
  ASSERT_EQ(aic_store_record(store, resp.dump().c_str(), &dup, &done), AIC_OK);
  EXPECT_EQ(dup, 1);
  EXPECT_EQ(aic_store_record(store, "{not json", &dup, &done), AIC_INVALID_ARGUMENT);
  EXPECT_EQ(aic_store_response_count(store), 1u);
  ASSERT_EQ(aic_store_export(store, manifest_, "btc", P("export.tsv").c_str()), AIC_OK);
  EXPECT_NE(Slurp(P("export.tsv")).find("#summary\tbtc\tleft=0\tnot_sure=1\tright=0"),
            std::string::npos);

  aic_server_options opts = {"127.0.0.1", 0, "tok", nullptr};
  aic_server* server = nullptr;
  ASSERT_EQ(aic_server_start(store, manifest_, &opts, &server), AIC_OK) << aic_last_error();
  EXPECT_GT(aic_server_port(server), 0);
  std::thread stopper([server] { aic_server_stop(server); });
  EXPECT_EQ(aic_server_wait(server), AIC_OK);
  stopper.join();
  aic_server_free(server);
  aic_store_free(store);

  // Reopen from the data directory alone.
  ASSERT_EQ(aic_store_open(P("data").c_str(), nullptr, &so, &store), AIC_OK);
  EXPECT_EQ(aic_store_response_count(store), 1u);
  EXPECT_EQ(aic_store_assign(store, "p99999", &text), AIC_NOT_FOUND);
  aic_store_free(store);
}

TEST_F(CapiTest, AnalysisChain) {
  aic_design_options d;
  aic_design_options_default(&d);
  d.method = "btc";
  ASSERT_EQ(aic_design_generate(manifest_, &d, P("design.json").c_str(), 0), AIC_OK);
  d.method = "ptc";
  ASSERT_EQ(aic_design_generate(manifest_, &d, P("design.json").c_str(), 1), AIC_OK)
      << aic_last_error();
  aic_simulate_options sim;
  aic_simulate_options_default(&sim);
  sim.responses_per_triplet = 8;
  ASSERT_EQ(aic_simulate(manifest_, P("design.json").c_str(), (kData + "/truth.json").c_str(),
                         &sim, P("responses.tsv").c_str()),
            AIC_OK)
      << aic_last_error();
  aic_clean_summary cs;
  ASSERT_EQ(aic_clean(manifest_, P("responses.tsv").c_str(), 0.7, P("retained.tsv").c_str(),
                      P("audit.tsv").c_str(), &cs),
            AIC_OK);
  EXPECT_EQ(cs.retained_btc + cs.excluded_btc, 48);
  EXPECT_EQ(cs.retained_ptc + cs.excluded_ptc, 48);
  EXPECT_GT(cs.retained_btc, 40);
  aic_fit_options fo;
  aic_fit_options_default(&fo);
  EXPECT_EQ(fo.restarts, 8);
  fo.restarts = 2;
  ASSERT_EQ(aic_fit(manifest_, P("retained.tsv").c_str(), &fo, P("model.json").c_str()),
            AIC_OK)
      << aic_last_error();
  aic_bootstrap_options bo;
  aic_bootstrap_options_default(&bo);
  EXPECT_EQ(bo.replicates, 1000);
  bo.replicates = 10;
  bo.threads = 2;
  bo.fit = fo;
  double width = 0;
  ASSERT_EQ(aic_bootstrap(manifest_, P("retained.tsv").c_str(), P("model.json").c_str(), &bo,
                          P("bands.tsv").c_str(), &width),
            AIC_OK)
      << aic_last_error();
  EXPECT_GT(width, 0.0);
  EXPECT_LT(width, 2.0);
  ASSERT_EQ(aic_plot_data(manifest_, P("model.json").c_str(), P("bands.tsv").c_str(), 100,
                          P("plot.tsv").c_str()),
            AIC_OK);
  ASSERT_EQ(aic_bench(manifest_, P("bands.tsv").c_str(), (kData + "/scores").c_str(),
                      AIC_SIGNIFICANCE_PER_CODEC, P("bench.tsv").c_str()),
            AIC_OK)
      << aic_last_error();
  const std::string bench = Slurp(P("bench.tsv"));
  EXPECT_NE(bench.find("butteraugli\thigher-is-worse\t100"), std::string::npos);
  EXPECT_NE(bench.find("per-codec SRCC"), std::string::npos);
  EXPECT_EQ(aic_bench(manifest_, P("model.json").c_str(), P("no_scores").c_str(),
                      AIC_SIGNIFICANCE_NONE, P("x.tsv").c_str()),
            AIC_NOT_FOUND);
}

TEST_F(CapiTest, RunRejectsUnknownStage) {
  char* report = nullptr;
  EXPECT_EQ(aic_run((kData + "/run.json").c_str(), "design,train", &report),
            AIC_INVALID_ARGUMENT);
  EXPECT_EQ(report, nullptr);
}

}  // namespace
