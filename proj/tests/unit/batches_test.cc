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
#include "design/batches.h"

#include <chrono>
#include <map>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace aic::design {
namespace {

using testing::Ref;

void ExpectMirrorsColocated(const Design& d) {
  for (const auto& b : d.batches) {
    std::set<std::string> ids(b.questions.begin(), b.questions.end());
    EXPECT_EQ(ids.size(), b.questions.size());
    for (const auto& id : b.questions) {
      const Triplet* t = d.FindTriplet(id);
      ASSERT_NE(t, nullptr) << id;
      EXPECT_TRUE(ids.count(t->MirrorId())) << id << " without mirror in " << b.id;
    }
    for (size_t i = 1; i < b.questions.size(); ++i) {
      EXPECT_NE(d.FindTriplet(b.questions[i])->MirrorId(), b.questions[i - 1])
          << "adjacent mirrors in " << b.id;
    }
  }
}

TEST(BatchesTest, FullStudyCombinatorics) {
  auto m = testing::MakeManifest(5, 4, 5);
  DesignOptions opt;
  opt.seed = 42;
  for (Method method : {Method::kBtc, Method::kPtc}) {
    auto d = GenerateDesign(m, method, opt);
    ASSERT_TRUE(d.ok()) << d.status();
    EXPECT_EQ(d->triplets.size(), 720u);
    ASSERT_EQ(d->batches.size(), 6u);
    std::map<std::string, int> per_source;
    int cross = 0;
    for (const auto& t : d->triplets) {
      per_source[t.source_id]++;
      cross += t.kind == TripletKind::kCrossCodec;
      EXPECT_EQ(t.method, method);
    }
    for (const auto& [s, n] : per_source) EXPECT_EQ(n, 144) << s;
    EXPECT_EQ(cross, 120);
    for (const auto& b : d->batches) {
      EXPECT_EQ(b.questions.size(), 120u);
      // Round-robin dealing: 24 per source, 4 cross-codec per source.
      std::map<std::string, int> src;
      int cross_in_batch = 0;
      for (const auto& id : b.questions) {
        const auto* t = d->FindTriplet(id);
        src[t->source_id]++;
        cross_in_batch += t->kind == TripletKind::kCrossCodec;
      }
      for (const auto& [s, n] : src) EXPECT_EQ(n, 24) << b.id << " " << s;
      EXPECT_EQ(cross_in_batch, 20) << b.id;
    }
    ExpectMirrorsColocated(*d);
  }
}

TEST(BatchesTest, SinglePair) {
  auto t = Triplet::Make(Method::kBtc, "s1", Ref("c1", 1), StimulusRef::Source());
  auto b = AssignBatches({t, t.Mirror()}, 2, 1);
  ASSERT_TRUE(b.ok()) << b.status();
  ASSERT_EQ(b->size(), 1u);
  EXPECT_EQ((*b)[0].questions.size(), 2u);
  EXPECT_EQ((*b)[0].id, "btc-1");
}

TEST(BatchesTest, OneSourceIntoThreeBatches) {
  auto m = testing::MakeManifest(1, 4, 5);
  auto ts = GenerateTriplets(m, Method::kPtc, DesignOptions{});
  ASSERT_TRUE(ts.ok());
  ASSERT_EQ(ts->size(), 144u);
  auto b = AssignBatches(*ts, 48, 3);
  ASSERT_TRUE(b.ok()) << b.status();
  ASSERT_EQ(b->size(), 3u);
  Design d;
  d.triplets = *ts;
  d.batches = *b;
  d.Reindex();
  ExpectMirrorsColocated(d);
  // Exhaustive scan over all pairs: mirrored triplets share a batch.
  std::map<std::string, std::string> home;
  for (const auto& batch : *b) {
    for (const auto& id : batch.questions) home[id] = batch.id;
  }
  for (const auto& x : *ts) {
    for (const auto& y : *ts) {
      if (x.left == y.right && x.right == y.left) EXPECT_EQ(home[x.id], home[y.id]);
    }
  }
}

TEST(BatchesTest, MirrorClosure) {
  auto ts = GenerateTriplets(testing::MakeManifest(3, 3, 4), Method::kBtc, DesignOptions{});
  ASSERT_TRUE(ts.ok()) << ts.status();
  std::set<std::string> ids;
  for (const auto& t : *ts) ids.insert(t.id);
  for (const auto& t : *ts) EXPECT_TRUE(ids.count(t.MirrorId()));
}

TEST(BatchesTest, Errors) {
  auto t = Triplet::Make(Method::kBtc, "s1", Ref("c1", 1), StimulusRef::Source());
  auto u = Triplet::Make(Method::kBtc, "s1", Ref("c1", 2), StimulusRef::Source());
  EXPECT_FALSE(AssignBatches({t, t.Mirror()}, 3, 1).ok());
  EXPECT_FALSE(AssignBatches({t, t.Mirror(), u, u.Mirror()}, 6, 1).ok());
  auto no_mirror = AssignBatches({t, u}, 2, 1);
  ASSERT_FALSE(no_mirror.ok());
  EXPECT_THAT(no_mirror.status().message(), ::testing::HasSubstr("mirror"));
  EXPECT_FALSE(AssignBatches({t, t.Mirror(), t, t.Mirror()}, 2, 1).ok());
  auto p = Triplet::Make(Method::kPtc, "s1", Ref("c1", 1), StimulusRef::Source());
  EXPECT_FALSE(AssignBatches({t, t.Mirror(), p, p.Mirror()}, 2, 1).ok());
}

TEST(BatchesTest, DeterministicAndSeedSensitive) {
  auto m = testing::MakeManifest(5, 4, 5);
  DesignOptions opt;
  opt.seed = 8;
  auto a = GenerateDesign(m, Method::kBtc, opt);
  auto b = GenerateDesign(m, Method::kBtc, opt);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(SerializeDesign(*a), SerializeDesign(*b));
  opt.seed = 9;
  auto c = GenerateDesign(m, Method::kBtc, opt);
  EXPECT_NE(SerializeDesign(*a), SerializeDesign(*c));
}

TEST(BatchesTest, FileRoundTripAndMerge) {
  auto m = testing::MakeManifest(2, 2, 3);
  DesignOptions opt;
  opt.cross_count = 2;
  opt.batch_size = 26;
  auto btc = GenerateDesign(m, Method::kBtc, opt);
  auto ptc = GenerateDesign(m, Method::kPtc, opt);
  ASSERT_TRUE(btc.ok() && ptc.ok()) << btc.status() << ptc.status();
  Design all = *btc;
  all.Merge(*ptc);
  EXPECT_EQ(all.BatchesFor(Method::kBtc).size(), btc->batches.size());
  EXPECT_EQ(all.BatchesFor(Method::kPtc).size(), ptc->batches.size());
  auto dir = testing::TempDir("design");
  ASSERT_TRUE(WriteDesign(all, dir / "d.json").ok());
  auto back = LoadDesign(dir / "d.json");
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(SerializeDesign(*back), SerializeDesign(all));
  EXPECT_NE(back->FindBatch("ptc-1"), nullptr);
  EXPECT_EQ(back->FindTriplet("nope"), nullptr);
}

TEST(BatchesTest, ParseRejectsInconsistentIds) {
  EXPECT_FALSE(ParseDesign(R"({"triplets": [{"id": "btc|s1|c1:1|SOURCE", "method": "btc",
      "source": "s1", "left": "c1:2", "right": "SOURCE", "kind": "same_codec"}],
      "batches": []})").ok());
  EXPECT_FALSE(ParseDesign(R"({"triplets": [{"id": "btc|s1|SOURCE|SOURCE", "method": "btc",
      "source": "s1", "left": "SOURCE", "right": "SOURCE", "kind": "same_codec"}],
      "batches": []})").ok());
  EXPECT_FALSE(ParseDesign("not json").ok());
}

}  // namespace
}  // namespace aic::design
