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
#include "design/triplet.h"

#include <set>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace aic::design {
namespace {

using testing::Ref;

TEST(TripletTest, MethodNames) {
  EXPECT_EQ(MethodName(Method::kBtc), "btc");
  EXPECT_EQ(*ParseMethod("ptc"), Method::kPtc);
  EXPECT_FALSE(ParseMethod("dsis").ok());
}

TEST(TripletTest, StimulusRefText) {
  EXPECT_EQ(StimulusRef::Source().ToString(), "SOURCE");
  EXPECT_EQ(Ref("jxl", 3).ToString(), "jxl:3");
  EXPECT_EQ(*StimulusRef::Parse("jxl:3"), Ref("jxl", 3));
  EXPECT_TRUE(StimulusRef::Parse("SOURCE")->IsSource());
  EXPECT_FALSE(StimulusRef::Parse("jxl").ok());
  EXPECT_FALSE(StimulusRef::Parse("jxl:0").ok());
  EXPECT_FALSE(StimulusRef::Parse(":2").ok());
}

TEST(TripletTest, MakeAndMirror) {
  auto t = Triplet::Make(Method::kBtc, "s1", Ref("c1", 2), StimulusRef::Source());
  EXPECT_EQ(t.id, "btc|s1|c1:2|SOURCE");
  EXPECT_EQ(t.kind, TripletKind::kSameCodec);
  EXPECT_EQ(t.LevelDifference(), 2);
  auto m = t.Mirror();
  EXPECT_EQ(m.id, "btc|s1|SOURCE|c1:2");
  EXPECT_EQ(m.id, t.MirrorId());
  EXPECT_EQ(m.Mirror().id, t.id);
  auto x = Triplet::Make(Method::kPtc, "s1", Ref("c1", 2), Ref("c2", 5));
  EXPECT_EQ(x.kind, TripletKind::kCrossCodec);
  EXPECT_EQ(x.LevelDifference(), 3);
}

// Oracle: every ordered pair of distinct elements of {SOURCE, 1..L}.
std::set<std::pair<int, int>> AllOrderedPairs(int levels) {
  std::set<std::pair<int, int>> out;
  for (int a = 0; a <= levels; ++a) {
    for (int b = 0; b <= levels; ++b) {
      if (a != b) out.insert({a, b});
    }
  }
  return out;
}

TEST(TripletTest, SameCodecCounts) {
  for (int levels : {1, 3, 5}) {
    auto m = testing::MakeManifest(1, 2, levels);
    auto ts = GenerateSameCodec(m, "s1", "c2", Method::kPtc);
    ASSERT_TRUE(ts.ok()) << ts.status();
    std::set<std::pair<int, int>> got;
    for (const auto& t : *ts) {
      EXPECT_EQ(t.kind, TripletKind::kSameCodec);
      EXPECT_EQ(t.source_id, "s1");
      EXPECT_NE(t.left, t.right);
      for (const auto* ref : {&t.left, &t.right}) {
        if (!ref->IsSource()) EXPECT_EQ(ref->codec, "c2");
      }
      EXPECT_TRUE(got.insert({t.left.level, t.right.level}).second);
    }
    EXPECT_EQ(got, AllOrderedPairs(levels));
  }
  EXPECT_EQ(GenerateSameCodec(testing::MakeManifest(1, 1, 1), "s1", "c1", Method::kBtc)->size(),
            2u);
  EXPECT_EQ(GenerateSameCodec(testing::MakeManifest(1, 1, 3), "s1", "c1", Method::kBtc)->size(),
            12u);
  EXPECT_EQ(GenerateSameCodec(testing::MakeManifest(1, 1, 5), "s1", "c1", Method::kBtc)->size(),
            30u);
  EXPECT_FALSE(GenerateSameCodec(testing::MakeManifest(1, 1, 5), "s1", "zz", Method::kBtc).ok());
}

TEST(TripletTest, CrossCodecBalancedAcrossPairs) {
  auto m = testing::MakeManifest(1, 4, 5);
  auto ts = GenerateCrossCodec(m, "s1", Method::kBtc, 24, 99);
  ASSERT_TRUE(ts.ok()) << ts.status();
  ASSERT_EQ(ts->size(), 24u);
  std::map<std::pair<std::string, std::string>, int> per_pair;
  std::set<std::string> ids;
  for (const auto& t : *ts) {
    EXPECT_EQ(t.kind, TripletKind::kCrossCodec);
    EXPECT_FALSE(t.left.IsSource());
    EXPECT_FALSE(t.right.IsSource());
    EXPECT_NE(t.left.codec, t.right.codec);
    ids.insert(t.id);
    per_pair[std::minmax(t.left.codec, t.right.codec)]++;
  }
  EXPECT_EQ(ids.size(), 24u);
  EXPECT_EQ(per_pair.size(), 6u);
  for (const auto& [pair, n] : per_pair) EXPECT_EQ(n, 4) << pair.first << "/" << pair.second;
  for (const auto& t : *ts) EXPECT_TRUE(ids.count(t.MirrorId())) << t.id;
}

TEST(TripletTest, CrossCodecTwoCodecs) {
  auto ts = GenerateCrossCodec(testing::MakeManifest(1, 2, 5), "s1", Method::kPtc, 2, 1);
  ASSERT_TRUE(ts.ok());
  ASSERT_EQ(ts->size(), 2u);
  EXPECT_EQ((*ts)[0].MirrorId(), (*ts)[1].id);
}

TEST(TripletTest, CrossCodecDeterministicAndSharedAcrossMethods) {
  auto m = testing::MakeManifest(2, 4, 5);
  auto a = GenerateCrossCodec(m, "s2", Method::kBtc, 24, 5);
  auto b = GenerateCrossCodec(m, "s2", Method::kBtc, 24, 5);
  auto p = GenerateCrossCodec(m, "s2", Method::kPtc, 24, 5);
  ASSERT_TRUE(a.ok() && b.ok() && p.ok());
  for (size_t i = 0; i < a->size(); ++i) {
    EXPECT_EQ((*a)[i].id, (*b)[i].id);
    EXPECT_EQ((*a)[i].left, (*p)[i].left);
    EXPECT_EQ((*a)[i].right, (*p)[i].right);
  }
  auto other = GenerateCrossCodec(m, "s2", Method::kBtc, 24, 6);
  bool differs = false;
  for (size_t i = 0; i < a->size(); ++i) differs |= (*a)[i].id != (*other)[i].id;
  EXPECT_TRUE(differs);
}

TEST(TripletTest, CrossCodecErrors) {
  auto m = testing::MakeManifest(1, 4, 5);
  EXPECT_FALSE(GenerateCrossCodec(testing::MakeManifest(1, 1, 5), "s1", Method::kBtc, 2, 1).ok());
  EXPECT_FALSE(GenerateCrossCodec(m, "s1", Method::kBtc, 5, 1).ok());
  EXPECT_FALSE(GenerateCrossCodec(m, "s1", Method::kBtc, 10, 1).ok());
  auto loose = GenerateCrossCodec(m, "s1", Method::kBtc, 10, 1, /*balanced=*/false);
  ASSERT_TRUE(loose.ok()) << loose.status();
  EXPECT_EQ(loose->size(), 10u);
  // 2 codecs x 2 levels offers 4 comparisons per pair.
  EXPECT_FALSE(GenerateCrossCodec(testing::MakeManifest(1, 2, 2), "s1", Method::kBtc, 10, 1).ok());
}

}  // namespace
}  // namespace aic::design
