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
#include "cleansing/cleansing.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "design/batches.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "scale/simulate.h"
#include "test_util.h"

namespace aic::cleansing {
namespace {

using design::Method;
using design::StimulusRef;
using design::Triplet;
using store::Choice;
using testing::Record;
using testing::Ref;

BatchInstance Instance(std::vector<store::ResponseRecord> rows) {
  BatchInstance b;
  b.participant_id = "p1";
  b.batch_id = "btc-1";
  b.responses = std::move(rows);
  return b;
}

// Weight 1: c1:1 vs c1:2, correct = right. Weight 5: SOURCE vs c1:5, correct = right.
const Triplet kW1 = Triplet::Make(Method::kBtc, "s1", Ref("c1", 1), Ref("c1", 2));
const Triplet kW5 = Triplet::Make(Method::kBtc, "s1", StimulusRef::Source(), Ref("c1", 5));

TEST(CleansingTest, AccuracyExamples) {
  const auto m = testing::MakeManifest(1, 2, 5);
  EXPECT_DOUBLE_EQ(*Accuracy(Instance({Record(kW1, Choice::kRight), Record(kW5, Choice::kRight)}), &m), 1.0);
  EXPECT_DOUBLE_EQ(
      *Accuracy(Instance({Record(kW1, Choice::kNotSure), Record(kW5, Choice::kNotSure)}), &m),
      0.5);
  EXPECT_DOUBLE_EQ(*Accuracy(Instance({Record(kW1, Choice::kLeft), Record(kW5, Choice::kRight)}), &m),
                   5.0 / 6.0);
  // Skips and cross-codec questions do not count.
  const auto cross = Triplet::Make(Method::kBtc, "s1", Ref("c1", 1), Ref("c2", 5));
  EXPECT_DOUBLE_EQ(*Accuracy(Instance({Record(kW1, Choice::kLeft), Record(kW5, Choice::kRight),
                                       Record(kW5.Mirror(), Choice::kSkip),
                                       Record(cross, Choice::kRight)}),
                             &m),
                   5.0 / 6.0);
  // Without a manifest the level order decides.
  EXPECT_DOUBLE_EQ(*Accuracy(Instance({Record(kW1, Choice::kLeft), Record(kW5, Choice::kRight)})),
                   5.0 / 6.0);
  auto none = Accuracy(Instance({Record(kW1, Choice::kSkip), Record(cross, Choice::kLeft)}), &m);
  EXPECT_EQ(none.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(CleansingTest, ConsistencyExamples) {
  const auto m = testing::MakeManifest(1, 1, 5);
  const auto w1m = kW1.Mirror();
  const auto w5m = kW5.Mirror();
  EXPECT_DOUBLE_EQ(*Consistency(Instance({Record(kW1, Choice::kRight), Record(w1m, Choice::kLeft),
                                          Record(kW5, Choice::kRight), Record(w5m, Choice::kLeft)}),
                                &m),
                   1.0);
  // Two equal-weight pairs: (correct, not sure) and (correct, correct).
  const auto b1 = Triplet::Make(Method::kBtc, "s1", Ref("c1", 3), Ref("c1", 4));
  EXPECT_DOUBLE_EQ(*Consistency(Instance({Record(kW1, Choice::kRight), Record(w1m, Choice::kNotSure),
                                          Record(b1, Choice::kRight),
                                          Record(b1.Mirror(), Choice::kLeft)}),
                                &m),
                   0.6875);
  // Both incorrect agree; correct vs incorrect does not.
  EXPECT_DOUBLE_EQ(*Consistency(Instance({Record(kW1, Choice::kLeft), Record(w1m, Choice::kRight)}), &m),
                   1.0);
  EXPECT_DOUBLE_EQ(*Consistency(Instance({Record(kW1, Choice::kLeft), Record(w1m, Choice::kLeft)}), &m),
                   0.0);
  EXPECT_DOUBLE_EQ(
      *Consistency(Instance({Record(kW1, Choice::kNotSure), Record(w1m, Choice::kNotSure)}), &m), 1.0);
  // Weighted by the pair's level gap: weight 1 at 0.375, weight 5 at 0.
  EXPECT_DOUBLE_EQ(*Consistency(Instance({Record(kW1, Choice::kRight), Record(w1m, Choice::kNotSure),
                                          Record(kW5, Choice::kRight), Record(w5m, Choice::kRight)}),
                                &m),
                   0.375 / 6.0);
  // A pair with a skip is ignored.
  EXPECT_DOUBLE_EQ(*Consistency(Instance({Record(kW1, Choice::kRight), Record(w1m, Choice::kSkip),
                                          Record(kW5, Choice::kRight), Record(w5m, Choice::kLeft)}),
                                &m),
                   1.0);
}

TEST(CleansingTest, ThresholdArithmetic) {
  std::vector<BatchInstance> v(4);
  v[0].accuracy = 0.9, v[0].consistency = 0.6;     // 0.75 kept
  v[1].accuracy = 0.7, v[1].consistency = 0.7;     // 0.70 kept
  v[2].accuracy = 0.8, v[2].consistency = 0.59;    // 0.695 dropped
  v[3].note = "no same-codec responses";           // unscored dropped
  for (int i = 0; i < 4; ++i) v[i].batch_id = absl::StrCat("btc-", i + 1);
  auto r = FilterInstances(v, 0.7);
  ASSERT_EQ(r.retained.size(), 2u);
  EXPECT_EQ(r.retained[0].batch_id, "btc-1");
  EXPECT_EQ(r.retained[1].batch_id, "btc-2");
  ASSERT_EQ(r.excluded.size(), 2u);
  const std::string audit = AuditReport(r, 0.7);
  EXPECT_THAT(audit, ::testing::HasSubstr("btc-3"));
  EXPECT_THAT(audit, ::testing::HasSubstr("no same-codec responses"));
}

TEST(CleansingTest, GroupAndFlatten) {
  std::vector<store::ResponseRecord> rows = {
      Record(kW1, Choice::kLeft, "p2", "btc-1"), Record(kW5, Choice::kLeft, "p1", "btc-1"),
      Record(kW1, Choice::kLeft, "p1", "btc-2"), Record(kW5, Choice::kRight, "p2", "btc-1")};
  auto g = GroupInstances(rows);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].participant_id, "p2");
  EXPECT_EQ(g[0].responses.size(), 2u);
  EXPECT_EQ(g[2].batch_id, "btc-2");
  EXPECT_EQ(Flatten(g).size(), 4u);
}

class CleansingPropertyTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manifest_ = testing::MakeManifest(2, 2, 5);
    design::DesignOptions opt;
    opt.cross_count = 4;
    opt.batch_size = 128;
    auto d = design::GenerateDesign(manifest_, Method::kBtc, opt);
    ASSERT_TRUE(d.ok()) << d.status();
    design_ = *d;
  }

  BatchInstance Random(std::mt19937_64& rng) {
    const auto& b = design_.batches[0];
    std::vector<store::ResponseRecord> rows;
    std::uniform_int_distribution<int> pick(0, 3);
    for (size_t i = 0; i < b.questions.size(); ++i) {
      rows.push_back(Record(*design_.FindTriplet(b.questions[i]),
                            static_cast<Choice>(pick(rng)), "p1", b.id, static_cast<int>(i)));
    }
    return Instance(rows);
  }

  catalog::StudyManifest manifest_;
  design::Design design_;
};

TEST_F(CleansingPropertyTest, InvariantUnderRelabelAndPermutation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = Random(rng);
    const double a = *Accuracy(inst, &manifest_);
    const double c = *Consistency(inst, &manifest_);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    auto shuffled = inst;
    std::shuffle(shuffled.responses.begin(), shuffled.responses.end(), rng);
    for (auto& r : shuffled.responses) r.response.participant_id = "someone-else";
    EXPECT_NEAR(*Accuracy(shuffled, &manifest_), a, 1e-12);
    EXPECT_NEAR(*Consistency(shuffled, &manifest_), c, 1e-12);
    // Swap left/right of every triplet and every choice.
    auto swapped = inst;
    for (auto& r : swapped.responses) {
      r.triplet = r.triplet.Mirror();
      r.response.triplet_id = r.triplet.id;
      if (r.response.choice == Choice::kLeft) {
        r.response.choice = Choice::kRight;
      } else if (r.response.choice == Choice::kRight) {
        r.response.choice = Choice::kLeft;
      }
    }
    EXPECT_NEAR(*Accuracy(swapped, &manifest_), a, 1e-12);
    EXPECT_NEAR(*Consistency(swapped, &manifest_), c, 1e-12);
  }
}

// Dropping not-sure answers moves accuracy toward the weighted correct ratio
// of what remains: half credit lies between 0 and 1.
TEST_F(CleansingPropertyTest, NotSureHalfCreditBound) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = Random(rng);
    const double a = *Accuracy(inst, &manifest_);
    auto sure = inst;
    std::erase_if(sure.responses, [](const store::ResponseRecord& r) {
      return r.response.choice == Choice::kNotSure;
    });
    auto a2 = Accuracy(sure, &manifest_);
    if (!a2.ok()) continue;
    // Accuracy with not-sure included is a convex mix of a2 and 0.5.
    EXPECT_LE(std::min(*a2, 0.5) - 1e-12, a);
    EXPECT_GE(std::max(*a2, 0.5) + 1e-12, a);
  }
}

TEST_F(CleansingPropertyTest, UniformGuesserIsExcluded) {
  Rng rng(11);
  scale::ObserverModel observer;
  int excluded = 0;
  constexpr int kTrials = 300;
  const auto& b = design_.batches[0];
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<store::ResponseRecord> rows;
    for (size_t i = 0; i < b.questions.size(); ++i) {
      rows.push_back(Record(*design_.FindTriplet(b.questions[i]),
                            scale::SampleChoice(0.9, observer, true, rng), "p1", b.id,
                            static_cast<int>(i)));
    }
    std::vector<BatchInstance> v = {Instance(rows)};
    ScoreInstances(v, &manifest_);
    excluded += FilterInstances(v).excluded.size();
  }
  EXPECT_GE(excluded, kTrials * 99 / 100);
}

}  // namespace
}  // namespace aic::cleansing
