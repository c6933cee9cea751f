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
#include "bench/correlation.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace aic::bench {
namespace {

// Rank of v[i]: 1 + (# smaller) + (# equal others) / 2.
std::vector<double> BruteForceRanks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    int less = 0, equal = 0;
    for (size_t j = 0; j < v.size(); ++j) {
      less += v[j] < v[i];
      equal += j != i && v[j] == v[i];
    }
    r[i] = 1 + less + equal / 2.0;
  }
  return r;
}

long double PearsonLd(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(CorrelationTest, LinearAndMonotone) {
  std::vector<double> x = {0.3, 1.1, 2.5, 3.0, 4.7, 5.2};
  std::vector<double> lin, cube;
  for (double v : x) lin.push_back(2 * v + 1), cube.push_back(-v * v * v);
  EXPECT_NEAR(*Plcc(x, lin), 1.0, 1e-15);
  EXPECT_NEAR(*Srcc(x, lin), 1.0, 1e-15);
  const double p = *Plcc(x, cube);
  EXPECT_GT(p, -1.0);
  EXPECT_LT(p, 0.0);
  EXPECT_NEAR(*Srcc(x, cube), -1.0, 1e-15);
}

TEST(CorrelationTest, TiedRanksMatchBruteForce) {
  const std::vector<double> x = {1.0, 2.0, 2.0, 4.0, 5.0};
  const std::vector<double> y = {1.5, 1.0, 3.0, 2.5, 4.0};
  EXPECT_EQ(AverageRanks(x), (std::vector<double>{1, 2.5, 2.5, 4, 5}));
  const double oracle = static_cast<double>(PearsonLd(BruteForceRanks(x), BruteForceRanks(y)));
  EXPECT_NEAR(*Srcc(x, y), oracle, 1e-14);
  // Hand value: ranks x (1,2.5,2.5,4,5), y (2,1,4,3,5); centered cross sum
  // 6.5, squared sums 9.5 and 10.
  EXPECT_NEAR(oracle, 6.5 / std::sqrt(95.0), 1e-14);
}

TEST(CorrelationTest, Errors) {
  std::vector<double> a = {1, 2}, b = {2, 3};
  EXPECT_FALSE(Plcc(a, b).ok());
  std::vector<double> flat = {1, 1, 1, 1}, x = {1, 2, 3, 4};
  EXPECT_FALSE(Plcc(flat, x).ok());
  EXPECT_FALSE(Srcc(x, flat).ok());
  std::vector<double> shorter = {1, 2, 3};
  EXPECT_FALSE(Plcc(x, shorter).ok());
}

TEST(CorrelationTest, InvariancesOverRandomVectors) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> len(3, 60);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = g(rng);
      y[i] = 0.5 * x[i] + g(rng);
      if (trial % 5 == 0) x[i] = std::round(x[i]);  // inject ties
    }
    auto p = Plcc(x, y);
    auto s = Srcc(x, y);
    if (!p.ok() || !s.ok()) continue;
    EXPECT_GE(*p, -1.0);
    EXPECT_LE(*p, 1.0);
    EXPECT_GE(*s, -1.0);
    EXPECT_LE(*s, 1.0);
    EXPECT_NEAR(*Plcc(y, x), *p, 1e-12);
    EXPECT_NEAR(*Srcc(y, x), *s, 1e-12);
    EXPECT_NEAR(*p, static_cast<double>(PearsonLd(x, y)), 1e-12);
    std::vector<double> affine(n), mono(n), neg(n);
    for (int i = 0; i < n; ++i) {
      affine[i] = 3.5 * x[i] - 2;
      mono[i] = std::exp(x[i]) + x[i] * x[i] * x[i];
      neg[i] = -x[i];
    }
    EXPECT_NEAR(*Plcc(affine, y), *p, 1e-12);
    EXPECT_NEAR(*Srcc(mono, y), *s, 1e-12);
    EXPECT_NEAR(*Plcc(neg, y), -*p, 1e-12);
    EXPECT_NEAR(*Srcc(neg, y), -*s, 1e-12);
  }
}

// Reference values from an independent 30-digit evaluation of the formula.
TEST(CorrelationTest, MrrOracles) {
  struct Case {
    double ra, rb, rab;
    int n;
    double z, p;
  };
  const Case cases[] = {
      {0.7, 0.5, 0.6, 40, 1.8271679612808583, 0.06767451944436561},
      {-0.62, -0.41, 0.35, 25, -1.0821404594295803, 0.27919012020376469},
      {0.946, 0.886, 0.85, 100, 3.5959984275755772, 0.00032314975014086519},
      {0.7, 0.5, -0.5, 40, 1.116759572810953, 0.2640971385902057},
  };
  for (const auto& c : cases) {
    auto r = MengRosenthalRubin(c.ra, c.rb, c.rab, c.n);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r->z, c.z, 1e-12 * std::abs(c.z));
    EXPECT_NEAR(r->p, c.p, 1e-12 * c.p + 1e-15);
  }
}

TEST(CorrelationTest, MrrProperties) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = u(rng), b = u(rng), ab = u(rng);
    const int n = 10 + trial % 200;
    auto same = MengRosenthalRubin(a, a, ab, n);
    EXPECT_EQ(same->z, 0.0);
    EXPECT_DOUBLE_EQ(same->p, 1.0);
    auto f = MengRosenthalRubin(a, b, ab, n);
    auto r = MengRosenthalRubin(b, a, ab, n);
    ASSERT_TRUE(f.ok() && r.ok());
    EXPECT_NEAR(f->z, -r->z, 1e-12);
    EXPECT_NEAR(f->p, r->p, 1e-12);
    EXPECT_GE(f->p, 0.0);
    EXPECT_LE(f->p, 1.0);
  }
  EXPECT_FALSE(MengRosenthalRubin(1.0, 0.5, 0.3, 40).ok());
  EXPECT_FALSE(MengRosenthalRubin(0.5, 0.4, 1.0, 40).ok());
  EXPECT_FALSE(MengRosenthalRubin(0.5, 0.4, 0.3, 3).ok());
}

TEST(CorrelationTest, TwoSidedNormalP) {
  EXPECT_DOUBLE_EQ(TwoSidedNormalP(0), 1.0);
  EXPECT_NEAR(TwoSidedNormalP(1.959963984540054), 0.05, 1e-15);
  EXPECT_NEAR(TwoSidedNormalP(-1.0), 2 * (1 - 0.8413447460685429486), 1e-15);
}

}  // namespace
}  // namespace aic::bench
