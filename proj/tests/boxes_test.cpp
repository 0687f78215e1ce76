// Copyright 2026 The nbl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "nbl/boxes.hpp"
#include "nbl/error.hpp"

namespace nbl {
namespace {

const std::array<std::size_t, 2> kZero{0, 0};
const std::array<std::size_t, 2> kIdentity{0, 1};

CorrelationBox constant_box() { return local_box(kZero, 2, kZero, 2); }

CorrelationBox random_box(std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> table;
  for (int r = 0; r < 4; ++r) {
    std::array<double, 4> v{};
    double total = 0.0;
    for (auto& e : v) total += (e = expo(rng));
    for (double e : v) table.push_back(e / total);
  }
  return CorrelationBox(2, 2, 2, 2, table);
}

TEST(PrBox, Rows) {
  const auto pr = pr_box();
  const std::vector<double> even{0.5, 0.0, 0.0, 0.5};
  const std::vector<double> odd{0.0, 0.5, 0.5, 0.0};
  const auto r00 = pr.row(0, 0);
  const auto r11 = pr.row(1, 1);
  EXPECT_EQ(std::vector<double>(r00.begin(), r00.end()), even);
  EXPECT_EQ(std::vector<double>(r11.begin(), r11.end()), odd);
}

TEST(PrBox, UniformMarginals) {
  const auto pr = pr_box();
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      EXPECT_EQ(marginal_a(pr, x, y), (std::vector<double>{0.5, 0.5}));
      EXPECT_EQ(marginal_b(pr, x, y), (std::vector<double>{0.5, 0.5}));
    }
  }
}

TEST(LocalBox, IdentityMaps) {
  const auto box = local_box(kIdentity, 2, kIdentity, 2);
  EXPECT_EQ(prob(box, 1, 0, 1, 0), 1.0);
  EXPECT_TRUE(is_nonsignaling(box, 0.0));
}

TEST(LocalBox, ConstantMaps) {
  const auto box = constant_box();
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) EXPECT_EQ(prob(box, x, y, 0, 0), 1.0);
}

TEST(Mix, Identity) {
  const std::vector<CorrelationBox> one{pr_box()};
  const std::vector<double> w{1.0};
  EXPECT_EQ(mix(one, w), pr_box());
}

TEST(Mix, TwoLocalBoxes) {
  const std::array<std::size_t, 2> ones{1, 1};
  const std::vector<CorrelationBox> boxes{constant_box(), local_box(ones, 2, ones, 2)};
  const std::vector<double> w{0.5, 0.5};
  const auto m = mix(boxes, w);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      EXPECT_EQ(prob(m, x, y, 0, 0), 0.5);
      EXPECT_EQ(prob(m, x, y, 1, 1), 0.5);
    }
  }
  EXPECT_TRUE(is_nonsignaling(m, 1e-12));
}

TEST(Mix, Associative) {
  std::mt19937_64 rng(11);
  const auto a = random_box(rng), b = random_box(rng), c = random_box(rng);
  const std::vector<CorrelationBox> inner{a, b};
  const std::vector<double> wi{0.25, 0.75};
  const std::vector<CorrelationBox> outer{mix(inner, wi), c};
  const std::vector<double> wo{0.4, 0.6};
  const std::vector<CorrelationBox> flat{a, b, c};
  const std::vector<double> wf{0.1, 0.3, 0.6};
  const auto lhs = mix(outer, wo);
  const auto rhs = mix(flat, wf);
  for (std::size_t e = 0; e < lhs.table().size(); ++e) EXPECT_NEAR(lhs.table()[e], rhs.table()[e], 1e-12);
}

TEST(Mix, RejectsBadWeights) {
  const std::vector<CorrelationBox> boxes{pr_box(), constant_box()};
  const std::vector<double> w{0.7, 0.7};
  EXPECT_THROW(mix(boxes, w), PreconditionError);
}

TEST(Box, RejectsUnnormalizedRow) {
  std::vector<double> table(16, 0.25);
  table[0] = 0.3;
  EXPECT_THROW(CorrelationBox(2, 2, 2, 2, table), PreconditionError);
  table[0] = -0.25;
  EXPECT_THROW(CorrelationBox(2, 2, 2, 2, table), PreconditionError);
}

TEST(Prob, Examples) {
  EXPECT_EQ(prob(pr_box(), 0, 0, 0, 0), 0.5);
  EXPECT_EQ(prob(constant_box(), 1, 1, 0, 0), 1.0);
}

TEST(Sample, MatchesTable) {
  std::mt19937_64 rng(2026);
  const auto box = random_box(rng);
  constexpr int kDraws = 1'000'000;
  std::array<int, 4> counts{};
  for (int i = 0; i < kDraws; ++i) {
    const auto [a, b] = sample(box, 1, 0, rng);
    ++counts[a * 2 + b];
  }
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      EXPECT_NEAR(counts[a * 2 + b] / double(kDraws), prob(box, 1, 0, a, b), 5e-3);
}

TEST(TvCloseness, Examples) {
  EXPECT_EQ(tv_closeness(pr_box(), pr_box()), 0.0);
  EXPECT_EQ(tv_closeness(pr_box(), constant_box()), 1.0);
}

TEST(TvCloseness, ConvexInMixture) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto b1 = random_box(rng), b2 = random_box(rng);
    const double t = std::uniform_real_distribution<double>(0, 1)(rng);
    const std::vector<CorrelationBox> boxes{b1, b2};
    const std::vector<double> w{1 - t, t};
    EXPECT_LE(tv_closeness(mix(boxes, w), b1), t * tv_closeness(b2, b1) + 1e-15);
  }
}

TEST(TvCloseness, IsAMetric) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_box(rng), b = random_box(rng), c = random_box(rng);
    EXPECT_EQ(tv_closeness(a, b), tv_closeness(b, a));
    EXPECT_LE(tv_closeness(a, c), tv_closeness(a, b) + tv_closeness(b, c) + 1e-15);
    EXPECT_EQ(tv_closeness(a, a), 0.0);
    EXPECT_GT(tv_closeness(a, b), 0.0);
  }
}

TEST(NonSignaling, Examples) {
  EXPECT_TRUE(is_nonsignaling(pr_box(), 1e-12));
  // a reveals y
  std::vector<double> table;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t e = 0; e < 4; ++e) table.push_back(e == y * 2 ? 1.0 : 0.0);
  const CorrelationBox signaling(2, 2, 2, 2, table);
  EXPECT_FALSE(is_nonsignaling(signaling, 1e-12));
  EXPECT_EQ(signaling_defect(signaling), 1.0);
}

TEST(NonSignaling, PreservedByMix) {
  const std::array<std::size_t, 2> flip{1, 0};
  const std::vector<CorrelationBox> boxes{pr_box(), local_box(flip, 2, kIdentity, 2), constant_box()};
  const std::vector<double> w{0.2, 0.5, 0.3};
  EXPECT_TRUE(is_nonsignaling(mix(boxes, w), 1e-12));
}

TEST(TvDistance, Joint) {
  const JointDistribution p(2, 2, {0.5, 0, 0, 0.5});
  const JointDistribution q(2, 2, {0, 0.5, 0.5, 0});
  EXPECT_EQ(tv_distance(p, q), 1.0);
  EXPECT_EQ(tv_distance(p, p), 0.0);
}

}  // namespace
}  // namespace nbl
