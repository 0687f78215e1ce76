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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nbl/error.hpp"
#include "nbl/games.hpp"

namespace nbl {
namespace {

TEST(WinProb, PrBoxAlwaysWins) {
  for (double p : {0.0, 0.3, 0.5, 1.0})
    for (double q : {0.0, 0.5, 0.9}) EXPECT_EQ(win_prob(pr_box(), p, q), 1.0);
}

TEST(WinProb, ConstantBox) {
  const std::array<std::size_t, 2> zero{0, 0};
  const auto box = local_box(zero, 2, zero, 2);
  for (double p : {0.5, 0.6, 0.8, 1.0}) EXPECT_NEAR(win_prob(box, p, 0.5), 1 - p / 2, 1e-15);
}

TEST(WinProb, ClassicalMaximum) {
  double best = 0.0;
  for (const auto& box : deterministic_binary_boxes())
    if (is_nonsignaling(box, 0.0)) best = std::max(best, win_prob(box, 0.5, 0.5));
  EXPECT_EQ(best, 0.75);
}

TEST(WinProb, AffineInP) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = BellBoxSpec::uniform({random_unitary(rng), random_unitary(rng)},
                                           {random_unitary(rng), random_unitary(rng)});
    const auto box = bell_box(spec, TwoQubitState::phi_plus());
    const double a = win_prob(box, 0.5, 0.5), b = win_prob(box, 0.75, 0.5), c = win_prob(box, 1.0, 0.5);
    EXPECT_NEAR(b, 0.5 * (a + c), 1e-14);
    for (int i = 0; i <= 100; ++i) {
      const double p = 0.5 + 0.005 * i;
      EXPECT_LE(win_prob(box, p, 0.5), omega(p) + 1e-9);
    }
  }
}

TEST(Omega, Values) {
  EXPECT_NEAR(omega(0.5), 0.8535533906, 1e-10);
  EXPECT_EQ(omega(1.0), 1.0);
  EXPECT_NEAR(omega(0.75), 0.8952847075, 1e-10);
}

TEST(BiasedBound, Values) {
  for (double p : {0.5, 0.6, 0.75, 0.9, 1.0}) EXPECT_NEAR(biased_bound(p, 0.5), omega(p), 1e-15);
  EXPECT_NEAR(biased_bound(0.5, 0.5), 0.8535533906, 1e-10);
  EXPECT_NEAR(biased_bound(1.0, 0.5), 1.0, 1e-15);
  EXPECT_FALSE(in_biased_regime(0.9, 0.7));
  EXPECT_THROW(biased_bound(0.9, 0.7), PreconditionError);
}

TEST(OptimalStrategy, Anchors) {
  EXPECT_NEAR(optimal_strategy(0.5).value, 0.8535533906, 1e-6);
  EXPECT_NEAR(optimal_strategy(1.0).value, 1.0, 1e-6);
  EXPECT_NEAR(optimal_strategy(0.75).value, 0.8952847075, 1e-6);
}

TEST(OptimalStrategy, MonotoneAndDeterministic) {
  double previous = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double p = 0.5 + 0.05 * i;
    const auto r = optimal_strategy(p);
    EXPECT_TRUE(r.reached_target);
    EXPECT_LE(r.value, omega(p) + 1e-9);
    EXPECT_GE(r.value, previous - 1e-6);
    previous = r.value;
  }
  EXPECT_EQ(optimal_strategy(0.65).strategy.angles, optimal_strategy(0.65).strategy.angles);
}

TEST(OptimalStrategy, BoxIsBell) {
  const auto box = optimal_strategy(0.6).strategy.box();
  EXPECT_TRUE(is_nonsignaling(box, 1e-10));
  EXPECT_NEAR(win_prob(box, 0.6, 0.5), omega(0.6), 1e-6);
}

}  // namespace
}  // namespace nbl
