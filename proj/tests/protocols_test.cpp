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

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "nbl/error.hpp"
#include "nbl/games.hpp"
#include "nbl/protocols.hpp"
#include "nbl/quantum.hpp"
#include "nbl/sphere_cover.hpp"

namespace nbl {
namespace {

CorrelationBox constant_box() {
  const std::array<std::size_t, 2> zero{0, 0};
  return local_box(zero, 2, zero, 2);
}

CorrelationBox random_bell(std::mt19937_64& rng) {
  return bell_box(BellBoxSpec::uniform({random_unitary(rng), random_unitary(rng)},
                                       {random_unitary(rng), random_unitary(rng)}),
                  TwoQubitState::phi_plus());
}

bool contains(const std::vector<AffineFunction>& family, const AffineFunction& line) {
  return std::any_of(family.begin(), family.end(), [&](const AffineFunction& l) {
    return std::abs(l.intercept - line.intercept) <= 1e-12 && std::abs(l.slope - line.slope) <= 1e-12;
  });
}

TEST(InducedBox, ZeroQueriesIsLocal) {
  ProtocolShape shape;
  const auto protocol = local_protocol(shape, {1, 0}, {0, 0});
  const std::array<std::size_t, 2> f{1, 0}, g{0, 0};
  EXPECT_EQ(induced_box(protocol, pr_box()), local_box(f, 2, g, 2));
}

TEST(InducedBox, PassThroughOnPr) {
  const auto protocol = pass_through_protocol(pr_box());
  EXPECT_EQ(tv_closeness(induced_box(protocol, pr_box()), pr_box()), 0.0);
  const auto check = check_reduction(protocol, pr_box(), pr_box(), 0.0);
  EXPECT_TRUE(check.within);
  EXPECT_EQ(check.tv, 0.0);
}

TEST(InducedBox, SearchFindsPerfectChsh) {
  const ProtocolEnumerator all(ProtocolShape::binary_against(pr_box(), 1));
  bool found = false;
  all.for_each(0, all.size(), [&](std::uint64_t, const DeterministicProtocol& p) {
    found = found || win_prob(induced_box(p, pr_box()), 0.5, 0.5) == 1.0;
  });
  EXPECT_TRUE(found);
}

TEST(InducedBox, ClosureOverBell) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const auto target = random_bell(rng);
    const auto protocol = random_protocol(ProtocolShape::binary_against(target, 1 + trial % 2), rng);
    const auto box = induced_box(protocol, target);
    EXPECT_TRUE(is_nonsignaling(box, 1e-10));
    EXPECT_EQ(box, induced_box(protocol, target));
  }
}

TEST(InducedBox, RejectsMismatchedTarget) {
  const auto protocol = pass_through_protocol(pr_box());
  const auto big = discretized_box(certify_cover(octahedron_points()));
  EXPECT_THROW(induced_box(protocol, big), PreconditionError);
}

TEST(Randomized, SingletonAndLinearity) {
  std::mt19937_64 rng(45);
  const auto target = random_bell(rng);
  const auto shape = ProtocolShape::binary_against(target, 1);
  const auto p1 = random_protocol(shape, rng), p2 = random_protocol(shape, rng);
  EXPECT_EQ(induced_box(RandomizedProtocol({p1}, {1.0}), target), induced_box(p1, target));
  const auto mixed = induced_box(RandomizedProtocol({p1, p2}, {0.5, 0.5}), target);
  const std::vector<CorrelationBox> parts{induced_box(p1, target), induced_box(p2, target)};
  const std::vector<double> w{0.5, 0.5};
  EXPECT_LE(tv_closeness(mixed, mix(parts, w)), 1e-15);
}

TEST(Randomized, BestBeatsAverage) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    const auto target = random_bell(rng);
    const auto shape = ProtocolShape::binary_against(target, 1);
    std::vector<DeterministicProtocol> support;
    std::vector<double> weights;
    for (int i = 0; i < 4; ++i) {
      support.push_back(random_protocol(shape, rng));
      weights.push_back(0.25);
    }
    const double p = 0.5 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double average = win_prob(induced_box(RandomizedProtocol(support, weights), target), p, 0.5);
    double best = 0.0;
    for (const auto& d : support) best = std::max(best, win_prob(induced_box(d, target), p, 0.5));
    EXPECT_GE(best, average - 1e-15);
  }
}

TEST(CheckReduction, LocalCannotApproximatePr) {
  const ProtocolEnumerator all(ProtocolShape::binary_against(pr_box(), 0));
  EXPECT_EQ(all.size(), 16u);
  double best = 1.0;
  all.for_each(0, all.size(), [&](std::uint64_t, const DeterministicProtocol& p) {
    EXPECT_FALSE(check_reduction(p, pr_box(), pr_box(), 0.2499).within);
    best = std::min(best, check_reduction(p, pr_box(), pr_box(), 1.0).tv);
  });
  EXPECT_GE(best, 0.25);
}

TEST(Enumeration, BinaryCounts) {
  ProtocolShape shape;
  shape.k = 1;
  const ProtocolEnumerator all(shape);
  EXPECT_EQ(all.size(), 4096u);
  EXPECT_EQ(protocol_count(shape), 4096u);
  EXPECT_EQ(counting_bound(2, 2, 2, 2, 1), 65536.0);
  std::set<std::vector<std::size_t>> seen;
  all.for_each(0, all.size(), [&](std::uint64_t index, const DeterministicProtocol& p) {
    std::vector<std::size_t> key = p.alice_queries()[0];
    key.insert(key.end(), p.bob_queries()[0].begin(), p.bob_queries()[0].end());
    key.insert(key.end(), p.alice_output().begin(), p.alice_output().end());
    key.insert(key.end(), p.bob_output().begin(), p.bob_output().end());
    seen.insert(key);
    if (index % 997 == 0) {
      EXPECT_EQ(all.at(index), p);
    }
  });
  EXPECT_EQ(seen.size(), 4096u);
  shape.k = 0;
  EXPECT_EQ(protocol_count(shape), 16u);
}

TEST(Enumeration, OctahedronCount) {
  const auto target = discretized_box(certify_cover(octahedron_points()));
  EXPECT_EQ(ProtocolEnumerator(ProtocolShape::binary_against(target, 1)).size(), 331776u);
}

TEST(Enumeration, RespectsCap) {
  ProtocolShape shape;
  shape.k = 3;
  EXPECT_THROW(ProtocolEnumerator(shape, 1000), PreconditionError);
}

TEST(AffineOf, Examples) {
  std::mt19937_64 rng(47);
  const auto target = random_bell(rng);
  const auto zeros = local_protocol(ProtocolShape::binary_against(target, 0), {0, 0}, {0, 0});
  const auto line = affine_of(zeros, target);
  EXPECT_NEAR(line.intercept, 1.0, 1e-15);
  EXPECT_NEAR(line.slope, -0.5, 1e-15);
  const auto pass = affine_of(pass_through_protocol(pr_box()), pr_box());
  EXPECT_EQ(pass.intercept, 1.0);
  EXPECT_EQ(pass.slope, 0.0);
}

TEST(AffineOf, AgreesWithWinProb) {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 100; ++trial) {
    const auto target = random_bell(rng);
    const auto protocol = random_protocol(ProtocolShape::binary_against(target, 1 + trial % 2), rng);
    const auto line = affine_of(protocol, target);
    const auto box = induced_box(protocol, target);
    for (double p : {0.5, 0.7, 1.0}) EXPECT_NEAR(line(p), win_prob(box, p, 0.5), 1e-12);
  }
}

TEST(AffineFamily, ConstantTargetMakesQueriesUseless) {
  const auto k0 = affine_family(constant_box(), 0);
  const auto k1 = affine_family(constant_box(), 1);
  ASSERT_EQ(k0.size(), k1.size());
  for (std::size_t i = 0; i < k0.size(); ++i) {
    EXPECT_NEAR(k0[i].intercept, k1[i].intercept, 1e-12);
    EXPECT_NEAR(k0[i].slope, k1[i].slope, 1e-12);
  }
}

TEST(AffineFamily, PrFamilyIsBounded) {
  const auto family = affine_family(pr_box(), 1);
  EXPECT_LE(family.size(), 4096u);
  EXPECT_TRUE(contains(family, {1.0, 0.0}));
}

TEST(AffineFamily, BellFamilyBelowOmega) {
  std::mt19937_64 rng(49);
  const auto target = random_bell(rng);
  const auto family = affine_family(target, 1);
  for (int i = 0; i <= 100; ++i) {
    const double p = 0.5 + 0.005 * i;
    for (const auto& l : family) EXPECT_LE(l(p), omega(p) + 1e-9);
  }
}

TEST(AffineFamily, MonotoneInK) {
  std::mt19937_64 rng(50);
  const auto target = random_bell(rng);
  const auto k0 = affine_family(target, 0);
  const auto k1 = affine_family(target, 1);
  for (const auto& l : k0) EXPECT_TRUE(contains(k1, l));
  const auto protocol = random_protocol(ProtocolShape::binary_against(target, 1), rng);
  const auto padded = pad_with_query(protocol);
  EXPECT_EQ(padded.k(), 2u);
  EXPECT_LE(tv_closeness(induced_box(padded, target), induced_box(protocol, target)), 1e-12);
}

TEST(AffineFamily, ThreadCountDoesNotMatter) {
  std::mt19937_64 rng(51);
  const auto target = random_bell(rng);
  FamilyOptions one;
  one.threads = 1;
  FamilyOptions four;
  four.threads = 4;
  EXPECT_EQ(affine_family(target, 1, one), affine_family(target, 1, four));
}

}  // namespace
}  // namespace nbl
