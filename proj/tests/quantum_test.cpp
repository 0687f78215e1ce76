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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nbl/quantum.hpp"

namespace nbl {
namespace {

BlochVector random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return BlochVector::normalized(Eigen::Vector3d(n(rng), n(rng), n(rng)));
}

TEST(BellBox, IdentityOnPhiPlus) {
  const auto spec = BellBoxSpec::uniform({Unitary2::identity()}, {Unitary2::identity()});
  const auto box = bell_box(spec, TwoQubitState::phi_plus());
  EXPECT_NEAR(prob(box, 0, 0, 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(prob(box, 0, 0, 1, 1), 0.5, 1e-15);
  EXPECT_NEAR(prob(box, 0, 0, 0, 1), 0.0, 1e-15);
}

TEST(BellBox, BitFlipOnBob) {
  const auto spec = BellBoxSpec::uniform({Unitary2::identity()}, {Unitary2::bit_flip()});
  const auto box = bell_box(spec, TwoQubitState::phi_plus());
  EXPECT_NEAR(prob(box, 0, 0, 0, 1), 0.5, 1e-15);
  EXPECT_NEAR(prob(box, 0, 0, 1, 0), 0.5, 1e-15);
}

TEST(BellBox, RandomSpecsAreNonSignaling) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = BellBoxSpec::uniform({random_unitary(rng), random_unitary(rng), random_unitary(rng)},
                                           {random_unitary(rng), random_unitary(rng)});
    const auto box = bell_box(spec, TwoQubitState::phi_plus());
    EXPECT_TRUE(is_nonsignaling(box, 1e-10));
  }
}

TEST(Bloch, ConventionAnchors) {
  const QubitState zero(1, 0), one(0, 1);
  const QubitState plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const QubitState plus_i(1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0)));
  EXPECT_NEAR(bloch_of(one).z(), -1.0, 1e-15);
  EXPECT_NEAR(bloch_of(zero).z(), 1.0, 1e-15);
  EXPECT_NEAR(bloch_of(plus).x(), 1.0, 1e-15);
  EXPECT_NEAR(bloch_of(plus_i).y(), 1.0, 1e-15);
  EXPECT_NEAR(bloch_of(zero).dot(bloch_of(one)), -1.0, 1e-15);
}

TEST(Bloch, UnitaryForPointRoundTrip) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = random_point(rng);
    const auto u = unitary_for_point(c);
    EXPECT_LE(measured_direction(u).distance(c), 1e-10);
    EXPECT_GE(u(0, 0).real(), 0.0);
    EXPECT_EQ(u(0, 0).imag(), 0.0);
  }
  for (const auto& c : {BlochVector(0, 0, 1), BlochVector(0, 0, -1), BlochVector(1, 0, 0)}) {
    EXPECT_LE(measured_direction(unitary_for_point(c)).distance(c), 1e-12);
  }
}

TEST(Singlet, ProbEqualExamples) {
  const BlochVector z(0, 0, 1), x(1, 0, 0);
  EXPECT_EQ(singlet_prob_equal(z, z), 0.0);
  EXPECT_EQ(singlet_prob_equal(z, -z), 1.0);
  EXPECT_EQ(singlet_prob_equal(z, x), 0.5);
}

TEST(Singlet, MeasureBoxExamples) {
  const auto same = singlet_measure_box(Unitary2::identity(), Unitary2::identity());
  EXPECT_NEAR(same(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(same(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(same(0, 0) + same(1, 1), 0.0, 1e-15);
  std::mt19937_64 rng(8);
  const auto u = random_unitary(rng);
  const auto d = singlet_measure_box(u, u);
  EXPECT_NEAR(d(0, 0) + d(1, 1), 0.0, 1e-12);
}

TEST(Singlet, DotProductLaw) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto u = random_unitary(rng);
    const auto v = random_unitary(rng);
    const auto d = singlet_measure_box(u, v);
    const auto x = measured_direction(u), y = measured_direction(v);
    EXPECT_NEAR(d(0, 0) + d(1, 1), singlet_prob_equal(x, y), 1e-10);
    EXPECT_NEAR(std::norm((u.matrix() * v.inverse().matrix())(1, 1)), 0.5 + 0.5 * x.dot(y), 1e-10);
  }
}

TEST(Singlet, InvarianceDefect) {
  EXPECT_NEAR(singlet_invariance_defect(Unitary2::identity()), 0.0, 1e-15);
  EXPECT_NEAR(singlet_invariance_defect(Unitary2::bit_flip()), 0.0, 1e-15);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) EXPECT_LE(singlet_invariance_defect(random_unitary(rng)), 1e-10);
}

TEST(Singlet, FromPhiPlus) {
  const auto spec = BellBoxSpec::uniform({Unitary2::identity()}, {Unitary2::identity()});
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = random_unitary(rng), v = random_unitary(rng);
    const auto direct = measurement_distribution(u, v, TwoQubitState::singlet());
    const auto via = measurement_distribution(u, v * singlet_from_phi_plus(), TwoQubitState::phi_plus());
    for (int e = 0; e < 4; ++e) EXPECT_NEAR(direct[e], via[e], 1e-12);
  }
}

TEST(RandomUnitary, Properties) {
  std::mt19937_64 rng(1234);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  constexpr int kDraws = 100'000;
  for (int i = 0; i < kDraws; ++i) {
    const auto u = random_unitary(rng);
    ASSERT_LE(u.unitarity_defect(), 1e-10);
    ASSERT_NEAR(std::abs(u.determinant()), 1.0, 1e-10);
    mean += measured_direction(u).vector();
  }
  mean /= kDraws;
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(mean(c), 0.0, 0.01);
}

TEST(Unitary2, ClosedUnderProductsAndInverses) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 100; ++i) {
    const auto u = random_unitary(rng), v = random_unitary(rng);
    EXPECT_LE((u * v).unitarity_defect(), 1e-10);
    EXPECT_LE(u.inverse().unitarity_defect(), 1e-10);
    EXPECT_LE((u * u.inverse()).matrix().isIdentity(1e-12), true);
  }
  Eigen::Matrix2cd bad;
  bad << 1, 1, 0, 1;
  EXPECT_THROW(Unitary2{bad}, std::invalid_argument);
}

TEST(DirectSum, BlocksAndCrossBlocks) {
  std::mt19937_64 rng(31);
  const auto s1 = BellBoxSpec::uniform({random_unitary(rng), random_unitary(rng)}, {random_unitary(rng)});
  const auto sum = bell_box(direct_sum_bell(s1, s1), TwoQubitState::phi_plus());
  EXPECT_EQ(sum.x_size(), 4u);
  EXPECT_EQ(sum.a_size(), 4u);
  const auto block1 = restrict_box(sum, 0, 2, 0, 1, 0, 2, 0, 2);
  const auto block2 = restrict_box(sum, 2, 2, 1, 1, 2, 2, 2, 2);
  const auto direct = bell_box(s1, TwoQubitState::phi_plus());
  EXPECT_EQ(tv_closeness(block1, direct), 0.0);
  EXPECT_EQ(tv_closeness(block2, direct), 0.0);
  // Cross block (x in block 1, y in block 2) matches the in-block row after relabeling.
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) EXPECT_NEAR(prob(sum, x, 1, a, b + 2), prob(direct, x, 0, a, b), 1e-15);
    }
  }
  EXPECT_TRUE(is_nonsignaling(sum, 1e-10));
}

}  // namespace
}  // namespace nbl
