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

#include "nbl/sphere_cover.hpp"

namespace nbl {
namespace {

TEST(BuildCover, TrivialRadiusIsTetrahedron) {
  const auto cover = build_cover(2.0);
  EXPECT_EQ(cover.size(), 4u);
  EXPECT_LE(cover.covering_radius, 2.0);
}

TEST(BuildCover, Scaling) {
  const auto half = build_cover(0.5);
  EXPECT_LE(half.size(), 40u);
  EXPECT_LE(half.covering_radius, 0.5);
  const auto tenth = build_cover(0.1);
  EXPECT_LE(tenth.size(), 1000u);
  EXPECT_LE(tenth.covering_radius, 0.1);
  EXPECT_LE(tenth.size() * 0.01, 10.0);
}

TEST(Audit, SoundOnOctahedron) {
  // The true covering radius of the octahedron is |(1,1,1)/sqrt(3) - (0,0,1)|.
  const double exact = std::sqrt(2 - 2 / std::sqrt(3.0));
  const auto audit = audit_cover(octahedron_points());
  EXPECT_GE(audit.certified_radius, exact);
  EXPECT_LE(audit.max_probe_distance, exact + 1e-12);
  EXPECT_LE(audit.certified_radius - exact, 2 * audit.mesh_width);
}

TEST(DiscretizedBox, Rows) {
  const auto box = discretized_box(certify_cover(octahedron_points()));
  // points 0: +x, 1: -x, 2: +y ...
  EXPECT_EQ(prob(box, 0, 0, 0, 1), 0.5);
  EXPECT_EQ(prob(box, 0, 0, 0, 0), 0.0);
  EXPECT_EQ(prob(box, 0, 1, 0, 0), 0.5);
  EXPECT_EQ(prob(box, 0, 1, 1, 1), 0.5);
  for (std::size_t e = 0; e < 4; ++e) EXPECT_EQ(box.row(0, 2)[e], 0.25);
  for (std::size_t x = 0; x < 6; ++x)
    for (std::size_t y = 0; y < 6; ++y) {
      for (double m : marginal_a(box, x, y)) EXPECT_NEAR(m, 0.5, 1e-15);
      for (double m : marginal_b(box, x, y)) EXPECT_NEAR(m, 0.5, 1e-15);
    }
}

TEST(DiscretizedBox, IsBell) {
  const auto cover = build_cover(0.5);
  const auto box = discretized_box(cover);
  const auto bell = bell_box(discretized_bell_spec(cover), TwoQubitState::singlet());
  for (std::size_t e = 0; e < box.table().size(); ++e) EXPECT_NEAR(box.table()[e], bell.table()[e], 1e-10);
}

TEST(ReduceMeasurement, ExactAndNearest) {
  const auto cover = build_cover(0.5);
  const auto u = unitary_for_point(cover.points[5]);
  const auto v = unitary_for_point(cover.points[7]);
  EXPECT_EQ(reduce_measurement(u, v, cover), (std::pair<std::size_t, std::size_t>{5, 7}));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto x = measured_direction(random_unitary(rng));
    EXPECT_LE(x.distance(cover.points[nearest_point(cover, x)]), cover.covering_radius);
  }
}

TEST(ReduceMeasurement, TieGoesToSmallerIndex) {
  const auto cover = certify_cover(octahedron_points());
  const auto mid = BlochVector::normalized(Eigen::Vector3d(1, 0, 1));
  const auto mid_rev = BlochVector::normalized(Eigen::Vector3d(-1, 0, -1));
  EXPECT_EQ(nearest_point(cover, mid), 0u);
  EXPECT_EQ(nearest_point(cover, mid_rev), 1u);
}

TEST(VerifyReduction, ExactDirectionsGiveZero) {
  const auto cover = certify_cover(octahedron_points());
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = 0; j < cover.size(); ++j) {
      const auto d = singlet_measure_box(unitary_for_point(cover.points[i]), unitary_for_point(cover.points[j]));
      const auto box = discretized_box(cover);
      EXPECT_NEAR(tv_distance(d, box.distribution(i, j)), 0.0, 1e-12);
    }
  }
}

TEST(VerifyReduction, PipelineAtPointTwo) {
  const auto cover = build_cover(0.2);
  const auto stats = verify_reduction(cover, 1000, 7, 2);
  EXPECT_LE(stats.max_tv, 0.2);
  EXPECT_LT(stats.mean_tv, stats.max_tv);
  EXPECT_LE(stats.identity_defect, 1e-12);
  const auto again = verify_reduction(cover, 1000, 7, 5);
  EXPECT_EQ(stats.max_tv, again.max_tv);
  EXPECT_EQ(stats.mean_tv, again.mean_tv);
}

}  // namespace
}  // namespace nbl
