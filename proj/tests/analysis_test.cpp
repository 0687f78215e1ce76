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
#include <numbers>

#include <gtest/gtest.h>

#include "nbl/acceptance.hpp"
#include "nbl/analysis.hpp"
#include "nbl/games.hpp"
#include "nbl/sphere_cover.hpp"

namespace nbl {
namespace {

TEST(SecondDerivative, Values) {
  EXPECT_NEAR(omega_second_derivative(0.5), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(omega_second_derivative(1.0), 0.5, 1e-15);
}

TEST(SecondDerivative, FiniteDifferences) {
  const double h = 1e-4;
  for (int i = 1; i <= 99; ++i) {
    const double p = 0.5 + 0.005 * i;
    const double fd = (omega(p + h) - 2 * omega(p) + omega(p - h)) / (h * h);
    EXPECT_NEAR(fd, omega_second_derivative(p), 1e-6);
  }
}

TEST(Intersections, Examples) {
  EXPECT_TRUE(line_intersections({2.0, 0.0}).empty());
  EXPECT_TRUE(line_intersections({1.0, -0.5}).empty());
  const auto tangent = line_intersections(tangent_line(0.75));
  ASSERT_EQ(tangent.size(), 1u);
  EXPECT_NEAR(tangent[0].p, 0.75, 1e-8);
  EXPECT_EQ(tangent[0].multiplicity, 2);
}

TEST(Intersections, ChordHasTwoRoots) {
  const double slope = (omega(0.9) - omega(0.6)) / 0.3;
  const AffineFunction chord{omega(0.6) - 0.6 * slope, slope};
  const auto roots = line_intersections(chord);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0].p, 0.6, 1e-10);
  EXPECT_NEAR(roots[1].p, 0.9, 1e-10);
  EXPECT_LE(intersection_residual(chord, roots), 1e-10);
}

TEST(Interpolation, LowerBound) {
  const double x1 = 0.55, x2 = 0.85;
  const double slope = (omega(x2) - omega(x1)) / (x2 - x1);
  const AffineFunction line{omega(x1) - x1 * slope, slope};
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.5 + 0.0025 * i;
    EXPECT_GE(std::abs(omega(x) - line(x)), 0.25 * std::abs(x - x1) * std::abs(x - x2) - 1e-15);
  }
}

TEST(MeasureNear, Examples) {
  EXPECT_EQ(measure_near({2.0, 0.0}, 0.05), 0.0);
  const double m = measure_near(tangent_line(0.75), 1e-4);
  EXPECT_GT(m, 0.0);
  EXPECT_LE(m, 8 * std::sqrt(1e-4));
  const auto best = best_uniform_line();
  for (double e : {1e-2, 1e-3, 1e-4}) EXPECT_LE(measure_near(best, e), 8 * std::sqrt(e));
}

TEST(MeasureNear, MatchesGridCount) {
  const auto line = tangent_line(0.7);
  const double eps = 1e-3;
  constexpr int kGrid = 2'000'000;
  int inside = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double p = 0.5 + 0.5 * (i + 0.5) / kGrid;
    if (std::abs(line(p) - omega(p)) <= eps) ++inside;
  }
  EXPECT_NEAR(measure_near(line, eps), inside / double(kGrid), 2e-6);
}

TEST(HardP, ConstantLine) {
  const auto cert = find_hard_p({{1.0, 0.0}});
  EXPECT_NEAR(cert.p_star, 0.5, 1e-12);
  EXPECT_NEAR(cert.gap, 1 - omega(0.5), 1e-12);
  EXPECT_NEAR(cert.gap, 0.1464466, 1e-7);
  EXPECT_TRUE(verify_certificate(cert));
}

TEST(HardP, TwoTangents) {
  const std::vector<AffineFunction> family{tangent_line(0.6), tangent_line(0.9)};
  const auto cert = find_hard_p(family);
  EXPECT_GT(cert.gap, 0.0);
  EXPECT_TRUE(verify_certificate(cert));
  double grid_best = 0.0;
  for (int i = 0; i <= 1'000'000; ++i) grid_best = std::max(grid_best, family_gap(family, 0.5 + 0.5e-6 * i));
  EXPECT_GE(cert.gap, grid_best - 1e-12);
  EXPECT_GT(std::abs(cert.p_star - 0.6), 1e-3);
  EXPECT_GT(std::abs(cert.p_star - 0.9), 1e-3);
}

TEST(HardP, OctahedronGolden) {
  const auto target = discretized_box(certify_cover(octahedron_points()));
  const auto cert = find_hard_p(affine_family(target, 1));
  EXPECT_GT(cert.gap, 1e-4);
  EXPECT_NEAR(cert.gap, kOctahedronGoldenGap, 1e-9);
  EXPECT_NEAR(cert.p_star, kOctahedronGoldenPStar, 1e-9);
  EXPECT_TRUE(verify_certificate(cert, 1e-12));
}

TEST(Schedule, BinaryValues) {
  const auto entries = epsilon_schedule(2, 2, 2, 2, 3, 0.01);
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].bound, 65536.0);
  EXPECT_NEAR(entries[0].epsilon, std::pow(0.01 / 65536.0, 2), 1e-26);
  EXPECT_NEAR(entries[0].epsilon, 2.33e-14, 0.01e-14);
  double series = 0.0;
  for (const auto& e : entries) {
    EXPECT_LE(std::abs(e.identity_error), 1e-12);
    EXPECT_TRUE(e.inequality_holds);
    series += std::exp(0.5 * e.log_epsilon + e.log_bound);
  }
  EXPECT_LE(series, 0.01 * std::numbers::pi * std::numbers::pi / 6);
}

}  // namespace
}  // namespace nbl
