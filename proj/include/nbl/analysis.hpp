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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nbl/protocols.hpp"

namespace nbl {

/// d/dp of omega: (2p - 1) / (2 sqrt(p^2 + (1-p)^2)).
double omega_derivative(double p);

/// 1/2 [p^2 + (1-p)^2]^{-3/2}, at least 1/2 on [1/2, 1]. Requires p in [1/2, 1].
double omega_second_derivative(double p);

/// The line touching omega at p0.
AffineFunction tangent_line(double p0);

/// Best uniform (minimax) affine approximation of omega on [1/2, 1]: parallel to
/// the chord, halfway between the chord and the parallel tangent.
AffineFunction best_uniform_line();

struct Intersection {
  double p = 0.0;
  int multiplicity = 1;  // 2 for a tangency
};

/// Solutions of l(p) = omega(p) in [1/2, 1], via the quadratic
/// p^2 + (1-p)^2 = r(p)^2 with r = 2l - 1. Roots that fail back-substitution
/// (the r < 0 branch) are discarded. Never more than two.
std::vector<Intersection> line_intersections(const AffineFunction& line);

/// Largest back-substitution residual |l(p) - omega(p)| among the returned roots.
double intersection_residual(const AffineFunction& line, const std::vector<Intersection>& roots);

/// Measure of {p in [1/2, 1] : |l(p) - omega(p)| <= epsilon}, relative to the
/// interval length 1/2. Exact up to bisection to `tolerance`; l - omega is concave
/// so there are at most four crossings.
double measure_near(const AffineFunction& line, double epsilon, double tolerance = 1e-12);

/// g(p) = min over the family of |l(p) - omega(p)|.
double family_gap(const std::vector<AffineFunction>& family, double p);

/// A finite witness that no line of `family` matches omega at p_star.
struct GapCertificate {
  std::string target;
  std::size_t k = 0;
  double p_star = 0.0;
  double gap = 0.0;
  std::size_t resolution = 0;
  std::vector<AffineFunction> family;
};

/// Maximizes family_gap over a grid of `resolution` + 1 points on [1/2, 1], then
/// refines around the best grid point by golden-section search to 1e-10.
/// Ties go to the smallest p.
GapCertificate find_hard_p(const std::vector<AffineFunction>& family, std::size_t resolution = 10000);

/// |family_gap(family, p_star) - gap| <= tolerance.
bool verify_certificate(const GapCertificate& certificate, double tolerance = 1e-12);

struct ScheduleEntry {
  std::size_t k = 0;
  double log_bound = 0.0;  // ln of (2|X|)^{2|A|^k} (2|Y|)^{2|B|^k}
  double bound = 0.0;      // inf when not representable
  double log_epsilon = 0.0;
  double epsilon = 0.0;    // 0 when it underflows; log_epsilon stays exact
  /// k^4 bound^2 epsilon / c^2 - 1, evaluated in log space.
  double identity_error = 0.0;
  /// k^4 (2|X|)^{4|A|^k} (2|Y|)^{4|B|^k} >= c^2 / epsilon, i.e. 1/epsilon <= (1/c^2) k^4 bound^2.
  bool inequality_holds = false;
};

/// epsilon_k = (c / (k^2 bound_k))^2 for k = 1..k_max, so sqrt(epsilon_k) bound_k = c / k^2.
std::vector<ScheduleEntry> epsilon_schedule(std::size_t x_size, std::size_t y_size,
                                            std::size_t a_size, std::size_t b_size,
                                            std::size_t k_max, double c);

}  // namespace nbl
