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
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nbl/boxes.hpp"
#include "nbl/quantum.hpp"

namespace nbl {

/// Outcome of auditing a point set's covering radius.
///
/// Probes are the vertices of an N x N grid on each face of the cube
/// [-1, 1]^3, pushed radially onto the sphere. Every sphere point is the radial
/// image of a cube-surface point within sqrt(2)/N of some grid vertex, and radial
/// projection from outside the unit ball is 1-Lipschitz, so
/// certified_radius = max_probe_distance + sqrt(2)/N bounds the true radius.
struct CoverAudit {
  std::size_t probes = 0;
  std::size_t grid = 0;  // N
  double mesh_width = 0.0;
  double max_probe_distance = 0.0;
  double certified_radius = 0.0;
};

/// T unit vectors with an audited covering radius (Euclidean distance).
struct SphereCover {
  std::vector<BlochVector> points;
  double covering_radius = 0.0;
  CoverAudit audit;
  /// Requested radius; 0 for covers certified from explicit points.
  double target_epsilon = 0.0;
  int attempts = 1;

  std::size_t size() const { return points.size(); }
};

inline constexpr std::size_t kDefaultProbeFactor = 400;

std::vector<BlochVector> fibonacci_points(std::size_t count);
std::vector<BlochVector> tetrahedron_points();
/// +-x, +-y, +-z.
std::vector<BlochVector> octahedron_points();

CoverAudit audit_cover(std::span<const BlochVector> points,
                       std::size_t probe_factor = kDefaultProbeFactor);

/// Wraps explicit points with their audited radius.
SphereCover certify_cover(std::vector<BlochVector> points,
                          std::size_t probe_factor = kDefaultProbeFactor);

/// Cover with certified radius <= epsilon and T <= 10 / epsilon^2.
///
/// Starts from a Fibonacci spiral of ceil(8.41 / epsilon^2) points (the regular
/// tetrahedron when that is at most 4) and grows T by 10% on audit failure, at
/// most three times.
SphereCover build_cover(double epsilon);

/// Box on [T] x [T] with binary outputs: Pr[(0,0)] = Pr[(1,1)] = 1/4 - 1/4 c_i.c_j,
/// Pr[(0,1)] = Pr[(1,0)] = 1/4 + 1/4 c_i.c_j.
CorrelationBox discretized_box(const SphereCover& cover);

/// BELL witness of discretized_box on the singlet: both parties use
/// unitary_for_point(c_i). Evaluate with TwoQubitState::singlet().
BellBoxSpec discretized_bell_spec(const SphereCover& cover);

/// Nearest cover point by linear scan; ties go to the smaller index.
std::size_t nearest_point(const SphereCover& cover, const BlochVector& v);

/// Cover indices nearest to the Bloch vectors of U^{-1}|1> and V^{-1}|1>.
std::pair<std::size_t, std::size_t> reduce_measurement(const Unitary2& u, const Unitary2& v,
                                                       const SphereCover& cover);

struct ReductionTrial {
  std::size_t i = 0;
  std::size_t j = 0;
  double exact_dot = 0.0;  // x . y
  double cover_dot = 0.0;  // c_i . c_j
  double tv = 0.0;         // generic TV between the two rows
};

struct ReductionStats {
  double max_tv = 0.0;
  double mean_tv = 0.0;
  /// Largest |generic TV - 1/2 |x.y - c_i.c_j||.
  double identity_defect = 0.0;
  std::vector<ReductionTrial> trials;
};

/// Runs the 1-query nearest-point reduction on `trials` Haar-random (U, V) pairs.
/// Trial t draws from a generator seeded with derive_seed(seed, t), so results do
/// not depend on the thread count.
ReductionStats verify_reduction(const SphereCover& cover, std::size_t trials, std::uint64_t seed,
                                unsigned threads = 0);

}  // namespace nbl
