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

#include <array>
#include <cstdint>
#include <vector>

#include "nbl/boxes.hpp"
#include "nbl/quantum.hpp"

namespace nbl {

/// Input biases of the biased CHSH game: Pr[x = 1] = p (Alice), Pr[y = 1] = q (Bob).
struct BiasParams {
  double p = 0.5;
  double q = 0.5;
};

/// Probability that `box` wins CHSH[p, q] (a xor b == x * y), computed from the table.
double win_prob(const CorrelationBox& box, double p, double q);

/// Optimal quantum win probability of CHSH[p, 1/2]: 1/2 + 1/2 sqrt(p^2 + (1-p)^2).
double omega(double p);

/// True iff 1/2 <= q <= 1/(2p) <= 1 (with 1e-12 slack on each comparison).
bool in_biased_regime(double p, double q);

/// Quantum ceiling for CHSH[p, q]:
/// 1/2 + (sqrt(2)/2) sqrt(q^2 + (1-q)^2) sqrt(p^2 + (1-p)^2). Requires in_biased_regime.
double biased_bound(double p, double q);

/// All 256 deterministic binary boxes (every map (x, y) -> (a, b)), signaling or not.
std::vector<CorrelationBox> deterministic_binary_boxes();

/// Unitary whose outcome-0 projector points along (sin theta, 0, cos theta).
Unitary2 planar_unitary(double theta);

/// Four X-Z plane measurement angles on |phi+>: Alice's for x = 0, 1 then Bob's for y = 0, 1.
struct PlanarStrategy {
  std::array<double, 4> angles{};

  BellBoxSpec to_spec() const;
  CorrelationBox box() const;
};

struct OptimizerOptions {
  int grid = 64;
  double min_step = 1e-10;
  /// Extra coordinate-descent runs from seeded random starting points.
  int restarts = 0;
  std::uint64_t seed = 0x6e626c2d67616d65ULL;
};

struct OptimizedStrategy {
  PlanarStrategy strategy;
  double value = 0.0;
  double target = 0.0;  // omega(p)
  /// value >= omega(p) - 1e-6. False flags a p where the planar family fell short.
  bool reached_target = false;
};

/// Numerically optimized planar strategy for CHSH[p, 1/2], p in [1/2, 1].
///
/// Alice's x = 0 angle is pinned to 0. A grid search over the remaining three
/// angles is followed by coordinate descent with step halving down to
/// `min_step`. Among equal grid values the lexicographically smallest angle
/// vector wins, so the result is deterministic for fixed options.
OptimizedStrategy optimal_strategy(double p, const OptimizerOptions& options = {});

}  // namespace nbl
