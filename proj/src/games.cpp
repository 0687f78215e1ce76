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

#include "nbl/games.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "nbl/error.hpp"

namespace nbl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRegimeSlack = 1e-12;

void require_probability(double v, const char* name) {
  require(v >= 0.0 && v <= 1.0, std::string(name) + " must lie in [0, 1]");
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// Win probability on |phi+> with identity postprocessing; same arithmetic as
// bell_box followed by win_prob, without materializing the table.
double planar_value(const std::array<Unitary2, 2>& alice, const std::array<Unitary2, 2>& bob,
                    double p, const TwoQubitState& state) {
  const double px[2] = {1.0 - p, p};
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const auto dist = measurement_distribution(alice[x], bob[y], state);
      const double win = (x & y) ? dist[1] + dist[2] : dist[0] + dist[3];
      total += px[x] * 0.5 * win;
    }
  }
  return total;
}

double evaluate(const std::array<double, 4>& angles, double p, const TwoQubitState& state) {
  return planar_value({planar_unitary(angles[0]), planar_unitary(angles[1])},
                      {planar_unitary(angles[2]), planar_unitary(angles[3])}, p, state);
}

// Coordinate ascent over angles 1..3 with step halving.
double refine(std::array<double, 4>& angles, double value, double step, double min_step, double p,
              const TwoQubitState& state) {
  while (step >= min_step) {
    bool improved = false;
    for (int coord = 1; coord < 4; ++coord) {
      for (double direction : {1.0, -1.0}) {
        auto trial = angles;
        trial[coord] = wrap_angle(trial[coord] + direction * step);
        const double v = evaluate(trial, p, state);
        if (v > value) {
          angles = trial;
          value = v;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return value;
}

}  // namespace

double win_prob(const CorrelationBox& box, double p, double q) {
  require(box.is_binary(), "win_prob: box must be binary");
  require_probability(p, "p");
  require_probability(q, "q");
  const double px[2] = {1.0 - p, p};
  const double qy[2] = {1.0 - q, q};
  double total = 0.0;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      const auto r = box.row(x, y);
      const double win = (x & y) ? r[1] + r[2] : r[0] + r[3];
      total += px[x] * qy[y] * win;
    }
  }
  return total;
}

double omega(double p) { return 0.5 + 0.5 * std::sqrt(p * p + (1.0 - p) * (1.0 - p)); }

bool in_biased_regime(double p, double q) {
  if (!(p > 0.0) || p > 1.0 || q < 0.0 || q > 1.0) return false;
  const double inv = 1.0 / (2.0 * p);
  return 0.5 <= q + kRegimeSlack && q <= inv + kRegimeSlack && inv <= 1.0 + kRegimeSlack;
}

double biased_bound(double p, double q) {
  require(in_biased_regime(p, q), "biased_bound: requires 1/2 <= q <= 1/(2p) <= 1");
  return 0.5 + (std::sqrt(2.0) / 2.0) * std::sqrt(q * q + (1.0 - q) * (1.0 - q)) *
                   std::sqrt(p * p + (1.0 - p) * (1.0 - p));
}

std::vector<CorrelationBox> deterministic_binary_boxes() {
  std::vector<CorrelationBox> out;
  out.reserve(256);
  for (unsigned code = 0; code < 256; ++code) {
    std::vector<double> table(16, 0.0);
    for (unsigned input = 0; input < 4; ++input) {
      const unsigned outcome = (code >> (2 * input)) & 3U;
      table[input * 4 + outcome] = 1.0;
    }
    out.emplace_back(2, 2, 2, 2, std::move(table));
  }
  return out;
}

Unitary2 planar_unitary(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd m;
  m << c, s, -s, c;
  return Unitary2(m);
}

BellBoxSpec PlanarStrategy::to_spec() const {
  return BellBoxSpec::uniform({planar_unitary(angles[0]), planar_unitary(angles[1])},
                              {planar_unitary(angles[2]), planar_unitary(angles[3])});
}

CorrelationBox PlanarStrategy::box() const { return bell_box(to_spec(), TwoQubitState::phi_plus()); }

OptimizedStrategy optimal_strategy(double p, const OptimizerOptions& options) {
  require(p >= 0.5 && p <= 1.0, "optimal_strategy: p must lie in [1/2, 1]");
  require(options.grid >= 2, "optimal_strategy: grid must have at least 2 points");
  require(options.min_step > 0.0, "optimal_strategy: min_step must be positive");
  const auto state = TwoQubitState::phi_plus();
  const int n = options.grid;
  const double step = kTwoPi / n;

  std::vector<Unitary2> grid_unitaries;
  grid_unitaries.reserve(n);
  for (int i = 0; i < n; ++i) grid_unitaries.push_back(planar_unitary(i * step));

  std::array<int, 3> best_index{0, 0, 0};
  double best = -1.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      for (int i3 = 0; i3 < n; ++i3) {
        const double v = planar_value({grid_unitaries[0], grid_unitaries[i1]},
                                      {grid_unitaries[i2], grid_unitaries[i3]}, p, state);
        if (v > best) {
          best = v;
          best_index = {i1, i2, i3};
        }
      }
    }
  }

  std::array<double, 4> angles{0.0, best_index[0] * step, best_index[1] * step,
                               best_index[2] * step};
  double value = refine(angles, best, step, options.min_step, p, state);

  if (options.restarts > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    for (int r = 0; r < options.restarts; ++r) {
      std::array<double, 4> start{0.0, uniform(rng), uniform(rng), uniform(rng)};
      const double v = refine(start, evaluate(start, p, state), step, options.min_step, p, state);
      if (v > value || (v == value && start < angles)) {
        value = v;
        angles = start;
      }
    }
  }

  OptimizedStrategy out;
  out.strategy.angles = angles;
  // Report the value recomputed through the public table path.
  out.value = win_prob(out.strategy.box(), p, 0.5);
  out.target = omega(p);
  out.reached_target = out.value >= out.target - 1e-6;
  return out;
}

}  // namespace nbl
