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

#include "nbl/sphere_cover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "nbl/error.hpp"
#include "nbl/parallel.hpp"

namespace nbl {

namespace {

constexpr double kFitConstantSquared = 8.41;  // (2.9)^2, certified radius ~ 2.83 / sqrt(T)
constexpr double kScalingCap = 10.0;          // T <= 10 / epsilon^2
constexpr double kGrowth = 1.1;
constexpr int kMaxRetries = 3;

double chord_from_dot(double dot) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * dot)); }

std::vector<Eigen::Vector3d> cube_probes(std::size_t n) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(6 * (n + 1) * (n + 1));
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
          Eigen::Vector3d v;
          v[axis] = sign;
          v[(axis + 1) % 3] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
          v[(axis + 2) % 3] = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n);
          out.push_back(v.normalized());
        }
      }
    }
  }
  return out;
}

// Exact nearest-point distance using a z-band prefilter: when the best point in
// the band |dz| <= w is within w, nothing outside the band can be closer.
class BandedNearest {
 public:
  explicit BandedNearest(std::span<const BlochVector> points) {
    order_.resize(points.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(),
              [&](std::size_t l, std::size_t r) { return points[l].z() < points[r].z(); });
    for (auto i : order_) {
      coords_.push_back(points[i].vector());
      z_.push_back(points[i].z());
    }
    band_ = std::min(2.0, 3.0 / std::sqrt(static_cast<double>(points.size())));
  }

  double distance(const Eigen::Vector3d& probe) const {
    const auto lo = std::lower_bound(z_.begin(), z_.end(), probe.z() - band_) - z_.begin();
    const auto hi = std::upper_bound(z_.begin(), z_.end(), probe.z() + band_) - z_.begin();
    double best = -2.0;
    for (auto i = lo; i < hi; ++i) best = std::max(best, coords_[i].dot(probe));
    const double d = chord_from_dot(best);
    if (d <= band_) return d;
    for (const auto& c : coords_) best = std::max(best, c.dot(probe));
    return chord_from_dot(best);
  }

 private:
  std::vector<std::size_t> order_;
  std::vector<Eigen::Vector3d> coords_;
  std::vector<double> z_;
  double band_ = 2.0;
};

}  // namespace

std::vector<BlochVector> fibonacci_points(std::size_t count) {
  require(count >= 1, "fibonacci_points: count must be positive");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<BlochVector> out;
  out.reserve(count);
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    out.push_back(BlochVector::normalized(Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z)));
  }
  return out;
}

std::vector<BlochVector> tetrahedron_points() {
  const double s = 1.0 / std::sqrt(3.0);
  return {BlochVector(s, s, s), BlochVector(s, -s, -s), BlochVector(-s, s, -s),
          BlochVector(-s, -s, s)};
}

std::vector<BlochVector> octahedron_points() {
  return {BlochVector(1, 0, 0), BlochVector(-1, 0, 0), BlochVector(0, 1, 0),
          BlochVector(0, -1, 0), BlochVector(0, 0, 1), BlochVector(0, 0, -1)};
}

CoverAudit audit_cover(std::span<const BlochVector> points, std::size_t probe_factor) {
  require(!points.empty(), "audit_cover: empty point set");
  require(probe_factor >= 1, "audit_cover: probe factor must be positive");
  CoverAudit audit;
  const double wanted = static_cast<double>(probe_factor * points.size()) / 6.0;
  audit.grid = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(wanted))));
  audit.mesh_width = std::sqrt(2.0) / static_cast<double>(audit.grid);
  const auto probes = cube_probes(audit.grid);
  audit.probes = probes.size();
  const BandedNearest nearest(points);
  for (const auto& probe : probes) {
    audit.max_probe_distance = std::max(audit.max_probe_distance, nearest.distance(probe));
  }
  audit.certified_radius = audit.max_probe_distance + audit.mesh_width;
  return audit;
}

SphereCover certify_cover(std::vector<BlochVector> points, std::size_t probe_factor) {
  SphereCover cover;
  cover.audit = audit_cover(points, probe_factor);
  cover.covering_radius = cover.audit.certified_radius;
  cover.points = std::move(points);
  return cover;
}

SphereCover build_cover(double epsilon) {
  require(epsilon > 0.0 && std::isfinite(epsilon), "build_cover: epsilon must be positive");
  const double cap = kScalingCap / (epsilon * epsilon);
  std::size_t t = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::ceil(kFitConstantSquared / (epsilon * epsilon))));
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    auto points = t == 4 ? tetrahedron_points() : fibonacci_points(t);
    SphereCover cover = certify_cover(std::move(points));
    cover.target_epsilon = epsilon;
    cover.attempts = attempt + 1;
    if (cover.covering_radius <= epsilon && (static_cast<double>(t) <= cap || t == 4)) {
      return cover;
    }
    t = static_cast<std::size_t>(std::ceil(static_cast<double>(t) * kGrowth));
  }
  throw PreconditionError("build_cover: audit failed after retries");
}

CorrelationBox discretized_box(const SphereCover& cover) {
  const std::size_t t = cover.size();
  require(t >= 1, "discretized_box: empty cover");
  std::vector<double> table(t * t * 4);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      const double dot = std::clamp(cover.points[i].dot(cover.points[j]), -1.0, 1.0);
      double* row = table.data() + (i * t + j) * 4;
      row[0] = row[3] = 0.25 - 0.25 * dot;
      row[1] = row[2] = 0.25 + 0.25 * dot;
    }
  }
  return CorrelationBox(t, t, 2, 2, std::move(table));
}

BellBoxSpec discretized_bell_spec(const SphereCover& cover) {
  std::vector<Unitary2> us;
  us.reserve(cover.size());
  for (const auto& c : cover.points) us.push_back(unitary_for_point(c));
  return BellBoxSpec::uniform(us, us);
}

std::size_t nearest_point(const SphereCover& cover, const BlochVector& v) {
  require(!cover.points.empty(), "nearest_point: empty cover");
  std::size_t best = 0;
  double best_distance = cover.points[0].distance(v);
  for (std::size_t i = 1; i < cover.size(); ++i) {
    const double d = cover.points[i].distance(v);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return best;
}

std::pair<std::size_t, std::size_t> reduce_measurement(const Unitary2& u, const Unitary2& v,
                                                       const SphereCover& cover) {
  return {nearest_point(cover, measured_direction(u)), nearest_point(cover, measured_direction(v))};
}

ReductionStats verify_reduction(const SphereCover& cover, std::size_t trials, std::uint64_t seed,
                                unsigned threads) {
  require(trials >= 1, "verify_reduction: trials must be at least 1");
  require(!cover.points.empty(), "verify_reduction: empty cover");
  ReductionStats stats;
  stats.trials.resize(trials);
  std::vector<double> defects(trials, 0.0);
  parallel_chunks(trials, threads ? threads : default_thread_count(),
                  [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                    for (std::uint64_t t = begin; t < end; ++t) {
                      std::mt19937_64 rng(derive_seed(seed, t));
                      const Unitary2 u = random_unitary(rng);
                      const Unitary2 v = random_unitary(rng);
                      auto [i, j] = reduce_measurement(u, v, cover);
                      const JointDistribution exact = singlet_measure_box(u, v);
                      const double cover_dot = std::clamp(cover.points[i].dot(cover.points[j]), -1.0, 1.0);
                      const double same = 0.25 - 0.25 * cover_dot;
                      const double differ = 0.25 + 0.25 * cover_dot;
                      const JointDistribution simulated(2, 2, {same, differ, differ, same});
                      ReductionTrial& rec = stats.trials[t];
                      rec.i = i;
                      rec.j = j;
                      rec.exact_dot = measured_direction(u).dot(measured_direction(v));
                      rec.cover_dot = cover_dot;
                      rec.tv = tv_distance(exact, simulated);
                      defects[t] = std::abs(rec.tv - 0.5 * std::abs(rec.exact_dot - rec.cover_dot));
                    }
                  });
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    stats.max_tv = std::max(stats.max_tv, stats.trials[t].tv);
    stats.identity_defect = std::max(stats.identity_defect, defects[t]);
    sum += stats.trials[t].tv;
  }
  stats.mean_tv = sum / static_cast<double>(trials);
  return stats;
}

}  // namespace nbl
