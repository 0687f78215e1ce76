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

#include "nbl/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "nbl/error.hpp"
#include "nbl/games.hpp"

namespace nbl {

namespace {

constexpr double kLo = 0.5;
constexpr double kHi = 1.0;
constexpr double kBackSubstitution = 1e-10;

double residual(const AffineFunction& line, double p) { return line(p) - omega(p); }

// Smallest p in [lo, hi] with pred(p) true, for pred monotone false -> true.
template <typename Pred>
double bisect(double lo, double hi, double tolerance, Pred pred) {
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Length of {p in [lo, hi] : |h(p)| <= eps} for h monotone on [lo, hi];
// `increasing` tells which way.
double monotone_piece(const AffineFunction& line, double lo, double hi, double eps, bool increasing,
                      double tolerance) {
  if (hi <= lo) return 0.0;
  auto h = [&line](double p) { return residual(line, p); };
  const double h_lo = h(lo);
  const double h_hi = h(hi);
  const double low_value = increasing ? h_lo : h_hi;
  const double high_value = increasing ? h_hi : h_lo;
  if (high_value < -eps || low_value > eps) return 0.0;
  // Boundaries where h crosses -eps and +eps.
  double enter;
  double leave;
  if (increasing) {
    enter = low_value >= -eps ? lo : bisect(lo, hi, tolerance, [&](double p) { return h(p) >= -eps; });
    leave = high_value <= eps ? hi : bisect(lo, hi, tolerance, [&](double p) { return h(p) > eps; });
  } else {
    leave = low_value >= -eps ? hi : bisect(lo, hi, tolerance, [&](double p) { return h(p) < -eps; });
    enter = high_value <= eps ? lo : bisect(lo, hi, tolerance, [&](double p) { return h(p) <= eps; });
  }
  return std::max(0.0, leave - enter);
}

}  // namespace

double omega_derivative(double p) {
  return (2.0 * p - 1.0) / (2.0 * std::sqrt(p * p + (1.0 - p) * (1.0 - p)));
}

double omega_second_derivative(double p) {
  require(p >= kLo && p <= kHi, "omega_second_derivative: p must lie in [1/2, 1]");
  return 0.5 * std::pow(p * p + (1.0 - p) * (1.0 - p), -1.5);
}

AffineFunction tangent_line(double p0) {
  const double slope = omega_derivative(p0);
  return {omega(p0) - slope * p0, slope};
}

AffineFunction best_uniform_line() {
  const double chord_slope = (omega(kHi) - omega(kLo)) / (kHi - kLo);
  // omega' is increasing, so the parallel tangent point is found by bisection.
  const double t = bisect(kLo, kHi, 1e-15, [&](double p) { return omega_derivative(p) >= chord_slope; });
  const double chord_at_t = omega(kLo) + chord_slope * (t - kLo);
  const double half_gap = 0.5 * (chord_at_t - omega(t));
  return {omega(kLo) - chord_slope * kLo - half_gap, chord_slope};
}

std::vector<Intersection> line_intersections(const AffineFunction& line) {
  // l = omega  <=>  r(p) = sqrt(p^2 + (1-p)^2) with r = 2l - 1 = r0 + r1 p.
  const double r0 = 2.0 * line.intercept - 1.0;
  const double r1 = 2.0 * line.slope;
  const double qa = 2.0 - r1 * r1;
  const double qb = -2.0 - 2.0 * r0 * r1;
  const double qc = 1.0 - r0 * r0;

  std::vector<Intersection> candidates;
  const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
  if (std::abs(qa) <= 1e-14 * scale) {
    // qb cannot vanish together with qa (the quadratic has discriminant -4 in p).
    candidates.push_back({-qc / qb, 1});
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    const double disc_tolerance = 1e-14 * std::max(qb * qb, std::abs(4.0 * qa * qc));
    if (std::abs(disc) <= disc_tolerance) {
      candidates.push_back({-qb / (2.0 * qa), 2});
    } else if (disc > 0.0) {
      const double root = std::sqrt(disc);
      const double q = -0.5 * (qb + std::copysign(root, qb));
      const double p1 = q / qa;
      const double p2 = q != 0.0 ? qc / q : -qb / (2.0 * qa);
      candidates.push_back({std::min(p1, p2), 1});
      candidates.push_back({std::max(p1, p2), 1});
    }
  }

  std::vector<Intersection> out;
  for (auto c : candidates) {
    if (c.p < kLo - 1e-12 || c.p > kHi + 1e-12) continue;
    c.p = std::clamp(c.p, kLo, kHi);
    if (std::abs(residual(line, c.p)) > kBackSubstitution) continue;
    out.push_back(c);
  }
  return out;
}

double intersection_residual(const AffineFunction& line, const std::vector<Intersection>& roots) {
  double worst = 0.0;
  for (const auto& r : roots) worst = std::max(worst, std::abs(residual(line, r.p)));
  return worst;
}

double measure_near(const AffineFunction& line, double epsilon, double tolerance) {
  require(epsilon > 0.0, "measure_near: epsilon must be positive");
  require(tolerance > 0.0, "measure_near: tolerance must be positive");
  // h = l - omega is concave; its maximizer splits [1/2, 1] into an increasing
  // and a decreasing piece.
  double peak;
  if (line.slope <= omega_derivative(kLo)) {
    peak = kLo;
  } else if (line.slope >= omega_derivative(kHi)) {
    peak = kHi;
  } else {
    peak = bisect(kLo, kHi, 1e-15, [&](double p) { return omega_derivative(p) >= line.slope; });
  }
  const double length = monotone_piece(line, kLo, peak, epsilon, true, tolerance) +
                        monotone_piece(line, peak, kHi, epsilon, false, tolerance);
  return std::min(1.0, length / (kHi - kLo));
}

double family_gap(const std::vector<AffineFunction>& family, double p) {
  require(!family.empty(), "family_gap: empty family");
  const double w = omega(p);
  double best = std::abs(family.front()(p) - w);
  for (const auto& line : family) best = std::min(best, std::abs(line(p) - w));
  return best;
}

GapCertificate find_hard_p(const std::vector<AffineFunction>& family, std::size_t resolution) {
  require(!family.empty(), "find_hard_p: empty family");
  require(resolution >= 2, "find_hard_p: resolution must be at least 2");
  const double h = (kHi - kLo) / static_cast<double>(resolution);
  std::size_t best_i = 0;
  double best = -1.0;
  for (std::size_t i = 0; i <= resolution; ++i) {
    const double g = family_gap(family, kLo + h * static_cast<double>(i));
    if (g > best) {
      best = g;
      best_i = i;
    }
  }
  double p_star = kLo + h * static_cast<double>(best_i);

  // Golden-section refinement on the bracket around the grid maximum.
  double lo = std::max(kLo, p_star - h);
  double hi = std::min(kHi, p_star + h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double gc = family_gap(family, c);
  double gd = family_gap(family, d);
  while (hi - lo > 1e-10) {
    if (gc >= gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - inv_phi * (hi - lo);
      gc = family_gap(family, c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + inv_phi * (hi - lo);
      gd = family_gap(family, d);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_gap = family_gap(family, refined);
  if (refined_gap > best) {
    best = refined_gap;
    p_star = refined;
  }

  GapCertificate cert;
  cert.p_star = p_star;
  cert.gap = family_gap(family, p_star);
  cert.resolution = resolution;
  cert.family = family;
  return cert;
}

bool verify_certificate(const GapCertificate& certificate, double tolerance) {
  if (certificate.family.empty()) return false;
  return std::abs(family_gap(certificate.family, certificate.p_star) - certificate.gap) <= tolerance;
}

std::vector<ScheduleEntry> epsilon_schedule(std::size_t x_size, std::size_t y_size,
                                            std::size_t a_size, std::size_t b_size,
                                            std::size_t k_max, double c) {
  require(c > 0.0 && std::isfinite(c), "epsilon_schedule: c must be positive");
  require(x_size > 0 && y_size > 0 && a_size > 0 && b_size > 0,
          "epsilon_schedule: alphabet sizes must be positive");
  std::vector<ScheduleEntry> out;
  const double log_c = std::log(c);
  for (std::size_t k = 1; k <= k_max; ++k) {
    ScheduleEntry e;
    e.k = k;
    const double log_k = std::log(static_cast<double>(k));
    e.log_bound = log_counting_bound(x_size, y_size, a_size, b_size, k);
    e.bound = counting_bound(x_size, y_size, a_size, b_size, k);
    e.log_epsilon = 2.0 * (log_c - 2.0 * log_k - e.log_bound);
    if (std::isfinite(e.bound)) {
      const double root = c / (static_cast<double>(k * k) * e.bound);
      e.epsilon = root * root;
    } else {
      e.epsilon = std::exp(e.log_epsilon);
    }
    // log(k^4 bound^2 eps) - log(c^2); exp(x) - 1 via expm1 keeps small errors exact.
    const double log_lhs = 4.0 * log_k + 2.0 * e.log_bound + e.log_epsilon;
    e.identity_error = std::expm1(log_lhs - 2.0 * log_c);
    const double log_left = 4.0 * log_k + 2.0 * e.log_bound;
    const double log_right = 2.0 * log_c - e.log_epsilon;
    e.inequality_holds = log_left >= log_right - 1e-12 * std::max(1.0, std::abs(log_right));
    out.push_back(e);
  }
  return out;
}

}  // namespace nbl
