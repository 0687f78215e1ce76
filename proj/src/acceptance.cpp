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

#include "nbl/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nbl/analysis.hpp"
#include "nbl/boxes.hpp"
#include "nbl/games.hpp"
#include "nbl/parallel.hpp"
#include "nbl/protocols.hpp"
#include "nbl/quantum.hpp"
#include "nbl/sphere_cover.hpp"

namespace nbl {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTsirelson = 0.8535533906;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void check(bool condition, const std::string& what) {
    if (!condition) {
      passed = false;
      detail << "FAILED: " << what << "; ";
    }
  }
};

CorrelationBox random_box(std::size_t xs, std::size_t ys, std::size_t as, std::size_t bs,
                          std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> table;
  const std::size_t row = as * bs;
  for (std::size_t r = 0; r < xs * ys; ++r) {
    std::vector<double> v(row);
    double total = 0.0;
    for (auto& e : v) total += (e = expo(rng));
    for (auto& e : v) table.push_back(e / total);
  }
  return CorrelationBox(xs, ys, as, bs, std::move(table));
}

BellBoxSpec random_bell_spec(std::size_t xs, std::size_t ys, std::mt19937_64& rng) {
  std::vector<Unitary2> us, vs;
  for (std::size_t i = 0; i < xs; ++i) us.push_back(random_unitary(rng));
  for (std::size_t i = 0; i < ys; ++i) vs.push_back(random_unitary(rng));
  return BellBoxSpec::uniform(us, vs);
}

double row_sum_defect(const CorrelationBox& box) {
  double worst = 0.0;
  for (std::size_t x = 0; x < box.x_size(); ++x) {
    for (std::size_t y = 0; y < box.y_size(); ++y) {
      double s = 0.0;
      for (double p : box.row(x, y)) s += p;
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  return worst;
}

Outcome tsirelson_anchor() {
  Outcome out;
  double worst_gap = 0.0;
  double worst_excess = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const double p = 0.5 + 0.05 * i;
    const auto result = optimal_strategy(p);
    const double w = omega(p);
    worst_gap = std::max(worst_gap, std::abs(result.value - w));
    worst_excess = std::max(worst_excess, result.value - w);
    if (i == 0) {
      out.check(std::abs(result.value - kTsirelson) <= 1e-6, "p = 0.5 value within 1e-6 of 0.8535533906");
      out.detail << "p=0.5 value=" << result.value << "; ";
    }
  }
  out.check(worst_gap <= 1e-6, "all grid values within 1e-6 of omega(p)");
  out.check(worst_excess <= 1e-9, "no value exceeds omega(p) + 1e-9");
  out.detail << "max |value-omega|=" << worst_gap << " max excess=" << worst_excess;
  return out;
}

Outcome classical_bound() {
  Outcome out;
  const auto boxes = deterministic_binary_boxes();
  double best_local = 0.0;
  double best_any = 0.0;
  std::size_t local_count = 0;
  for (const auto& box : boxes) {
    const double v = win_prob(box, 0.5, 0.5);
    best_any = std::max(best_any, v);
    if (is_nonsignaling(box, 0.0)) {
      ++local_count;
      best_local = std::max(best_local, v);
    }
  }
  out.check(boxes.size() == 256, "256 deterministic boxes enumerated");
  out.check(local_count == 16, "16 of them are non-signaling (local)");
  out.check(best_local == 0.75, "max local win probability is exactly 0.75");
  const auto pr = pr_box();
  bool pr_perfect = true;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) pr_perfect = pr_perfect && win_prob(pr, 0.25 * i, 0.25 * j) == 1.0;
  }
  out.check(pr_perfect, "PR box wins with probability exactly 1 on the 5x5 grid");
  out.detail << "boxes=" << boxes.size() << " local=" << local_count << " max_local=" << best_local
             << " max_any(signaling allowed)=" << best_any;
  return out;
}

Outcome counting_bound_check() {
  Outcome out;
  ProtocolShape shape;  // binary everything
  shape.k = 1;
  const auto count = protocol_count(shape);
  const ProtocolEnumerator enumerator(shape);
  std::uint64_t visited = 0;
  enumerator.for_each(0, enumerator.size(), [&](std::uint64_t, const DeterministicProtocol&) { ++visited; });
  const double bound = counting_bound(2, 2, 2, 2, 1);
  // prod_i |X|^{2|A|^{i-1}} prod_i |Y|^{2|B|^{i-1}} 2^{2|A|^k} 2^{2|B|^k} = 4 * 4 * 16 * 16
  const std::uint64_t formula = 4 * 4 * 16 * 16;
  out.check(count.has_value() && *count == formula, "count formula gives 4 * 4 * 16 * 16");
  out.check(visited == formula, "enumeration visits every protocol exactly once");
  out.check(bound == 65536.0, "bound (2|X|)^{2|A|}(2|Y|)^{2|B|} = 65536");
  out.check(static_cast<double>(visited) <= bound, "count <= bound");
  out.detail << "count=" << visited << " bound=" << bound;
  return out;
}

Outcome affine_consistency(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto target = random_box(2, 2, 2, 2, rng);
    ProtocolShape shape = ProtocolShape::binary_against(target, 1 + trial % 2);
    const auto protocol = random_protocol(shape, rng);
    const auto line = affine_of(protocol, target);
    const auto induced = induced_box(protocol, target);
    for (double p : {0.5, 0.7, 1.0}) worst = std::max(worst, std::abs(line(p) - win_prob(induced, p, 0.5)));
  }
  out.check(worst <= 1e-12, "affine_of agrees with win_prob within 1e-12");
  out.detail << "max discrepancy=" << worst;
  return out;
}

Outcome intersection_property(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t max_roots = 0;
  std::size_t max_sign_changes = 0;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    AffineFunction line;
    switch (trial % 3) {
      case 0: {  // secant through two points of the curve
        const double p1 = 0.5 + 0.5 * unit(rng);
        const double p2 = 0.5 + 0.5 * unit(rng);
        const double slope = p1 == p2 ? omega_derivative(p1) : (omega(p2) - omega(p1)) / (p2 - p1);
        line = {omega(p1) - slope * p1, slope};
        break;
      }
      case 1:
        line = tangent_line(0.5 + 0.5 * unit(rng));
        break;
      default:
        line = {1.5 * unit(rng), 2.0 * unit(rng) - 1.0};
        break;
    }
    const auto roots = line_intersections(line);
    std::size_t counted = 0;
    for (const auto& r : roots) counted += static_cast<std::size_t>(r.multiplicity);
    max_roots = std::max(max_roots, counted);
    worst_residual = std::max(worst_residual, intersection_residual(line, roots));
    // Independent check: sign changes of l - omega on a grid.
    std::size_t changes = 0;
    double prev = line(0.5) - omega(0.5);
    for (int g = 1; g <= 2000; ++g) {
      const double p = 0.5 + 0.5 * g / 2000.0;
      const double cur = line(p) - omega(p);
      if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) ++changes;
      if (cur != 0.0) prev = cur;
    }
    max_sign_changes = std::max(max_sign_changes, changes);
  }
  out.check(max_roots <= 2, "at most two intersections (with multiplicity)");
  out.check(max_sign_changes <= 2, "grid oracle sees at most two sign changes");
  out.check(worst_residual <= 1e-10, "back-substitution residuals <= 1e-10");
  out.detail << "max roots=" << max_roots << " max sign changes=" << max_sign_changes
             << " max residual=" << worst_residual;
  return out;
}

double loglog_slope(const AffineFunction& line, const std::vector<double>& epsilons) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(epsilons.size());
  for (double e : epsilons) {
    const double x = std::log(e);
    const double y = std::log(measure_near(line, e));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome sqrt_measure_law() {
  Outcome out;
  std::vector<AffineFunction> lines{best_uniform_line()};
  for (double p0 : {0.6, 0.675, 0.75, 0.825, 0.9}) lines.push_back(tangent_line(p0));
  double worst_ratio = 0.0;
  for (const auto& line : lines) {
    for (double e : {1e-2, 1e-3, 1e-4}) worst_ratio = std::max(worst_ratio, measure_near(line, e) / std::sqrt(e));
  }
  out.check(worst_ratio <= 8.0, "measure_near <= 8 sqrt(eps)");
  const std::vector<double> fit_eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double s = loglog_slope(lines[i], fit_eps);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  out.check(lo >= 0.45 && hi <= 0.55, "tangent-line log-log slopes within 0.5 +- 0.05");
  out.detail << "max measure/sqrt(eps)=" << worst_ratio << " slopes in [" << lo << ", " << hi
             << "] best-line slope=" << loglog_slope(lines[0], {1e-3, 1e-4, 1e-5, 1e-6});
  return out;
}

Outcome gap_certificate(unsigned threads) {
  Outcome out;
  const auto cover = certify_cover(octahedron_points());
  const auto target = discretized_box(cover);
  FamilyOptions options;
  options.threads = threads;
  const auto family = affine_family(target, 1, options);
  auto cert = find_hard_p(family, 10000);
  cert.target = "octahedron";
  cert.k = 1;
  out.check(cert.gap > 1e-4, "gap > 1e-4");
  out.check(verify_certificate(cert, 1e-12), "certificate recomputes to 1e-12");
  out.check(std::abs(cert.gap - kOctahedronGoldenGap) <= 1e-9, "gap matches the recorded golden value");
  out.check(std::abs(cert.p_star - kOctahedronGoldenPStar) <= 1e-9, "p_star matches the recorded golden value");
  out.detail.precision(17);
  out.detail << "family=" << family.size() << " p_star=" << cert.p_star << " gap=" << cert.gap;
  return out;
}

Outcome schedule_check() {
  Outcome out;
  const double c = 0.01;
  const auto entries = epsilon_schedule(2, 2, 2, 2, 3, c);
  double worst_identity = 0.0;
  bool inequality = true;
  double series = 0.0;
  for (const auto& e : entries) {
    worst_identity = std::max(worst_identity, std::abs(e.identity_error));
    inequality = inequality && e.inequality_holds;
    series += std::sqrt(e.epsilon) * e.bound;
  }
  out.check(entries.size() == 3, "three schedule entries");
  out.check(worst_identity <= 1e-12, "k^4 bound^2 eps = c^2 to 1e-12 relative");
  out.check(inequality, "k^4 (2|X|)^{4|A|^k} (2|Y|)^{4|B|^k} >= c^2 / eps_k");
  out.check(series <= c * std::numbers::pi * std::numbers::pi / 6.0 * (1.0 + 1e-12) && series < 1.0,
            "sum sqrt(eps_k) bound_k <= c pi^2/6 < 1");
  out.detail << "eps_1=" << entries[0].epsilon << " max identity error=" << worst_identity
             << " series=" << series;
  return out;
}

Outcome sphere_positive_result(std::uint64_t seed, unsigned threads) {
  Outcome out;
  const auto cover = build_cover(0.2);
  out.check(cover.size() <= 250, "T <= 250 at eps = 0.2");
  out.check(cover.covering_radius <= 0.2, "audited radius <= 0.2");
  const auto stats = verify_reduction(cover, 1000, seed, threads);
  out.check(stats.max_tv <= 0.2, "max exact TV <= 0.2 over 1000 Haar pairs");
  out.check(stats.identity_defect <= 1e-12, "TV equals 1/2 |x.y - c_i.c_j|");
  const auto table_box = discretized_box(cover);
  const auto bell = bell_box(discretized_bell_spec(cover), TwoQubitState::singlet());
  double worst_entry = 0.0;
  for (std::size_t e = 0; e < table_box.table().size(); ++e) {
    worst_entry = std::max(worst_entry, std::abs(table_box.table()[e] - bell.table()[e]));
  }
  out.check(worst_entry <= 1e-10, "bell_box reconstruction matches the table within 1e-10");
  double worst_scaling = 0.0;
  for (double eps : {0.5, 0.2, 0.1, 0.05}) {
    const auto c = eps == 0.2 ? cover : build_cover(eps);
    out.check(c.covering_radius <= eps, "audited radius <= eps");
    worst_scaling = std::max(worst_scaling, static_cast<double>(c.size()) * eps * eps);
  }
  out.check(worst_scaling <= 10.0, "T(eps) eps^2 <= 10");
  out.detail << "T=" << cover.size() << " radius=" << cover.covering_radius << " max_tv=" << stats.max_tv
             << " mean_tv=" << stats.mean_tv << " bell mismatch=" << worst_entry
             << " max T*eps^2=" << worst_scaling;
  return out;
}

Outcome property_suites(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  double worst_norm = 0.0;
  double worst_ns = signaling_defect(pr_box());
  worst_norm = std::max(worst_norm, row_sum_defect(pr_box()));
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = random_bell_spec(2 + trial % 3, 2 + trial % 2, rng);
    const auto bell = bell_box(spec, TwoQubitState::phi_plus());
    worst_norm = std::max(worst_norm, row_sum_defect(bell));
    worst_ns = std::max(worst_ns, signaling_defect(bell));
    const auto other = bell_box(random_bell_spec(spec.x_size(), spec.y_size(), rng), TwoQubitState::phi_plus());
    const std::vector<CorrelationBox> pair{bell, other};
    const std::vector<double> weights{0.3, 0.7};
    const auto mixed = mix(pair, weights);
    worst_norm = std::max(worst_norm, row_sum_defect(mixed));
    worst_ns = std::max(worst_ns, signaling_defect(mixed));
    if (trial % 4 == 0) {
      const auto binary = bell_box(random_bell_spec(2, 2, rng), TwoQubitState::phi_plus());
      const auto protocol = random_protocol(ProtocolShape::binary_against(binary, 1 + trial % 8 / 4), rng);
      const auto induced = induced_box(protocol, binary);
      worst_norm = std::max(worst_norm, row_sum_defect(induced));
      worst_ns = std::max(worst_ns, signaling_defect(induced));
    }
  }
  out.check(worst_norm <= 1e-12, "normalization within 1e-12");
  out.check(worst_ns <= 1e-10, "non-signaling within 1e-10");

  double worst_defect = 0.0;
  double worst_dot = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto u = random_unitary(rng);
    const auto v = random_unitary(rng);
    worst_defect = std::max(worst_defect, singlet_invariance_defect(v));
    const auto dist = singlet_measure_box(u, v);
    const auto x = measured_direction(u);
    const auto y = measured_direction(v);
    worst_dot = std::max(worst_dot, std::abs(dist(0, 0) + dist(1, 1) - singlet_prob_equal(x, y)));
    const Complex corner = (u.matrix() * v.inverse().matrix())(1, 1);
    worst_dot = std::max(worst_dot, std::abs(std::norm(corner) - (0.5 + 0.5 * x.dot(y))));
  }
  out.check(worst_defect <= 1e-10, "singlet invariance defect <= 1e-10");
  out.check(worst_dot <= 1e-10, "dot-product law within 1e-10");

  double min_second = 1e300;
  double worst_fd = 0.0;
  for (int i = 0; i <= 100; ++i) min_second = std::min(min_second, omega_second_derivative(0.5 + 0.005 * i));
  const double h = 1e-4;
  for (int i = 1; i <= 99; ++i) {
    const double p = 0.5 + 0.005 * i;
    const double fd = (omega(p + h) - 2.0 * omega(p) + omega(p - h)) / (h * h);
    worst_fd = std::max(worst_fd, std::abs(fd - omega_second_derivative(p)));
  }
  out.check(min_second >= 0.5, "omega'' >= 1/2 on [1/2, 1]");
  out.check(worst_fd <= 1e-6, "finite differences agree within 1e-6");

  const auto s1 = random_bell_spec(2, 2, rng);
  auto s2 = random_bell_spec(3, 2, rng);
  s2.a_size = 3;
  s2.alice[1].relabel = {2, 0};
  const auto sum = bell_box(direct_sum_bell(s1, s2), TwoQubitState::phi_plus());
  const double block1 = tv_closeness(restrict_box(sum, 0, 2, 0, 2, 0, 2, 0, 2), bell_box(s1, TwoQubitState::phi_plus()));
  const double block2 = tv_closeness(restrict_box(sum, 2, 3, 2, 2, 2, 3, 2, 2), bell_box(s2, TwoQubitState::phi_plus()));
  out.check(block1 == 0.0 && block2 == 0.0, "direct-sum block restriction has TV 0");
  out.check(signaling_defect(sum) <= 1e-10, "direct sum is non-signaling including cross blocks");

  out.detail << "norm=" << worst_norm << " ns=" << worst_ns << " singlet=" << worst_defect
             << " dot=" << worst_dot << " min omega''=" << min_second << " fd=" << worst_fd
             << " blocks=" << block1 << "," << block2;
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  const unsigned threads = options.threads ? options.threads : default_thread_count();
  struct Entry {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries{
      {1, "Tsirelson/omega anchor", 60.0, [] { return tsirelson_anchor(); }},
      {2, "classical CHSH bound", 1.0, [] { return classical_bound(); }},
      {3, "counting bound", 1.0, [] { return counting_bound_check(); }},
      {4, "affine consistency", 60.0, [&] { return affine_consistency(options.seed); }},
      {5, "intersection property", 60.0, [&] { return intersection_property(options.seed); }},
      {6, "sqrt(eps) measure law", 30.0, [] { return sqrt_measure_law(); }},
      {7, "gap certificate (octahedron, k = 1)", 300.0, [&] { return gap_certificate(threads); }},
      {8, "epsilon_k schedule", 1.0, [] { return schedule_check(); }},
      {9, "sphere-cover positive result", 60.0, [&] { return sphere_positive_result(options.seed, threads); }},
      {10, "property suites", 120.0, [&] { return property_suites(options.seed); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.budget_seconds = e.budget;
    const auto start = Clock::now();
    try {
      Outcome o = e.run();
      r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      r.passed = o.passed;
      r.detail = o.detail.str();
    } catch (const std::exception& ex) {
      r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    if (r.seconds > r.budget_seconds) {
      r.passed = false;
      r.detail += " (over time budget)";
    }
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace nbl
