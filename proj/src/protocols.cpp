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

#include "nbl/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbl/error.hpp"
#include "nbl/parallel.hpp"

namespace nbl {

namespace {

constexpr double kInducedTolerance = 1e-10;

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::nullopt;
  return a * b;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent) {
  if (base <= 1) return exponent == 0 ? 1 : base;
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    auto next = checked_mul(out, base);
    if (!next) return std::nullopt;
    out = *next;
  }
  return out;
}

std::size_t ipow(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) out *= base;
  return out;
}

void validate_map(const std::vector<std::size_t>& map, std::size_t entries, std::size_t radix,
                  const char* name) {
  require(map.size() == entries, std::string("protocol: ") + name + " has the wrong number of entries");
  for (auto v : map) require(v < radix, std::string("protocol: ") + name + " maps outside its alphabet");
}

void check_paths(const ProtocolShape& shape) {
  auto paths = checked_pow(shape.a2 * shape.b2, shape.k);
  require(paths && *paths <= kResponsePathCap,
          "induced_box: too many response paths for exhaustive evaluation");
}

// Accumulates the outcome distribution for inputs (x, y) into `row` (size a1 * b1).
class PathWalker {
 public:
  PathWalker(const DeterministicProtocol& protocol, const CorrelationBox& target)
      : protocol_(protocol), target_(target), shape_(protocol.shape()) {}

  void run(std::size_t x, std::size_t y, double* row) const {
    walk(0, x, y, 0, 0, 1.0, row);
  }

 private:
  void walk(std::size_t level, std::size_t x, std::size_t y, std::size_t alice_code,
            std::size_t bob_code, double weight, double* row) const {
    if (level == shape_.k) {
      const std::size_t a = protocol_.alice_output()[x * ipow(shape_.a2, level) + alice_code];
      const std::size_t b = protocol_.bob_output()[y * ipow(shape_.b2, level) + bob_code];
      row[a * shape_.b1 + b] += weight;
      return;
    }
    const std::size_t qx = protocol_.alice_queries()[level][x * ipow(shape_.a2, level) + alice_code];
    const std::size_t qy = protocol_.bob_queries()[level][y * ipow(shape_.b2, level) + bob_code];
    const auto response = target_.row(qx, qy);
    for (std::size_t a = 0; a < shape_.a2; ++a) {
      for (std::size_t b = 0; b < shape_.b2; ++b) {
        const double w = response[a * shape_.b2 + b];
        if (w == 0.0) continue;
        walk(level + 1, x, y, alice_code * shape_.a2 + a, bob_code * shape_.b2 + b, weight * w, row);
      }
    }
  }

  const DeterministicProtocol& protocol_;
  const CorrelationBox& target_;
  const ProtocolShape& shape_;
};

void require_compatible(const DeterministicProtocol& protocol, const CorrelationBox& target) {
  require(protocol.shape().matches_target(target), "protocol: target alphabets do not match");
  check_paths(protocol.shape());
}

std::vector<double> induced_table(const DeterministicProtocol& protocol, const CorrelationBox& target) {
  const auto& s = protocol.shape();
  std::vector<double> table(s.x1 * s.y1 * s.a1 * s.b1, 0.0);
  PathWalker walker(protocol, target);
  for (std::size_t x = 0; x < s.x1; ++x) {
    for (std::size_t y = 0; y < s.y1; ++y) {
      walker.run(x, y, table.data() + (x * s.y1 + y) * s.a1 * s.b1);
    }
  }
  return table;
}

AffineFunction affine_from_table(const std::vector<double>& table) {
  // Binary outer alphabets: row (x, y) starts at (2x + y) * 4; P_xy = Pr[a xor b = xy].
  double win[2][2];
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double* r = table.data() + (2 * x + y) * 4;
      win[x][y] = (x & y) ? r[1] + r[2] : r[0] + r[3];
    }
  }
  const double uniform_x0 = 0.5 * (win[0][0] + win[0][1]);
  const double uniform_x1 = 0.5 * (win[1][0] + win[1][1]);
  return {uniform_x0, uniform_x1 - uniform_x0};
}

}  // namespace

ProtocolShape ProtocolShape::binary_against(const CorrelationBox& target, std::size_t k) {
  ProtocolShape shape;
  shape.x2 = target.x_size();
  shape.y2 = target.y_size();
  shape.a2 = target.a_size();
  shape.b2 = target.b_size();
  shape.k = k;
  return shape;
}

DeterministicProtocol::DeterministicProtocol(ProtocolShape shape,
                                             std::vector<std::vector<std::size_t>> alice_queries,
                                             std::vector<std::vector<std::size_t>> bob_queries,
                                             std::vector<std::size_t> alice_output,
                                             std::vector<std::size_t> bob_output)
    : shape_(shape),
      q_maps_(std::move(alice_queries)),
      r_maps_(std::move(bob_queries)),
      s_map_(std::move(alice_output)),
      t_map_(std::move(bob_output)) {
  const auto& s = shape_;
  require(s.x1 && s.y1 && s.a1 && s.b1 && s.x2 && s.y2 && s.a2 && s.b2,
          "protocol: alphabet sizes must be positive");
  require(q_maps_.size() == s.k && r_maps_.size() == s.k, "protocol: expected k query maps per party");
  for (std::size_t i = 0; i < s.k; ++i) {
    validate_map(q_maps_[i], s.x1 * ipow(s.a2, i), s.x2, "alice query map");
    validate_map(r_maps_[i], s.y1 * ipow(s.b2, i), s.y2, "bob query map");
  }
  validate_map(s_map_, s.x1 * ipow(s.a2, s.k), s.a1, "alice output map");
  validate_map(t_map_, s.y1 * ipow(s.b2, s.k), s.b1, "bob output map");
}

DeterministicProtocol local_protocol(const ProtocolShape& shape, std::vector<std::size_t> f,
                                     std::vector<std::size_t> g) {
  require(shape.k == 0, "local_protocol: shape must have k = 0");
  return DeterministicProtocol(shape, {}, {}, std::move(f), std::move(g));
}

DeterministicProtocol pass_through_protocol(const CorrelationBox& target) {
  ProtocolShape shape{target.x_size(), target.y_size(), target.a_size(), target.b_size(),
                      target.x_size(), target.y_size(), target.a_size(), target.b_size(), 1};
  std::vector<std::size_t> q(shape.x1), r(shape.y1);
  for (std::size_t x = 0; x < shape.x1; ++x) q[x] = x;
  for (std::size_t y = 0; y < shape.y1; ++y) r[y] = y;
  std::vector<std::size_t> s(shape.x1 * shape.a2), t(shape.y1 * shape.b2);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i % shape.a2;
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = i % shape.b2;
  return DeterministicProtocol(shape, {q}, {r}, std::move(s), std::move(t));
}

DeterministicProtocol pad_with_query(const DeterministicProtocol& protocol) {
  ProtocolShape shape = protocol.shape();
  auto q = protocol.alice_queries();
  auto r = protocol.bob_queries();
  q.emplace_back(shape.x1 * ipow(shape.a2, shape.k), 0);
  r.emplace_back(shape.y1 * ipow(shape.b2, shape.k), 0);
  // The new response is the least significant digit of the prefix code; drop it.
  std::vector<std::size_t> s(shape.x1 * ipow(shape.a2, shape.k + 1));
  std::vector<std::size_t> t(shape.y1 * ipow(shape.b2, shape.k + 1));
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = protocol.alice_output()[i / shape.a2];
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = protocol.bob_output()[i / shape.b2];
  shape.k += 1;
  return DeterministicProtocol(shape, std::move(q), std::move(r), std::move(s), std::move(t));
}

DeterministicProtocol random_protocol(const ProtocolShape& shape, std::mt19937_64& rng) {
  auto draw = [&rng](std::size_t entries, std::size_t radix) {
    std::uniform_int_distribution<std::size_t> dist(0, radix - 1);
    std::vector<std::size_t> out(entries);
    for (auto& v : out) v = dist(rng);
    return out;
  };
  std::vector<std::vector<std::size_t>> q, r;
  for (std::size_t i = 0; i < shape.k; ++i) q.push_back(draw(shape.x1 * ipow(shape.a2, i), shape.x2));
  for (std::size_t i = 0; i < shape.k; ++i) r.push_back(draw(shape.y1 * ipow(shape.b2, i), shape.y2));
  auto s = draw(shape.x1 * ipow(shape.a2, shape.k), shape.a1);
  auto t = draw(shape.y1 * ipow(shape.b2, shape.k), shape.b1);
  return DeterministicProtocol(shape, std::move(q), std::move(r), std::move(s), std::move(t));
}

RandomizedProtocol::RandomizedProtocol(std::vector<DeterministicProtocol> protocols,
                                       std::vector<double> weights)
    : protocols_(std::move(protocols)), weights_(std::move(weights)) {
  require(!protocols_.empty(), "randomized protocol: empty support");
  require(protocols_.size() == weights_.size(), "randomized protocol: one weight per protocol");
  double total = 0.0;
  for (double w : weights_) {
    require(w >= 0.0 && std::isfinite(w), "randomized protocol: weights must be nonnegative");
    total += w;
  }
  require(std::abs(total - 1.0) <= kNormalizationTolerance, "randomized protocol: weights must sum to 1");
  for (const auto& p : protocols_) {
    require(p.shape() == protocols_.front().shape(), "randomized protocol: mixed shapes");
  }
}

CorrelationBox induced_box(const DeterministicProtocol& protocol, const CorrelationBox& target) {
  require_compatible(protocol, target);
  const auto& s = protocol.shape();
  return CorrelationBox(s.x1, s.y1, s.a1, s.b1, induced_table(protocol, target), kInducedTolerance);
}

CorrelationBox induced_box(const RandomizedProtocol& protocol, const CorrelationBox& target) {
  std::vector<CorrelationBox> boxes;
  boxes.reserve(protocol.protocols().size());
  for (const auto& p : protocol.protocols()) boxes.push_back(induced_box(p, target));
  return mix(boxes, protocol.weights());
}

ReductionCheck check_reduction(const DeterministicProtocol& protocol, const CorrelationBox& target,
                               const CorrelationBox& source, double epsilon) {
  const double tv = tv_closeness(induced_box(protocol, target), source);
  return {tv <= epsilon, tv};
}

ReductionCheck check_reduction(const RandomizedProtocol& protocol, const CorrelationBox& target,
                               const CorrelationBox& source, double epsilon) {
  const double tv = tv_closeness(induced_box(protocol, target), source);
  return {tv <= epsilon, tv};
}

std::optional<std::uint64_t> protocol_count(const ProtocolShape& s) {
  std::uint64_t total = 1;
  auto fold = [&total](std::uint64_t radix, std::uint64_t entries) {
    auto factor = checked_pow(radix, entries);
    if (!factor) return false;
    auto next = checked_mul(total, *factor);
    if (!next) return false;
    total = *next;
    return true;
  };
  for (std::size_t i = 0; i < s.k; ++i) {
    auto ai = checked_pow(s.a2, i);
    auto bi = checked_pow(s.b2, i);
    if (!ai || !bi) return std::nullopt;
    auto alice_entries = checked_mul(s.x1, *ai);
    auto bob_entries = checked_mul(s.y1, *bi);
    if (!alice_entries || !bob_entries) return std::nullopt;
    if (!fold(s.x2, *alice_entries) || !fold(s.y2, *bob_entries)) return std::nullopt;
  }
  auto ak = checked_pow(s.a2, s.k);
  auto bk = checked_pow(s.b2, s.k);
  if (!ak || !bk) return std::nullopt;
  auto alice_entries = checked_mul(s.x1, *ak);
  auto bob_entries = checked_mul(s.y1, *bk);
  if (!alice_entries || !bob_entries) return std::nullopt;
  if (!fold(s.a1, *alice_entries) || !fold(s.b1, *bob_entries)) return std::nullopt;
  return total;
}

double log_counting_bound(std::size_t x, std::size_t y, std::size_t a, std::size_t b, std::size_t k) {
  const double kd = static_cast<double>(k);
  return 2.0 * std::pow(static_cast<double>(a), kd) * std::log(2.0 * static_cast<double>(x)) +
         2.0 * std::pow(static_cast<double>(b), kd) * std::log(2.0 * static_cast<double>(y));
}

double counting_bound(std::size_t x, std::size_t y, std::size_t a, std::size_t b, std::size_t k) {
  const double kd = static_cast<double>(k);
  return std::pow(2.0 * static_cast<double>(x), 2.0 * std::pow(static_cast<double>(a), kd)) *
         std::pow(2.0 * static_cast<double>(y), 2.0 * std::pow(static_cast<double>(b), kd));
}

ProtocolEnumerator::ProtocolEnumerator(const ProtocolShape& shape, std::uint64_t cap) : shape_(shape) {
  auto count = protocol_count(shape);
  require(count.has_value() && *count <= cap, "enumerate_protocols: protocol count exceeds the cap");
  count_ = *count;
  const int k = static_cast<int>(shape.k);
  for (int i = 0; i < k; ++i) {
    for (std::size_t e = 0; e < shape.x1 * ipow(shape.a2, i); ++e) digits_.push_back({i, e, shape.x2});
  }
  for (int i = 0; i < k; ++i) {
    for (std::size_t e = 0; e < shape.y1 * ipow(shape.b2, i); ++e) digits_.push_back({k + i, e, shape.y2});
  }
  for (std::size_t e = 0; e < shape.x1 * ipow(shape.a2, k); ++e) digits_.push_back({2 * k, e, shape.a1});
  for (std::size_t e = 0; e < shape.y1 * ipow(shape.b2, k); ++e) digits_.push_back({2 * k + 1, e, shape.b1});
}

std::size_t& ProtocolEnumerator::slot(DeterministicProtocol& protocol, const Digit& digit) const {
  const int k = static_cast<int>(shape_.k);
  if (digit.map < k) return protocol.q_maps_[digit.map][digit.entry];
  if (digit.map < 2 * k) return protocol.r_maps_[digit.map - k][digit.entry];
  if (digit.map == 2 * k) return protocol.s_map_[digit.entry];
  return protocol.t_map_[digit.entry];
}

DeterministicProtocol ProtocolEnumerator::blank() const {
  DeterministicProtocol p;
  p.shape_ = shape_;
  for (std::size_t i = 0; i < shape_.k; ++i) {
    p.q_maps_.emplace_back(shape_.x1 * ipow(shape_.a2, i), 0);
    p.r_maps_.emplace_back(shape_.y1 * ipow(shape_.b2, i), 0);
  }
  p.s_map_.assign(shape_.x1 * ipow(shape_.a2, shape_.k), 0);
  p.t_map_.assign(shape_.y1 * ipow(shape_.b2, shape_.k), 0);
  return p;
}

DeterministicProtocol ProtocolEnumerator::at(std::uint64_t index) const {
  require(index < count_, "enumerate_protocols: index out of range");
  DeterministicProtocol p = blank();
  for (const auto& d : digits_) {
    slot(p, d) = static_cast<std::size_t>(index % d.radix);
    index /= d.radix;
  }
  return p;
}

void ProtocolEnumerator::for_each(
    std::uint64_t begin, std::uint64_t end,
    const std::function<void(std::uint64_t, const DeterministicProtocol&)>& visit) const {
  end = std::min(end, count_);
  if (begin >= end) return;
  DeterministicProtocol p = at(begin);
  for (std::uint64_t index = begin; index < end; ++index) {
    visit(index, p);
    // Odometer increment, first digit least significant.
    for (const auto& d : digits_) {
      auto& v = slot(p, d);
      if (++v < d.radix) break;
      v = 0;
    }
  }
}

AffineFunction affine_of(const DeterministicProtocol& protocol, const CorrelationBox& target) {
  const auto& s = protocol.shape();
  require(s.x1 == 2 && s.y1 == 2 && s.a1 == 2 && s.b1 == 2, "affine_of: outer alphabets must be binary");
  require_compatible(protocol, target);
  return affine_from_table(induced_table(protocol, target));
}

std::vector<AffineFunction> dedup_affine(std::vector<AffineFunction> lines, double tolerance) {
  std::sort(lines.begin(), lines.end(), [](const AffineFunction& l, const AffineFunction& r) {
    return l.intercept != r.intercept ? l.intercept < r.intercept : l.slope < r.slope;
  });
  std::vector<AffineFunction> kept;
  for (const auto& line : lines) {
    bool duplicate = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (line.intercept - it->intercept > tolerance) break;
      if (std::abs(line.slope - it->slope) <= tolerance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(line);
  }
  return kept;
}

std::vector<AffineFunction> affine_family(const CorrelationBox& target, std::size_t k,
                                          const FamilyOptions& options) {
  std::vector<AffineFunction> all;
  const std::size_t first_k = options.up_to_k ? 0 : k;
  const unsigned threads = options.threads ? options.threads : default_thread_count();
  for (std::size_t kk = first_k; kk <= k; ++kk) {
    const ProtocolShape shape = ProtocolShape::binary_against(target, kk);
    check_paths(shape);
    const ProtocolEnumerator enumerator(shape, options.cap);
    std::vector<std::vector<AffineFunction>> partial(std::max(1U, threads));
    parallel_chunks(enumerator.size(), threads,
                    [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
                      auto& out = partial[chunk];
                      enumerator.for_each(begin, end, [&](std::uint64_t, const DeterministicProtocol& p) {
                        out.push_back(affine_from_table(induced_table(p, target)));
                      });
                      // Exact duplicates only; tolerant merging happens once, globally.
                      std::sort(out.begin(), out.end(), [](const AffineFunction& l, const AffineFunction& r) {
                        return l.intercept != r.intercept ? l.intercept < r.intercept : l.slope < r.slope;
                      });
                      out.erase(std::unique(out.begin(), out.end()), out.end());
                    });
    for (auto& part : partial) all.insert(all.end(), part.begin(), part.end());
  }
  return dedup_affine(std::move(all));
}

}  // namespace nbl
