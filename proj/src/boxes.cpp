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

#include "nbl/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nbl/error.hpp"

namespace nbl {

namespace {

void validate_row(std::span<const double> row, double tolerance, const char* what) {
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      std::ostringstream msg;
      msg << what << ": entry " << p << " is not a nonnegative finite probability";
      throw PreconditionError(msg.str());
    }
    total += p;
  }
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": row sums to " << total << ", not 1 within " << tolerance;
    throw PreconditionError(msg.str());
  }
}

}  // namespace

JointDistribution::JointDistribution(std::size_t a_size, std::size_t b_size,
                                     std::vector<double> probs, double tolerance)
    : a_size_(a_size), b_size_(b_size), probs_(std::move(probs)) {
  require(a_size_ > 0 && b_size_ > 0, "joint distribution: alphabet sizes must be positive");
  require(probs_.size() == a_size_ * b_size_, "joint distribution: expected a_size*b_size entries");
  validate_row(probs_, tolerance, "joint distribution");
}

std::vector<double> JointDistribution::marginal_a() const {
  std::vector<double> out(a_size_, 0.0);
  for (std::size_t a = 0; a < a_size_; ++a) {
    for (std::size_t b = 0; b < b_size_; ++b) out[a] += (*this)(a, b);
  }
  return out;
}

std::vector<double> JointDistribution::marginal_b() const {
  std::vector<double> out(b_size_, 0.0);
  for (std::size_t a = 0; a < a_size_; ++a) {
    for (std::size_t b = 0; b < b_size_; ++b) out[b] += (*this)(a, b);
  }
  return out;
}

double tv_distance(const JointDistribution& lhs, const JointDistribution& rhs) {
  require(lhs.a_size() == rhs.a_size() && lhs.b_size() == rhs.b_size(),
          "tv_distance: alphabet mismatch");
  double sum = 0.0;
  auto p = lhs.probs();
  auto q = rhs.probs();
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

CorrelationBox::CorrelationBox(std::size_t x_size, std::size_t y_size, std::size_t a_size,
                               std::size_t b_size, std::vector<double> table, double tolerance)
    : x_size_(x_size), y_size_(y_size), a_size_(a_size), b_size_(b_size), table_(std::move(table)) {
  require(x_size_ > 0 && y_size_ > 0 && a_size_ > 0 && b_size_ > 0,
          "correlation box: alphabet sizes must be positive");
  require(table_.size() == x_size_ * y_size_ * a_size_ * b_size_,
          "correlation box: table size does not match alphabets");
  for (std::size_t x = 0; x < x_size_; ++x) {
    for (std::size_t y = 0; y < y_size_; ++y) {
      validate_row(row(x, y), tolerance, "correlation box");
    }
  }
}

bool CorrelationBox::same_alphabets(const CorrelationBox& other) const {
  return x_size_ == other.x_size_ && y_size_ == other.y_size_ && a_size_ == other.a_size_ &&
         b_size_ == other.b_size_;
}

std::span<const double> CorrelationBox::row(std::size_t x, std::size_t y) const {
  require(x < x_size_ && y < y_size_, "correlation box: input index out of range");
  return std::span<const double>(table_).subspan((x * y_size_ + y) * row_size(), row_size());
}

JointDistribution CorrelationBox::distribution(std::size_t x, std::size_t y) const {
  auto r = row(x, y);
  // Rows were validated at construction; re-validating at 1.0 only guards the shape.
  return JointDistribution(a_size_, b_size_, std::vector<double>(r.begin(), r.end()), 1.0);
}

CorrelationBox pr_box() {
  std::vector<double> table(16, 0.0);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      const std::size_t xy = x * y;
      const std::size_t base = (x * 2 + y) * 4;
      table[base + 0 * 2 + xy] = 0.5;
      table[base + 1 * 2 + (1 - xy)] = 0.5;
    }
  }
  return CorrelationBox(2, 2, 2, 2, std::move(table));
}

CorrelationBox local_box(std::span<const std::size_t> f, std::size_t a_size,
                         std::span<const std::size_t> g, std::size_t b_size) {
  require(!f.empty() && !g.empty(), "local_box: empty input alphabet");
  for (auto a : f) require(a < a_size, "local_box: f maps outside A");
  for (auto b : g) require(b < b_size, "local_box: g maps outside B");
  const std::size_t row_size = a_size * b_size;
  std::vector<double> table(f.size() * g.size() * row_size, 0.0);
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (std::size_t y = 0; y < g.size(); ++y) {
      table[(x * g.size() + y) * row_size + f[x] * b_size + g[y]] = 1.0;
    }
  }
  return CorrelationBox(f.size(), g.size(), a_size, b_size, std::move(table));
}

CorrelationBox mix(std::span<const CorrelationBox> boxes, std::span<const double> weights) {
  require(!boxes.empty(), "mix: no boxes");
  require(boxes.size() == weights.size(), "mix: one weight per box required");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "mix: weights must be nonnegative");
    total += w;
  }
  require(std::abs(total - 1.0) <= kNormalizationTolerance, "mix: weights must sum to 1");
  const auto& first = boxes.front();
  std::vector<double> table(first.table().size(), 0.0);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    require(boxes[i].same_alphabets(first), "mix: alphabet mismatch");
    auto t = boxes[i].table();
    for (std::size_t e = 0; e < table.size(); ++e) table[e] += weights[i] * t[e];
  }
  return CorrelationBox(first.x_size(), first.y_size(), first.a_size(), first.b_size(),
                        std::move(table));
}

double prob(const CorrelationBox& box, std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
  require(a < box.a_size() && b < box.b_size(), "prob: output index out of range");
  return box.row(x, y)[a * box.b_size() + b];
}

std::pair<std::size_t, std::size_t> sample(const CorrelationBox& box, std::size_t x,
                                           std::size_t y, std::mt19937_64& rng) {
  auto r = box.row(x, y);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] <= 0.0) continue;
    last_nonzero = i;
    acc += r[i];
    if (u < acc) return {i / box.b_size(), i % box.b_size()};
  }
  // Rounding left u above the accumulated mass; fall back to the last supported outcome.
  return {last_nonzero / box.b_size(), last_nonzero % box.b_size()};
}

double tv_closeness(const CorrelationBox& lhs, const CorrelationBox& rhs) {
  require(lhs.same_alphabets(rhs), "tv_closeness: alphabet mismatch");
  double worst = 0.0;
  for (std::size_t x = 0; x < lhs.x_size(); ++x) {
    for (std::size_t y = 0; y < lhs.y_size(); ++y) {
      auto p = lhs.row(x, y);
      auto q = rhs.row(x, y);
      double sum = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
      worst = std::max(worst, 0.5 * sum);
    }
  }
  return worst;
}

std::vector<double> marginal_a(const CorrelationBox& box, std::size_t x, std::size_t y) {
  auto r = box.row(x, y);
  std::vector<double> out(box.a_size(), 0.0);
  for (std::size_t a = 0; a < box.a_size(); ++a) {
    for (std::size_t b = 0; b < box.b_size(); ++b) out[a] += r[a * box.b_size() + b];
  }
  return out;
}

std::vector<double> marginal_b(const CorrelationBox& box, std::size_t x, std::size_t y) {
  auto r = box.row(x, y);
  std::vector<double> out(box.b_size(), 0.0);
  for (std::size_t a = 0; a < box.a_size(); ++a) {
    for (std::size_t b = 0; b < box.b_size(); ++b) out[b] += r[a * box.b_size() + b];
  }
  return out;
}

double signaling_defect(const CorrelationBox& box) {
  double worst = 0.0;
  for (std::size_t x = 0; x < box.x_size(); ++x) {
    const auto reference = marginal_a(box, x, 0);
    for (std::size_t y = 1; y < box.y_size(); ++y) {
      const auto m = marginal_a(box, x, y);
      for (std::size_t a = 0; a < m.size(); ++a) worst = std::max(worst, std::abs(m[a] - reference[a]));
    }
  }
  for (std::size_t y = 0; y < box.y_size(); ++y) {
    const auto reference = marginal_b(box, 0, y);
    for (std::size_t x = 1; x < box.x_size(); ++x) {
      const auto m = marginal_b(box, x, y);
      for (std::size_t b = 0; b < m.size(); ++b) worst = std::max(worst, std::abs(m[b] - reference[b]));
    }
  }
  return worst;
}

bool is_nonsignaling(const CorrelationBox& box, double tolerance) {
  return signaling_defect(box) <= tolerance;
}

CorrelationBox restrict_box(const CorrelationBox& box, std::size_t x_offset, std::size_t x_count,
                            std::size_t y_offset, std::size_t y_count, std::size_t a_offset,
                            std::size_t a_count, std::size_t b_offset, std::size_t b_count) {
  require(x_offset + x_count <= box.x_size() && y_offset + y_count <= box.y_size() &&
              a_offset + a_count <= box.a_size() && b_offset + b_count <= box.b_size(),
          "restrict_box: range exceeds alphabet");
  std::vector<double> table;
  table.reserve(x_count * y_count * a_count * b_count);
  for (std::size_t x = 0; x < x_count; ++x) {
    for (std::size_t y = 0; y < y_count; ++y) {
      auto r = box.row(x_offset + x, y_offset + y);
      for (std::size_t a = 0; a < a_count; ++a) {
        for (std::size_t b = 0; b < b_count; ++b) {
          table.push_back(r[(a_offset + a) * box.b_size() + b_offset + b]);
        }
      }
    }
  }
  return CorrelationBox(x_count, y_count, a_count, b_count, std::move(table));
}

}  // namespace nbl
