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
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace nbl {

inline constexpr double kNormalizationTolerance = 1e-12;

/// A probability distribution over A x B, stored row-major (index a * b_size + b).
class JointDistribution {
 public:
  JointDistribution(std::size_t a_size, std::size_t b_size, std::vector<double> probs,
                    double tolerance = kNormalizationTolerance);

  std::size_t a_size() const { return a_size_; }
  std::size_t b_size() const { return b_size_; }
  double operator()(std::size_t a, std::size_t b) const { return probs_[a * b_size_ + b]; }
  std::span<const double> probs() const { return probs_; }

  std::vector<double> marginal_a() const;
  std::vector<double> marginal_b() const;

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::size_t a_size_;
  std::size_t b_size_;
  std::vector<double> probs_;
};

/// Total variation distance, 1/2 * sum |p - q|.
double tv_distance(const JointDistribution& lhs, const JointDistribution& rhs);

/// A finite-alphabet bipartite correlation box: (x, y) -> distribution over (a, b).
///
/// The table is flat: the row for (x, y) starts at (x * y_size + y) * a_size * b_size.
/// Every row is validated on construction (nonnegative, sums to 1 within the
/// given tolerance). Instances are immutable.
class CorrelationBox {
 public:
  CorrelationBox(std::size_t x_size, std::size_t y_size, std::size_t a_size, std::size_t b_size,
                 std::vector<double> table, double tolerance = kNormalizationTolerance);

  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  std::size_t a_size() const { return a_size_; }
  std::size_t b_size() const { return b_size_; }
  std::size_t row_size() const { return a_size_ * b_size_; }

  bool is_binary() const { return x_size_ == 2 && y_size_ == 2 && a_size_ == 2 && b_size_ == 2; }
  bool same_alphabets(const CorrelationBox& other) const;

  std::span<const double> row(std::size_t x, std::size_t y) const;
  JointDistribution distribution(std::size_t x, std::size_t y) const;
  std::span<const double> table() const { return table_; }

  friend bool operator==(const CorrelationBox&, const CorrelationBox&) = default;

 private:
  std::size_t x_size_;
  std::size_t y_size_;
  std::size_t a_size_;
  std::size_t b_size_;
  std::vector<double> table_;
};

/// The Popescu-Rohrlich box: (0, xy) or (1, 1 - xy), each with probability 1/2.
CorrelationBox pr_box();

/// Deterministic box with Cor(x, y) the point mass at (f[x], g[y]).
CorrelationBox local_box(std::span<const std::size_t> f, std::size_t a_size,
                         std::span<const std::size_t> g, std::size_t b_size);

/// Entrywise convex combination. Weights must be nonnegative and sum to 1.
CorrelationBox mix(std::span<const CorrelationBox> boxes, std::span<const double> weights);

double prob(const CorrelationBox& box, std::size_t x, std::size_t y, std::size_t a, std::size_t b);

/// Draws (a, b) from Cor(x, y) by inverse-CDF on one uniform variate from `rng`.
std::pair<std::size_t, std::size_t> sample(const CorrelationBox& box, std::size_t x,
                                           std::size_t y, std::mt19937_64& rng);

/// max over (x, y) of the total variation distance between the two rows.
double tv_closeness(const CorrelationBox& lhs, const CorrelationBox& rhs);

std::vector<double> marginal_a(const CorrelationBox& box, std::size_t x, std::size_t y);
std::vector<double> marginal_b(const CorrelationBox& box, std::size_t x, std::size_t y);

/// True iff Alice's marginal does not depend on y and Bob's does not depend on x,
/// entrywise within `tolerance`.
bool is_nonsignaling(const CorrelationBox& box, double tolerance);

/// Largest entrywise signaling violation; is_nonsignaling(box, t) == (signaling_defect(box) <= t).
double signaling_defect(const CorrelationBox& box);

/// Sub-box on the given input ranges and output ranges. Each selected row must put
/// all of its mass inside the selected output ranges.
CorrelationBox restrict_box(const CorrelationBox& box, std::size_t x_offset, std::size_t x_count,
                            std::size_t y_offset, std::size_t y_count, std::size_t a_offset,
                            std::size_t a_count, std::size_t b_offset, std::size_t b_count);

}  // namespace nbl
