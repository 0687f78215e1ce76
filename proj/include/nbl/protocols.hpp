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
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "nbl/boxes.hpp"

namespace nbl {

/// Refuse exhaustive protocol enumeration beyond this many protocols.
inline constexpr std::uint64_t kEnumerationCap = 100'000'000ULL;
/// Refuse induced-box computation when (|A2| * |B2|)^k exceeds this many response paths.
inline constexpr std::uint64_t kResponsePathCap = 1ULL << 24;

/// Alphabets of a k-query reduction: the simulated (outer) box X1 x Y1 -> A1 x B1
/// and the queried (target) box X2 x Y2 -> A2 x B2.
struct ProtocolShape {
  std::size_t x1 = 2, y1 = 2, a1 = 2, b1 = 2;
  std::size_t x2 = 2, y2 = 2, a2 = 2, b2 = 2;
  std::size_t k = 0;

  /// Binary outer alphabets against the given target.
  static ProtocolShape binary_against(const CorrelationBox& target, std::size_t k);

  bool matches_target(const CorrelationBox& target) const {
    return x2 == target.x_size() && y2 == target.y_size() && a2 == target.a_size() &&
           b2 == target.b_size();
  }
  friend bool operator==(const ProtocolShape&, const ProtocolShape&) = default;
};

/// A deterministic, adaptive k-query protocol.
///
/// Table layout. The responses seen so far form a prefix code, a base-|A2| integer
/// with the most recent response least significant (code' = code * |A2| + a_i);
/// the empty prefix is 0. Query map i (0-based) has x1 * |A2|^i entries indexed
/// x * |A2|^i + code and valued in X2. The output map s has x1 * |A2|^k entries
/// valued in A1. Bob's maps mirror Alice's with y1, B2, Y2, B1.
class DeterministicProtocol {
 public:
  DeterministicProtocol(ProtocolShape shape, std::vector<std::vector<std::size_t>> alice_queries,
                        std::vector<std::vector<std::size_t>> bob_queries,
                        std::vector<std::size_t> alice_output, std::vector<std::size_t> bob_output);

  const ProtocolShape& shape() const { return shape_; }
  std::size_t k() const { return shape_.k; }

  const std::vector<std::vector<std::size_t>>& alice_queries() const { return q_maps_; }
  const std::vector<std::vector<std::size_t>>& bob_queries() const { return r_maps_; }
  const std::vector<std::size_t>& alice_output() const { return s_map_; }
  const std::vector<std::size_t>& bob_output() const { return t_map_; }

  friend bool operator==(const DeterministicProtocol&, const DeterministicProtocol&) = default;

 private:
  friend class ProtocolEnumerator;
  DeterministicProtocol() = default;

  ProtocolShape shape_;
  std::vector<std::vector<std::size_t>> q_maps_;
  std::vector<std::vector<std::size_t>> r_maps_;
  std::vector<std::size_t> s_map_;
  std::vector<std::size_t> t_map_;
};

/// k = 0: outputs f[x], g[y] with no queries.
DeterministicProtocol local_protocol(const ProtocolShape& shape, std::vector<std::size_t> f,
                                     std::vector<std::size_t> g);

/// k = 1 protocol querying the target on the parties' own inputs and echoing the
/// responses. Requires X1 = X2, Y1 = Y2, A1 = A2, B1 = B2.
DeterministicProtocol pass_through_protocol(const CorrelationBox& target);

/// The same protocol with one extra, ignored query appended (k -> k + 1).
DeterministicProtocol pad_with_query(const DeterministicProtocol& protocol);

/// Uniformly random deterministic protocol of the given shape.
DeterministicProtocol random_protocol(const ProtocolShape& shape, std::mt19937_64& rng);

/// Shared randomness over deterministic protocols of one shape.
class RandomizedProtocol {
 public:
  RandomizedProtocol(std::vector<DeterministicProtocol> protocols, std::vector<double> weights);

  const std::vector<DeterministicProtocol>& protocols() const { return protocols_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<DeterministicProtocol> protocols_;
  std::vector<double> weights_;
};

/// Exact box simulated by `protocol` against `target`: sums the product weights
/// over every joint response path (a_1, b_1), ..., (a_k, b_k).
CorrelationBox induced_box(const DeterministicProtocol& protocol, const CorrelationBox& target);
CorrelationBox induced_box(const RandomizedProtocol& protocol, const CorrelationBox& target);

struct ReductionCheck {
  bool within = false;
  double tv = 0.0;
};

/// Is the box simulated by `protocol` epsilon-close (max-per-input TV) to `source`?
ReductionCheck check_reduction(const DeterministicProtocol& protocol, const CorrelationBox& target,
                               const CorrelationBox& source, double epsilon);
ReductionCheck check_reduction(const RandomizedProtocol& protocol, const CorrelationBox& target,
                               const CorrelationBox& source, double epsilon);

/// Number of deterministic protocols of the given shape, or nullopt on 64-bit overflow.
std::optional<std::uint64_t> protocol_count(const ProtocolShape& shape);

/// (2|X|)^{2|A|^k} (2|Y|)^{2|B|^k} for target alphabets X, Y, A, B, as a natural log.
double log_counting_bound(std::size_t x, std::size_t y, std::size_t a, std::size_t b, std::size_t k);
/// Same bound as a double (inf once it leaves the double range).
double counting_bound(std::size_t x, std::size_t y, std::size_t a, std::size_t b, std::size_t k);

/// Enumerates every deterministic protocol of a shape exactly once, in index order.
///
/// A protocol's index is a mixed-radix number whose digits are the map entries in
/// the order q_1..q_k, r_1..r_k, s, t (each map in table order), first digit least
/// significant. Index ranges are independent, so enumeration partitions freely.
class ProtocolEnumerator {
 public:
  explicit ProtocolEnumerator(const ProtocolShape& shape, std::uint64_t cap = kEnumerationCap);

  std::uint64_t size() const { return count_; }
  DeterministicProtocol at(std::uint64_t index) const;

  /// Calls `visit` for indices [begin, end) in order. The protocol reference is
  /// only valid during the call.
  void for_each(std::uint64_t begin, std::uint64_t end,
                const std::function<void(std::uint64_t, const DeterministicProtocol&)>& visit) const;

 private:
  struct Digit {
    int map;  // 0..k-1 alice query, k..2k-1 bob query, 2k alice output, 2k+1 bob output
    std::size_t entry;
    std::size_t radix;
  };

  std::size_t& slot(DeterministicProtocol& protocol, const Digit& digit) const;
  DeterministicProtocol blank() const;

  ProtocolShape shape_;
  std::vector<Digit> digits_;
  std::uint64_t count_ = 0;
};

/// Win probability of a deterministic protocol in CHSH[p, 1/2] as a function of p.
struct AffineFunction {
  double intercept = 0.0;
  double slope = 0.0;

  double operator()(double p) const { return intercept + slope * p; }
  friend bool operator==(const AffineFunction&, const AffineFunction&) = default;
};

/// l(p) = (1-p)/2 P00 + p/2 P10 + (1-p)/2 P01 + p/2 P11 with P_xy = Pr[a xor b = xy]
/// in the induced box. Requires binary outer alphabets.
AffineFunction affine_of(const DeterministicProtocol& protocol, const CorrelationBox& target);

inline constexpr double kAffineDedupTolerance = 1e-12;

struct FamilyOptions {
  /// Union over 0..k queries instead of exactly k.
  bool up_to_k = false;
  std::uint64_t cap = kEnumerationCap;
  /// 0 means "use default_thread_count()".
  unsigned threads = 0;
};

/// {affine_of(P, target) : P deterministic k-query with binary outer alphabets},
/// sorted by (intercept, slope) and deduplicated within kAffineDedupTolerance.
std::vector<AffineFunction> affine_family(const CorrelationBox& target, std::size_t k,
                                          const FamilyOptions& options = {});

/// Sort + tolerant dedup, exposed for merging independently built families.
std::vector<AffineFunction> dedup_affine(std::vector<AffineFunction> lines,
                                         double tolerance = kAffineDedupTolerance);

}  // namespace nbl
