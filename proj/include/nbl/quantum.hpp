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
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "nbl/boxes.hpp"

namespace nbl {

using Complex = std::complex<double>;
using QubitState = Eigen::Vector2cd;

inline constexpr double kUnitaryTolerance = 1e-10;

/// A 2x2 unitary, checked on construction (U^dagger U = I entrywise within 1e-10).
class Unitary2 {
 public:
  explicit Unitary2(const Eigen::Matrix2cd& matrix, double tolerance = kUnitaryTolerance);

  static Unitary2 identity();
  static Unitary2 bit_flip();

  const Eigen::Matrix2cd& matrix() const { return matrix_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

  Unitary2 inverse() const;
  Complex determinant() const { return matrix_.determinant(); }

  /// Largest entrywise deviation of U^dagger U from the identity.
  double unitarity_defect() const;

  friend Unitary2 operator*(const Unitary2& lhs, const Unitary2& rhs);

 private:
  struct Unchecked {};
  Unitary2(const Eigen::Matrix2cd& matrix, Unchecked) : matrix_(matrix) {}

  Eigen::Matrix2cd matrix_;
};

/// Pure two-qubit state over |00>, |01>, |10>, |11> (first qubit is Alice's).
class TwoQubitState {
 public:
  explicit TwoQubitState(const Eigen::Vector4cd& amplitudes, double tolerance = kUnitaryTolerance);

  /// (|00> + |11>) / sqrt(2), the state the BELL class is defined over.
  static TwoQubitState phi_plus();
  /// (|01> - |10>) / sqrt(2).
  static TwoQubitState singlet();

  const Eigen::Vector4cd& amplitudes() const { return amplitudes_; }

 private:
  Eigen::Vector4cd amplitudes_;
};

/// The fixed local unitary B on Bob's qubit taking phi_plus to the singlet:
/// (I (x) B)|phi+> = |singlet>.
Unitary2 singlet_from_phi_plus();

/// Unit vector in R^3. Convention: |0> -> +z, |1> -> -z, |+> -> +x, |+i> -> +y.
class BlochVector {
 public:
  explicit BlochVector(const Eigen::Vector3d& v, double tolerance = kUnitaryTolerance);
  BlochVector(double x, double y, double z) : BlochVector(Eigen::Vector3d(x, y, z)) {}

  /// Normalizes a nonzero vector onto the sphere.
  static BlochVector normalized(const Eigen::Vector3d& v);

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Eigen::Vector3d& vector() const { return v_; }

  double dot(const BlochVector& other) const { return v_.dot(other.v_); }
  double distance(const BlochVector& other) const { return (v_ - other.v_).norm(); }
  BlochVector operator-() const { return BlochVector(Eigen::Vector3d(-v_)); }

 private:
  Eigen::Vector3d v_;
};

BlochVector bloch_of(const QubitState& state);

/// A normalized pure state whose Bloch vector is `c`.
QubitState qubit_for_point(const BlochVector& c);

/// A unitary U with bloch_of(U^{-1}|1>) == c. The global phase is fixed so that
/// U(0, 0) is real and nonnegative.
Unitary2 unitary_for_point(const BlochVector& c);

/// The Bloch vector of U^{-1}|1>; the direction a party "measures along" in the
/// sphere-discretization reduction.
BlochVector measured_direction(const Unitary2& u);

/// Pr[(s, t)] = |<st| U (x) V |state>|^2, indexed s * 2 + t.
std::array<double, 4> measurement_distribution(const Unitary2& u, const Unitary2& v,
                                               const TwoQubitState& state);

/// One party's side of a BELL witness for a single input symbol: apply `unitary`,
/// measure in the computational basis, report relabel[bit].
struct LocalMeasurement {
  Unitary2 unitary;
  std::array<std::size_t, 2> relabel{0, 1};
};

/// Constructive witness of membership in BELL (before convex mixing): one local
/// measurement per input symbol on each side, with output alphabets A and B.
///
/// Postprocessing may depend on the input symbol. The common case of a single
/// f, g shared by all inputs is built with `BellBoxSpec::uniform`.
struct BellBoxSpec {
  std::vector<LocalMeasurement> alice;
  std::vector<LocalMeasurement> bob;
  std::size_t a_size = 2;
  std::size_t b_size = 2;

  static BellBoxSpec uniform(const std::vector<Unitary2>& us, const std::vector<Unitary2>& vs,
                             std::array<std::size_t, 2> f = {0, 1}, std::size_t a_size = 2,
                             std::array<std::size_t, 2> g = {0, 1}, std::size_t b_size = 2);

  std::size_t x_size() const { return alice.size(); }
  std::size_t y_size() const { return bob.size(); }
};

CorrelationBox bell_box(const BellBoxSpec& spec, const TwoQubitState& state);

/// Pr[a = b] for singlet measurements along Bloch directions x and y: 1/2 - 1/2 x.y.
double singlet_prob_equal(const BlochVector& x, const BlochVector& y);

/// Exact outcome distribution of measuring (U (x) V)|singlet> in the computational basis.
JointDistribution singlet_measure_box(const Unitary2& u, const Unitary2& v);

/// 1 - |<singlet| V (x) V |singlet>|; zero for every unitary V.
double singlet_invariance_defect(const Unitary2& v);

/// Haar-random 2x2 unitary: Gram-Schmidt on two standard complex Gaussian columns
/// (R has a real positive diagonal).
Unitary2 random_unitary(std::mt19937_64& rng);

/// Direct sum of two BELL witnesses over disjoint unions of all four alphabets.
/// Inputs [0, |X1|) and outputs [0, |A1|) belong to spec1; spec2 is offset by |X1|, |A1|
/// (likewise for Bob).
BellBoxSpec direct_sum_bell(const BellBoxSpec& spec1, const BellBoxSpec& spec2);

}  // namespace nbl
