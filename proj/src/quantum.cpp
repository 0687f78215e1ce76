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

#include "nbl/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "nbl/error.hpp"

namespace nbl {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

Unitary2::Unitary2(const Eigen::Matrix2cd& matrix, double tolerance) : matrix_(matrix) {
  require(matrix_.allFinite(), "unitary: non-finite entry");
  require(unitarity_defect() <= tolerance, "unitary: U^dagger U deviates from the identity");
}

Unitary2 Unitary2::identity() { return Unitary2(Eigen::Matrix2cd::Identity(), Unchecked{}); }

Unitary2 Unitary2::bit_flip() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return Unitary2(m, Unchecked{});
}

Unitary2 Unitary2::inverse() const { return Unitary2(Eigen::Matrix2cd(matrix_.adjoint()), Unchecked{}); }

double Unitary2::unitarity_defect() const {
  const Eigen::Matrix2cd gram = matrix_.adjoint() * matrix_;
  return (gram - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

Unitary2 operator*(const Unitary2& lhs, const Unitary2& rhs) {
  return Unitary2(Eigen::Matrix2cd(lhs.matrix_ * rhs.matrix_), Unitary2::Unchecked{});
}

TwoQubitState::TwoQubitState(const Eigen::Vector4cd& amplitudes, double tolerance)
    : amplitudes_(amplitudes) {
  require(amplitudes_.allFinite(), "two-qubit state: non-finite amplitude");
  require(std::abs(amplitudes_.norm() - 1.0) <= tolerance, "two-qubit state: not normalized");
}

TwoQubitState TwoQubitState::phi_plus() {
  return TwoQubitState(Eigen::Vector4cd(kInvSqrt2, 0.0, 0.0, kInvSqrt2));
}

TwoQubitState TwoQubitState::singlet() {
  return TwoQubitState(Eigen::Vector4cd(0.0, kInvSqrt2, -kInvSqrt2, 0.0));
}

Unitary2 singlet_from_phi_plus() {
  Eigen::Matrix2cd m;
  m << 0.0, -1.0, 1.0, 0.0;
  return Unitary2(m);
}

BlochVector::BlochVector(const Eigen::Vector3d& v, double tolerance) : v_(v) {
  require(v_.allFinite(), "bloch vector: non-finite coordinate");
  require(std::abs(v_.norm() - 1.0) <= tolerance, "bloch vector: not a unit vector");
}

BlochVector BlochVector::normalized(const Eigen::Vector3d& v) {
  const double n = v.norm();
  require(n > 0.0 && std::isfinite(n), "bloch vector: cannot normalize the zero vector");
  return BlochVector(Eigen::Vector3d(v / n));
}

BlochVector bloch_of(const QubitState& state) {
  const double n = state.norm();
  require(n > 0.0 && std::isfinite(n), "bloch_of: zero state");
  const QubitState psi = state / n;
  const Complex cross = std::conj(psi(0)) * psi(1);
  const Eigen::Vector3d v(2.0 * cross.real(), 2.0 * cross.imag(),
                          std::norm(psi(0)) - std::norm(psi(1)));
  // Normalizing absorbs the O(eps) drift so the result satisfies the unit invariant.
  return BlochVector::normalized(v);
}

QubitState qubit_for_point(const BlochVector& c) {
  QubitState psi;
  if (c.z() >= 0.0) {
    const double s = std::sqrt(2.0 * (1.0 + c.z()));
    psi << Complex(std::sqrt((1.0 + c.z()) / 2.0), 0.0), Complex(c.x(), c.y()) / s;
  } else {
    const double s = std::sqrt(2.0 * (1.0 - c.z()));
    psi << Complex(c.x(), -c.y()) / s, Complex(std::sqrt((1.0 - c.z()) / 2.0), 0.0);
  }
  return psi.normalized();
}

Unitary2 unitary_for_point(const BlochVector& c) {
  const QubitState psi = qubit_for_point(c);
  const Complex a = psi(0);
  const Complex b = psi(1);
  // Columns of U^{-1}: an orthogonal partner, then psi (so U^{-1}|1> = psi).
  Eigen::Matrix2cd inv;
  inv << -std::conj(b), a, std::conj(a), b;
  Eigen::Matrix2cd u = inv.adjoint();
  const double mag = std::abs(u(0, 0));
  if (mag > 1e-15) {
    u *= std::conj(u(0, 0)) / mag;
    u(0, 0) = Complex(u(0, 0).real(), 0.0);
  }
  return Unitary2(u);
}

BlochVector measured_direction(const Unitary2& u) {
  return bloch_of(u.inverse().matrix().col(1));
}

std::array<double, 4> measurement_distribution(const Unitary2& u, const Unitary2& v,
                                               const TwoQubitState& state) {
  const auto& psi = state.amplitudes();
  std::array<double, 4> out{};
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      Complex amp = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) amp += u(s, i) * v(t, j) * psi(i * 2 + j);
      }
      out[s * 2 + t] = std::norm(amp);
    }
  }
  return out;
}

BellBoxSpec BellBoxSpec::uniform(const std::vector<Unitary2>& us, const std::vector<Unitary2>& vs,
                                 std::array<std::size_t, 2> f, std::size_t a_size,
                                 std::array<std::size_t, 2> g, std::size_t b_size) {
  BellBoxSpec spec;
  spec.a_size = a_size;
  spec.b_size = b_size;
  for (const auto& u : us) spec.alice.push_back({u, f});
  for (const auto& v : vs) spec.bob.push_back({v, g});
  return spec;
}

CorrelationBox bell_box(const BellBoxSpec& spec, const TwoQubitState& state) {
  require(!spec.alice.empty() && !spec.bob.empty(), "bell_box: empty input alphabet");
  for (const auto& m : spec.alice) {
    require(m.relabel[0] < spec.a_size && m.relabel[1] < spec.a_size,
            "bell_box: Alice's postprocessing maps outside A");
  }
  for (const auto& m : spec.bob) {
    require(m.relabel[0] < spec.b_size && m.relabel[1] < spec.b_size,
            "bell_box: Bob's postprocessing maps outside B");
  }
  const std::size_t row_size = spec.a_size * spec.b_size;
  std::vector<double> table(spec.x_size() * spec.y_size() * row_size, 0.0);
  for (std::size_t x = 0; x < spec.x_size(); ++x) {
    for (std::size_t y = 0; y < spec.y_size(); ++y) {
      const auto& am = spec.alice[x];
      const auto& bm = spec.bob[y];
      const auto dist = measurement_distribution(am.unitary, bm.unitary, state);
      double* row = table.data() + (x * spec.y_size() + y) * row_size;
      for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t t = 0; t < 2; ++t) {
          row[am.relabel[s] * spec.b_size + bm.relabel[t]] += dist[s * 2 + t];
        }
      }
    }
  }
  return CorrelationBox(spec.x_size(), spec.y_size(), spec.a_size, spec.b_size, std::move(table));
}

double singlet_prob_equal(const BlochVector& x, const BlochVector& y) {
  return std::clamp(0.5 - 0.5 * x.dot(y), 0.0, 1.0);
}

JointDistribution singlet_measure_box(const Unitary2& u, const Unitary2& v) {
  const auto dist = measurement_distribution(u, v, TwoQubitState::singlet());
  return JointDistribution(2, 2, std::vector<double>(dist.begin(), dist.end()));
}

double singlet_invariance_defect(const Unitary2& v) {
  const auto& psi = TwoQubitState::singlet().amplitudes();
  Complex overlap = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      Complex amp = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) amp += v(s, i) * v(t, j) * psi(i * 2 + j);
      }
      overlap += std::conj(psi(s * 2 + t)) * amp;
    }
  }
  return 1.0 - std::abs(overlap);
}

Unitary2 random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  Eigen::Matrix2cd g;
  for (int col = 0; col < 2; ++col) {
    for (int row = 0; row < 2; ++row) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(row, col) = Complex(re, im);
    }
  }
  Eigen::Vector2cd q0 = g.col(0);
  q0 /= q0.norm();
  Eigen::Vector2cd q1 = g.col(1) - q0.dot(g.col(1)) * q0;  // dot() conjugates its left operand
  q1 /= q1.norm();
  Eigen::Matrix2cd u;
  u.col(0) = q0;
  u.col(1) = q1;
  return Unitary2(u);
}

BellBoxSpec direct_sum_bell(const BellBoxSpec& spec1, const BellBoxSpec& spec2) {
  BellBoxSpec out;
  out.a_size = spec1.a_size + spec2.a_size;
  out.b_size = spec1.b_size + spec2.b_size;
  out.alice = spec1.alice;
  out.bob = spec1.bob;
  for (auto m : spec2.alice) {
    m.relabel = {m.relabel[0] + spec1.a_size, m.relabel[1] + spec1.a_size};
    out.alice.push_back(m);
  }
  for (auto m : spec2.bob) {
    m.relabel = {m.relabel[0] + spec1.b_size, m.relabel[1] + spec1.b_size};
    out.bob.push_back(m);
  }
  return out;
}

}  // namespace nbl
