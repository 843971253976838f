// Copyright 2026 The loopmem Authors
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

#include "loopmem/polar.hpp"

#include <algorithm>
#include <cmath>

#include "loopmem/errors.hpp"

namespace loopmem {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const complex kI(0.0, 1.0);

Matrix2c hermitize(const Matrix2c &m) { return 0.5 * (m + m.adjoint()); }

// Ascending eigenvalues of a Hermitian 2x2 matrix, closed form.
Eigen::Vector2d hermitian_eigenvalues(const Matrix2c &m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
  return Eigen::Vector2d(mean - radius, mean + radius);
}

}  // namespace

PureState make_pure(complex alpha, complex beta) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) ||
      !std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
    throw InvalidStateError("pure state amplitudes must be finite");
  }
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (norm == 0.0) throw InvalidStateError("pure state from the zero vector");
  alpha /= norm;
  beta /= norm;
  // Canonical phase: the first amplitude that is not numerically zero is
  // made real and non-negative.
  const complex lead = std::abs(alpha) > kAlgebraTol ? alpha : beta;
  const complex phase = std::conj(lead) / std::abs(lead);
  alpha *= phase;
  beta *= phase;
  if (std::abs(alpha) > kAlgebraTol) {
    alpha = complex(std::abs(alpha), 0.0);
  } else {
    alpha = 0.0;
    beta = complex(std::abs(beta), 0.0);
  }
  return PureState(alpha, beta);
}

Matrix2c PureState::projector() const {
  const Vector2c k = ket();
  return k * k.adjoint();
}

PureState PureState::H() { return make_pure(1.0, 0.0); }
PureState PureState::V() { return make_pure(0.0, 1.0); }
PureState PureState::D() { return make_pure(kInvSqrt2, kInvSqrt2); }
PureState PureState::A() { return make_pure(kInvSqrt2, -kInvSqrt2); }
PureState PureState::R() { return make_pure(kInvSqrt2, -kI * kInvSqrt2); }
PureState PureState::L() { return make_pure(kInvSqrt2, kI * kInvSqrt2); }

PureState PureState::linear(double theta) {
  return make_pure(std::cos(theta), std::sin(theta));
}

PureState PureState::named(const std::string &name) {
  if (name == "H") return H();
  if (name == "V") return V();
  if (name == "D") return D();
  if (name == "A") return A();
  if (name == "R") return R();
  if (name == "L") return L();
  throw InvalidStateError("unknown named state '" + name + "'");
}

bool approx_equal(const PureState &a, const PureState &b, double tol) {
  // |<a|b>| = 1 is the phase-free test; the canonical amplitudes give the
  // same answer but this form is robust near the canonicalization cutoff.
  const complex overlap = a.ket().dot(b.ket());
  return std::abs(1.0 - std::abs(overlap)) <= tol;
}

DensityMatrix::DensityMatrix(const Matrix2c &m) : m_(m) {
  if (!m.allFinite()) throw InvalidStateError("density matrix is not finite");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw InvalidStateError("density matrix is not Hermitian");
  }
  m_ = hermitize(m);
  const Eigen::Vector2d ev = hermitian_eigenvalues(m_);
  if (ev(0) < -kAlgebraTol) {
    throw InvalidStateError("density matrix has a negative eigenvalue");
  }
  if (trace() > 1.0 + kAlgebraTol) {
    throw InvalidStateError("density matrix trace exceeds one");
  }
}

DensityMatrix DensityMatrix::trusted(const Matrix2c &m) {
  return DensityMatrix(m, Trusted{});
}

DensityMatrix DensityMatrix::pure(const PureState &psi, double weight) {
  if (weight < 0.0 || weight > 1.0 + kAlgebraTol) {
    throw InvalidStateError("state weight must lie in [0, 1]");
  }
  return DensityMatrix(weight * psi.projector(), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(double weight) {
  if (weight < 0.0 || weight > 1.0 + kAlgebraTol) {
    throw InvalidStateError("state weight must lie in [0, 1]");
  }
  return DensityMatrix(0.5 * weight * Matrix2c::Identity(), Trusted{});
}

DensityMatrix DensityMatrix::conditional() const {
  const double t = trace();
  if (!(t > 0.0)) throw UndefinedStateError("state has zero trace");
  return DensityMatrix(m_ / t, Trusted{});
}

Eigen::Vector2d DensityMatrix::eigenvalues() const {
  return hermitian_eigenvalues(m_);
}

double DensityMatrix::purity() const {
  const Matrix2c c = conditional().matrix();
  return (c * c).trace().real();
}

JonesOperator::JonesOperator(const Matrix2c &j) : j_(j) {
  if (!j.allFinite()) throw GainError("Jones operator is not finite");
  if (max_singular_value() > 1.0 + kAlgebraTol) {
    throw GainError("Jones operator has gain (singular value > 1)");
  }
  unitary_ = (j.adjoint() * j - Matrix2c::Identity()).cwiseAbs().maxCoeff() <=
             kUnitaryTol;
}

double JonesOperator::max_singular_value() const {
  // sqrt of the largest eigenvalue of j^dagger j.
  const Eigen::Vector2d ev = hermitian_eigenvalues(j_.adjoint() * j_);
  return std::sqrt(std::max(0.0, ev(1)));
}

JonesOperator JonesOperator::attenuated(double t) const {
  if (t < 0.0) throw InvalidArgumentError("negative transmission");
  if (t > 1.0) throw GainError("transmission exceeds one");
  return JonesOperator(std::sqrt(t) * j_);
}

DensityMatrix apply(const DensityMatrix &rho, const JonesOperator &k) {
  const Matrix2c &j = k.matrix();
  return DensityMatrix::trusted(hermitize(j * rho.matrix() * j.adjoint()));
}

double fidelity(const DensityMatrix &rho, const PureState &target) {
  const Matrix2c c = rho.conditional().matrix();
  const Vector2c psi = target.ket();
  const double f = psi.dot(c * psi).real();
  return std::clamp(f, 0.0, 1.0);
}

bool equal_up_to_phase(const Matrix2c &a, const Matrix2c &b, double tol) {
  // Align phases on the largest entry of b.
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) <= tol) return a.cwiseAbs().maxCoeff() <= tol;
  if (std::abs(a(r, c)) <= tol) return false;
  const complex phase = (a(r, c) / std::abs(a(r, c))) /
                        (b(r, c) / std::abs(b(r, c)));
  return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

namespace jones {

namespace {

Matrix2c rotation(double t) {
  Matrix2c r;
  r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return r;
}

}  // namespace

JonesOperator identity() { return JonesOperator(Matrix2c::Identity()); }

JonesOperator pauli_x() {
  Matrix2c x;
  x << 0.0, 1.0, 1.0, 0.0;
  return JonesOperator(x);
}

JonesOperator rotator(double theta) {
  Matrix2c j;
  j << std::cos(theta), -kI * std::sin(theta), -kI * std::sin(theta),
      std::cos(theta);
  return JonesOperator(j);
}

JonesOperator waveplate(double retardance, double theta) {
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::polar(1.0, retardance);
  return JonesOperator(rotation(-theta) * d * rotation(theta));
}

JonesOperator half_waveplate(double theta) { return waveplate(M_PI, theta); }

JonesOperator quarter_waveplate(double theta) {
  return waveplate(M_PI / 2.0, theta);
}

JonesOperator birefringent_phase(double phi) {
  Matrix2c j = Matrix2c::Zero();
  j(0, 0) = 1.0;
  j(1, 1) = std::polar(1.0, phi);
  return JonesOperator(j);
}

JonesOperator attenuator(double t_h, double t_v) {
  if (t_h < 0.0 || t_v < 0.0) {
    throw InvalidArgumentError("negative transmission");
  }
  if (t_h > 1.0 || t_v > 1.0) throw GainError("transmission exceeds one");
  Matrix2c j = Matrix2c::Zero();
  j(0, 0) = std::sqrt(t_h);
  j(1, 1) = std::sqrt(t_v);
  return JonesOperator(j);
}

}  // namespace jones

JonesOperator jones_element(ElementKind kind, const ElementParams &p) {
  switch (kind) {
    case ElementKind::kIdentity:
      return jones::identity();
    case ElementKind::kPauliX:
      return jones::pauli_x();
    case ElementKind::kHalfWaveplate:
      return jones::half_waveplate(p.angle);
    case ElementKind::kQuarterWaveplate:
      return jones::quarter_waveplate(p.angle);
    case ElementKind::kRotator:
      return jones::rotator(p.angle);
    case ElementKind::kBirefringentPhase:
      return jones::birefringent_phase(p.angle);
    case ElementKind::kAttenuator:
      return jones::attenuator(p.t_h, p.t_v);
  }
  throw InvalidArgumentError("unknown element kind");
}

}  // namespace loopmem
