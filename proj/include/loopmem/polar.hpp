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

/**
 * @file polar.hpp
 * @brief Exact 2x2 polarization algebra in the H/V basis.
 *
 * Conventions used throughout the library:
 *  - Basis order is (|H>, |V>).
 *  - |D> = (|H> + |V>)/sqrt2, |A> = (|H> - |V>)/sqrt2,
 *    |R> = (|H> - i|V>)/sqrt2, |L> = (|H> + i|V>)/sqrt2.
 *  - A waveplate of retardance G with its fast axis at angle t from H is
 *    R(-t) diag(1, e^{iG}) R(t), with R(t) = [[cos t, sin t], [-sin t, cos t]].
 *  - A "rotator" of angle t is cos(t) I - i sin(t) X: a rotation of the
 *    Poincare sphere by 2t about the D/A axis. This is what a Pockels cell
 *    with its axes at 45 degrees applies; t = pi/2 is a bit flip up to phase.
 *
 * Loss is carried by the trace of a DensityMatrix, so a state that went
 * through a lossy element has trace < 1 and the trace is its survival
 * probability.
 */

#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace loopmem {

using complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

/// Normalized pure polarization state alpha|H> + beta|V>, stored in
/// canonical global phase (first nonzero amplitude real and >= 0).
class PureState {
 public:
  PureState() : alpha_(1.0), beta_(0.0) {}

  complex alpha() const { return alpha_; }
  complex beta() const { return beta_; }
  Vector2c ket() const { return Vector2c(alpha_, beta_); }
  Matrix2c projector() const;

  static PureState H();
  static PureState V();
  static PureState D();
  static PureState A();
  static PureState R();
  static PureState L();
  /// Linear polarization at angle theta from H (polarizer analyzer state).
  static PureState linear(double theta);

  /// Looks up H, V, D, A, R, L by (case-sensitive) name.
  static PureState named(const std::string &name);

 private:
  friend PureState make_pure(complex alpha, complex beta);
  PureState(complex a, complex b) : alpha_(a), beta_(b) {}

  complex alpha_;
  complex beta_;
};

/// Normalizes (alpha, beta) and applies the canonical global phase.
/// Throws InvalidStateError for the zero vector or non-finite input.
PureState make_pure(complex alpha, complex beta);

/// Equality up to global phase.
bool approx_equal(const PureState &a, const PureState &b,
                  double tol = kAlgebraTol);

/// 2x2 Hermitian PSD operator with trace in [0, 1].
class DensityMatrix {
 public:
  DensityMatrix() : m_(Matrix2c::Zero()) {}

  /// Validating constructor; throws InvalidStateError when `m` is not
  /// Hermitian, has a negative eigenvalue or trace above one.
  explicit DensityMatrix(const Matrix2c &m);

  /// Skips validation. Only for values produced by exact algebra.
  static DensityMatrix trusted(const Matrix2c &m);

  static DensityMatrix pure(const PureState &psi, double weight = 1.0);
  static DensityMatrix maximally_mixed(double weight = 1.0);

  const Matrix2c &matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  /// m / trace; throws UndefinedStateError when trace is zero.
  DensityMatrix conditional() const;
  /// Eigenvalues in ascending order.
  Eigen::Vector2d eigenvalues() const;
  /// tr(rho^2) of the conditional state.
  double purity() const;

 private:
  struct Trusted {};
  DensityMatrix(const Matrix2c &m, Trusted) : m_(m) {}
  Matrix2c m_;
};

/// Passive (possibly lossy) Jones operator; singular values are <= 1.
class JonesOperator {
 public:
  JonesOperator() : j_(Matrix2c::Identity()), unitary_(true) {}

  /// Throws GainError when the largest singular value exceeds 1.
  explicit JonesOperator(const Matrix2c &j);

  const Matrix2c &matrix() const { return j_; }
  bool unitary() const { return unitary_; }
  double max_singular_value() const;

  /// Composition: (a * b) applies b first.
  friend JonesOperator operator*(const JonesOperator &a,
                                 const JonesOperator &b) {
    return JonesOperator(a.j_ * b.j_);
  }

  /// Scales the operator by sqrt(t), t in [0, 1].
  JonesOperator attenuated(double t) const;

 private:
  Matrix2c j_;
  bool unitary_;
};

/// Kraus-style update rho -> K rho K^dagger.
DensityMatrix apply(const DensityMatrix &rho, const JonesOperator &k);

/// <psi| rho/tr(rho) |psi>. Throws UndefinedStateError when tr(rho) = 0.
double fidelity(const DensityMatrix &rho, const PureState &target);

/// True when a and b are equal as operators up to a global phase.
bool equal_up_to_phase(const Matrix2c &a, const Matrix2c &b,
                       double tol = kAlgebraTol);

// Catalog of elementary Jones operators.
namespace jones {

JonesOperator identity();
JonesOperator pauli_x();
JonesOperator rotator(double theta);
JonesOperator half_waveplate(double theta);
JonesOperator quarter_waveplate(double theta);
JonesOperator waveplate(double retardance, double theta);
JonesOperator birefringent_phase(double phi);
/// Power transmissions per axis; throws GainError when either exceeds 1.
JonesOperator attenuator(double t_h, double t_v);

}  // namespace jones

enum class ElementKind {
  kIdentity,
  kPauliX,
  kHalfWaveplate,
  kQuarterWaveplate,
  kRotator,
  kBirefringentPhase,
  kAttenuator,
};

struct ElementParams {
  double angle = 0.0;  // radians: waveplate axis, rotator angle or phase
  double t_h = 1.0;
  double t_v = 1.0;
};

/// Table-driven front end to the jones:: constructors.
JonesOperator jones_element(ElementKind kind, const ElementParams &params);

}  // namespace loopmem
