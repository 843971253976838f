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

#include <cmath>

#include <gtest/gtest.h>

#include "loopmem/errors.hpp"
#include "loopmem/polar.hpp"
#include "test_support.hpp"

namespace loopmem {
namespace {

using testing::Gen;

const complex kI(0.0, 1.0);

void expect_matrix_near(const Matrix2c &a, const Matrix2c &b, double tol) {
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << "a=\n" << a << "\nb=\n" << b;
}

TEST(PureStateTest, BasisFromAmplitudes) {
  EXPECT_TRUE(approx_equal(make_pure(1.0, 0.0), PureState::H()));
  EXPECT_DOUBLE_EQ(make_pure(1.0, 0.0).alpha().real(), 1.0);
}

TEST(PureStateTest, EqualAmplitudesGiveDiagonal) {
  const PureState d = make_pure(1.0, 1.0);
  EXPECT_NEAR(d.alpha().real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.beta().real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(approx_equal(d, PureState::D()));
}

TEST(PureStateTest, NormalizesAndCanonicalizesRightCircular) {
  const PureState r = make_pure(2.0, complex(0.0, -2.0));
  EXPECT_NEAR(r.alpha().real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.alpha().imag(), 0.0, 1e-15);
  EXPECT_NEAR(r.beta().imag(), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(approx_equal(r, PureState::R()));
}

TEST(PureStateTest, GlobalPhaseIsCanonicalized) {
  const complex phase = std::polar(1.0, 0.7);
  const PureState a = make_pure(phase * 0.6, phase * complex(0.0, 0.8));
  EXPECT_NEAR(a.alpha().imag(), 0.0, 1e-15);
  EXPECT_GE(a.alpha().real(), 0.0);
  const PureState v = make_pure(0.0, kI);
  EXPECT_NEAR(v.beta().real(), 1.0, 1e-15);
}

TEST(PureStateTest, RejectsZeroAndNonFinite) {
  EXPECT_THROW(make_pure(0.0, 0.0), InvalidStateError);
  EXPECT_THROW(make_pure(std::nan(""), 1.0), InvalidStateError);
  EXPECT_THROW(PureState::named("Q"), InvalidStateError);
}

TEST(PureStateTest, NormIsOneForRandomAmplitudes) {
  Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const PureState p = g.pure();
    EXPECT_NEAR(std::norm(p.alpha()) + std::norm(p.beta()), 1.0, 1e-12);
  }
}

TEST(DensityMatrixTest, ValidationRejectsUnphysical) {
  Matrix2c m;
  m << 0.5, 0.1, 0.2, 0.5;  // not Hermitian
  EXPECT_THROW(DensityMatrix{m}, InvalidStateError);
  m << 1.2, 0.0, 0.0, 0.0;  // trace above one
  EXPECT_THROW(DensityMatrix{m}, InvalidStateError);
  m << 0.5, 0.0, 0.0, -0.1;  // negative eigenvalue
  EXPECT_THROW(DensityMatrix{m}, InvalidStateError);
  EXPECT_THROW(DensityMatrix().conditional(), UndefinedStateError);
}

TEST(DensityMatrixTest, ConditionalRenormalizes) {
  const DensityMatrix rho = DensityMatrix::pure(PureState::D(), 0.25);
  EXPECT_NEAR(rho.trace(), 0.25, 1e-15);
  EXPECT_NEAR(rho.conditional().trace(), 1.0, 1e-15);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
  EXPECT_NEAR(DensityMatrix::maximally_mixed().purity(), 0.5, 1e-12);
}

TEST(JonesOperatorTest, GainIsRejected) {
  Matrix2c j = Matrix2c::Identity() * 1.01;
  EXPECT_THROW(JonesOperator{j}, GainError);
  EXPECT_THROW(jones::attenuator(1.2, 1.0), GainError);
  EXPECT_TRUE(jones::pauli_x().unitary());
  EXPECT_FALSE(jones::attenuator(0.5, 0.5).unitary());
}

TEST(ApplyTest, BitFlipTakesHToV) {
  const DensityMatrix out = apply(DensityMatrix::pure(PureState::H()), jones::pauli_x());
  expect_matrix_near(out.matrix(), PureState::V().projector(), 1e-15);
}

TEST(ApplyTest, NeutralAttenuatorHalvesTrace) {
  const DensityMatrix out =
      apply(DensityMatrix::pure(PureState::D()), jones::attenuator(0.5, 0.5));
  expect_matrix_near(out.matrix(), 0.5 * PureState::D().projector(), 1e-15);
}

TEST(ApplyTest, HalfWaveRetardanceTakesDToA) {
  const DensityMatrix out = apply(DensityMatrix::pure(PureState::D()),
                                  jones::birefringent_phase(M_PI));
  expect_matrix_near(out.matrix(), PureState::A().projector(), 1e-15);
}

TEST(FidelityTest, Examples) {
  EXPECT_NEAR(fidelity(DensityMatrix::pure(PureState::R()), PureState::R()), 1.0,
              1e-15);
  EXPECT_NEAR(fidelity(DensityMatrix::pure(PureState::H()), PureState::D()), 0.5,
              1e-15);
  Gen g(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(), g.pure()), 0.5, 1e-15);
  }
}

TEST(FidelityTest, GlobalPhaseInvariance) {
  Gen g(5);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = g.density();
    const PureState psi = g.pure();
    for (double theta : {0.0, M_PI / 3.0, M_PI}) {
      const complex ph = std::polar(1.0, theta);
      const PureState rotated = make_pure(ph * psi.alpha(), ph * psi.beta());
      EXPECT_NEAR(fidelity(rho, rotated), fidelity(rho, psi), 1e-12);
    }
  }
}

TEST(JonesElementTest, RotatorAtQuarterTurnIsBitFlip) {
  EXPECT_TRUE(equal_up_to_phase(
      jones_element(ElementKind::kRotator, {M_PI / 2.0}).matrix(),
      jones::pauli_x().matrix()));
}

TEST(JonesElementTest, UnitAttenuatorIsIdentity) {
  ElementParams p;
  p.t_h = 1.0;
  p.t_v = 1.0;
  expect_matrix_near(jones_element(ElementKind::kAttenuator, p).matrix(),
                     Matrix2c::Identity(), 0.0);
}

TEST(JonesElementTest, HalfWaveAtEighthTurnTakesHToD) {
  const JonesOperator hwp = jones_element(ElementKind::kHalfWaveplate, {M_PI / 8.0});
  const Vector2c out = hwp.matrix() * PureState::H().ket();
  EXPECT_TRUE(approx_equal(make_pure(out(0), out(1)), PureState::D()));
}

TEST(JonesElementTest, QuarterWaveTakesDToCircular) {
  const JonesOperator qwp = jones::quarter_waveplate(0.0);
  const Vector2c out = qwp.matrix() * PureState::D().ket();
  const PureState s = make_pure(out(0), out(1));
  EXPECT_TRUE(approx_equal(s, PureState::R()) || approx_equal(s, PureState::L()));
}

// Properties over random states and operators.

TEST(PolarPropertyTest, TraceNeverGrows) {
  Gen g(101);
  for (int i = 0; i < 500; ++i) {
    const DensityMatrix rho = g.density();
    const JonesOperator k = g.contraction();
    EXPECT_LE(apply(rho, k).trace(), rho.trace() + 1e-12);
  }
}

TEST(PolarPropertyTest, UnitaryPreservesTraceAndSpectrum) {
  Gen g(202);
  for (int i = 0; i < 500; ++i) {
    const DensityMatrix rho = g.density();
    const JonesOperator u = g.unitary();
    ASSERT_TRUE(u.unitary());
    const DensityMatrix out = apply(rho, u);
    EXPECT_NEAR(out.trace(), rho.trace(), 1e-12);
    EXPECT_LE((out.eigenvalues() - rho.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PolarPropertyTest, CompositionMatchesProduct) {
  Gen g(303);
  for (int i = 0; i < 500; ++i) {
    const DensityMatrix rho = g.density();
    const JonesOperator k1 = g.contraction();
    const JonesOperator k2 = g.contraction();
    expect_matrix_near(apply(apply(rho, k1), k2).matrix(),
                       apply(rho, k2 * k1).matrix(), 1e-12);
  }
}

TEST(PolarPropertyTest, ElementsArePassive) {
  for (double a = -M_PI; a <= M_PI; a += M_PI / 17.0) {
    for (ElementKind k : {ElementKind::kIdentity, ElementKind::kPauliX,
                          ElementKind::kHalfWaveplate, ElementKind::kQuarterWaveplate,
                          ElementKind::kRotator, ElementKind::kBirefringentPhase}) {
      const JonesOperator j = jones_element(k, {a});
      EXPECT_LE(j.max_singular_value(), 1.0 + 1e-12);
      EXPECT_TRUE(j.unitary());
    }
  }
}

}  // namespace
}  // namespace loopmem
