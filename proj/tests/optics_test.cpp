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
#include <vector>

#include <gtest/gtest.h>

#include "loopmem/errors.hpp"
#include "loopmem/optics.hpp"
#include "test_support.hpp"

namespace loopmem {
namespace {

using testing::Gen;

DriveSchedule on_at_100() {
  DriveSchedule s;
  s.initial = DriveLevel::kOff;
  s.transitions = {{100.0, DriveLevel::kOn}};
  s.rise_time_ns = 10.0;
  return s;
}

TEST(PockelsLevelTest, LinearRamp) {
  const DriveSchedule s = on_at_100();
  EXPECT_DOUBLE_EQ(pockels_level(s, 50.0), 0.0);
  EXPECT_DOUBLE_EQ(pockels_level(s, 105.0), 0.5);
  EXPECT_DOUBLE_EQ(pockels_level(s, 200.0), 1.0);
}

TEST(PockelsLevelTest, ContinuousAndMonotoneWithinRamps) {
  DriveSchedule s = on_at_100();
  s.transitions.push_back({150.0, DriveLevel::kOff});
  double prev = pockels_level(s, 0.0);
  for (double t = 0.0; t <= 200.0; t += 0.01) {
    const double lv = pockels_level(s, t);
    EXPECT_LE(std::abs(lv - prev), 0.01 / s.rise_time_ns + 1e-12) << t;
    if (t >= 100.0 && t <= 110.0) {
      EXPECT_GE(lv, prev - 1e-15);
    }
    if (t >= 150.0 && t <= 160.0) {
      EXPECT_LE(lv, prev + 1e-15);
    }
    EXPECT_GE(lv, 0.0);
    EXPECT_LE(lv, 1.0);
    prev = lv;
  }
}

TEST(DriveScheduleTest, ValidationRejectsBadInput) {
  DriveSchedule s = on_at_100();
  s.rise_time_ns = -1.0;
  EXPECT_THROW(s.validate(), InvalidArgumentError);
  s = on_at_100();
  s.transitions.push_back({100.0, DriveLevel::kOff});
  EXPECT_THROW(s.validate(), InvalidArgumentError);
}

TEST(PockelsOperatorTest, FullLevelIsBitFlip) {
  const ComponentSpec pc = ComponentSpec::pockels_cell("pc", 1.0);
  EXPECT_TRUE(equal_up_to_phase(pockels_operator_at_level(1.0, pc).matrix(),
                                jones::pauli_x().matrix()));
}

TEST(PockelsOperatorTest, ZeroLevelIsNeutralLoss) {
  const ComponentSpec pc = ComponentSpec::pockels_cell("pc", 0.9);
  const Matrix2c j = pockels_operator_at_level(0.0, pc).matrix();
  EXPECT_LE((j - std::sqrt(0.9) * Matrix2c::Identity()).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(PockelsOperatorTest, RotationErrorMatchesDirectRotation) {
  const double eps = 0.05;
  const ComponentSpec pc = ComponentSpec::pockels_cell("pc", 1.0, eps);
  const Matrix2c j = pockels_operator_at_level(1.0, pc).matrix();
  // exp(-i theta X) evaluated entry by entry.
  const double th = M_PI / 2.0 + eps;
  EXPECT_NEAR(std::abs(j(0, 0) - std::cos(th)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j(0, 1) - complex(0.0, -std::sin(th))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j(1, 0) - complex(0.0, -std::sin(th))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j(1, 1) - std::cos(th)), 0.0, 1e-15);
  EXPECT_GT(std::abs(j(0, 1)), std::abs(j(0, 0)));
}

TEST(PockelsOperatorTest, WrongKindIsRejected) {
  EXPECT_THROW(pockels_operator(on_at_100(), 0.0, ComponentSpec::retroreflector("rr", 1.0)),
               ComponentKindError);
  EXPECT_THROW(circulator_operator(Direction::kForward,
                                   ComponentSpec::pockels_cell("pc", 1.0)),
               ComponentKindError);
}

TEST(PbsRouteTest, Examples) {
  auto [t, r] = pbs_route(DensityMatrix::pure(PureState::H()));
  EXPECT_NEAR(t.trace(), 1.0, 1e-15);
  EXPECT_NEAR(r.trace(), 0.0, 1e-15);

  std::tie(t, r) = pbs_route(DensityMatrix::pure(PureState::D()));
  EXPECT_LE((t.matrix() - 0.5 * PureState::H().projector()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((r.matrix() - 0.5 * PureState::V().projector()).cwiseAbs().maxCoeff(), 1e-15);

  std::tie(t, r) = pbs_route(DensityMatrix::maximally_mixed());
  EXPECT_NEAR(t.trace(), 0.5, 1e-15);
  EXPECT_NEAR(r.trace(), 0.5, 1e-15);
}

TEST(PbsRouteTest, ConservesTrace) {
  Gen g(17);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = g.density();
    const auto [t, r] = pbs_route(rho);
    EXPECT_NEAR(t.trace() + r.trace(), rho.trace(), 1e-12);
  }
}

TEST(FiberTest, Examples) {
  EXPECT_NEAR(fiber_transmission(50.0, 4.0, true), 0.912, 5e-4);
  EXPECT_NEAR(1.0 - fiber_transmission(0.5, 4.0, true), 1e-3, 1e-4);
  EXPECT_DOUBLE_EQ(fiber_transmission(1234.0, 0.0, true), 1.0);
  EXPECT_NEAR(fiber_transmission(5000.0, 4.0, true), 1e-4, 1e-12);
  EXPECT_NEAR(fiber_transmission(5000.0, 0.2, true), std::pow(10.0, -0.2), 1e-12);
  EXPECT_THROW(fiber_transmission(-1.0, 4.0, true), InvalidArgumentError);
  EXPECT_DOUBLE_EQ(fiber_attenuation_db_per_km(780.0), 4.0);
  EXPECT_DOUBLE_EQ(fiber_attenuation_db_per_km(1550.0), 0.2);
}

TEST(CirculatorTest, Examples) {
  const ComponentSpec ideal = ComponentSpec::circulator_arm("arm", 1.0);
  EXPECT_LE((circulator_operator(Direction::kForward, ideal).matrix() -
             jones::pauli_x().matrix()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((circulator_operator(Direction::kReverse, ideal).matrix() -
             Matrix2c::Identity()).cwiseAbs().maxCoeff(), 0.0);

  const ComponentSpec lossy = ComponentSpec::circulator_arm("arm", 0.85);
  const JonesOperator fwd = circulator_operator(Direction::kForward, lossy);
  EXPECT_LE((fwd.matrix() - std::sqrt(0.85) * jones::pauli_x().matrix())
                .cwiseAbs().maxCoeff(), 1e-15);
  Gen g(23);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = DensityMatrix::pure(g.pure());
    EXPECT_NEAR(apply(rho, fwd).trace(), 0.85, 1e-12);
  }
}

TEST(CirculatorTest, ArmPhaseIsGlobalOverRoundTrip) {
  // Forward then reverse: the drifting arm is crossed once either way.
  for (double phi : {0.3, 1.7, 4.0}) {
    const ComponentSpec arm = ComponentSpec::circulator_arm("arm", 1.0, phi);
    const Matrix2c rt = circulator_operator(Direction::kReverse, arm).matrix() *
                        jones::pauli_x().matrix() *
                        circulator_operator(Direction::kForward, arm).matrix();
    EXPECT_TRUE(equal_up_to_phase(rt, Matrix2c::Identity()));
  }
}

TEST(SagnacSplitTest, CrossAndBackPartitionWeight) {
  Gen g(29);
  for (int i = 0; i < 100; ++i) {
    const double level = g.uniform(0.0, 1.0);
    const ComponentSpec pc =
        ComponentSpec::pockels_cell("pc", 1.0, g.uniform(-0.2, 0.2));
    const SagnacSplit s = sagnac_split(pockels_operator_at_level(level, pc));
    const DensityMatrix rho = DensityMatrix::pure(g.pure());
    EXPECT_NEAR(apply(rho, s.cross).trace() + apply(rho, s.back).trace(), 1.0, 1e-12);
  }
}

TEST(DelayLineTest, StaticPhaseCancelsWithFlip) {
  for (double phi = 0.0; phi < 2.0 * M_PI; phi += M_PI / 7.0) {
    const std::vector<ComponentSpec> zone = {
        ComponentSpec::fiber("f", 1.0, 0.0, 1.0, phi),
        ComponentSpec::retroreflector("rr", 1.0), ComponentSpec::fpc("fpc")};
    EXPECT_TRUE(equal_up_to_phase(delay_line_operator(zone, true).matrix(),
                                  jones::pauli_x().matrix(), 1e-12));
  }
}

TEST(DelayLineTest, StaticPhaseSurvivesWithoutFlip) {
  const std::vector<ComponentSpec> zone = {
      ComponentSpec::fiber("f", 1.0, 0.0, 1.0, 0.4),
      ComponentSpec::retroreflector("rr", 1.0), ComponentSpec::fpc("fpc")};
  EXPECT_FALSE(equal_up_to_phase(delay_line_operator(zone, false).matrix(),
                                 Matrix2c::Identity(), 1e-6));
}

TEST(DelayLineTest, RoundTripPowerMatchesMeanTransmissions) {
  Gen g(31);
  for (int i = 0; i < 100; ++i) {
    const double t_f = g.uniform(0.2, 1.0), t_rr = g.uniform(0.2, 1.0);
    const double len = g.uniform(0.0, 500.0);
    const std::vector<ComponentSpec> zone = {
        ComponentSpec::fiber("f", len, 4.0, t_f, g.uniform(0.0, 6.0)),
        ComponentSpec::retroreflector("rr", t_rr), ComponentSpec::fpc("fpc")};
    const DensityMatrix out = apply(DensityMatrix::pure(g.pure()),
                                    delay_line_operator(zone, true));
    EXPECT_NEAR(out.trace(), zone[0].mean_transmission() * t_rr, 1e-12);
  }
}

TEST(ComponentSpecTest, ValidationRejectsOutOfRange) {
  ComponentSpec c = ComponentSpec::mirror("m", Zone::kSwitch, 1.0);
  c.transmission_h = 1.5;
  EXPECT_ANY_THROW(c.validate());
  c = ComponentSpec::fiber("f", -1.0, 4.0);
  EXPECT_THROW(c.validate(), InvalidArgumentError);
  EXPECT_THROW(component_kind_from_string("LASER"), InvalidArgumentError);
  EXPECT_EQ(coupling_route_from_string(to_string(CouplingRoute::kC2ToC3)),
            CouplingRoute::kC2ToC3);
}

TEST(OpticsPropertyTest, OperatorsStayPassiveOverParameterGrid) {
  for (double level = 0.0; level <= 1.0; level += 0.1) {
    for (double eps = -0.3; eps <= 0.3; eps += 0.05) {
      for (double t : {0.0, 0.5, 0.9, 1.0}) {
        const JonesOperator p =
            pockels_operator_at_level(level, ComponentSpec::pockels_cell("pc", t, eps));
        EXPECT_LE(p.max_singular_value(), 1.0 + 1e-12);
        const SagnacSplit s = sagnac_split(p);
        EXPECT_LE(s.cross.max_singular_value(), 1.0 + 1e-12);
        EXPECT_LE(s.back.max_singular_value(), 1.0 + 1e-12);
        for (Direction d : {Direction::kForward, Direction::kReverse}) {
          EXPECT_LE(circulator_operator(d, ComponentSpec::circulator_arm("a", t, eps))
                        .max_singular_value(),
                    1.0 + 1e-12);
        }
      }
    }
  }
}

}  // namespace
}  // namespace loopmem
