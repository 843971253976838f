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

#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "loopmem/errors.hpp"
#include "loopmem/rng.hpp"
#include "loopmem/tomography.hpp"
#include "test_support.hpp"

namespace loopmem {
namespace {

using testing::Gen;

const MeasurementSet kStd = MeasurementSet::standard();

std::array<double, 4> poisson(const std::array<double, 4> &mean, std::uint64_t seed) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    out[i] = static_cast<double>(sample_counts(mean[i], 1.0, derive_seed(seed, i)));
  }
  return out;
}

void expect_matrix_near(const Matrix2c &a, const Matrix2c &b, double tol) {
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << "a=\n" << a << "\nb=\n" << b;
}

TEST(MeasurementSetTest, StandardSetIsComplete) {
  EXPECT_NO_THROW(kStd.validate());
  EXPECT_EQ(kStd.labels[3], "R");
  EXPECT_THROW(MeasurementSet::from_names({"H", "V", "D", "A"}).validate(),
               IncompleteSetError);
  EXPECT_NO_THROW(MeasurementSet::from_names({"H", "V", "A", "L"}).validate());
}

TEST(LinearInversionTest, Examples) {
  const double n = 1000.0;
  const std::array<double, 4> h{n, 0.0, n / 2, n / 2};
  expect_matrix_near(linear_inversion(h, kStd), PureState::H().projector(), 1e-12);
  const std::array<double, 4> mixed{n / 2, n / 2, n / 2, n / 2};
  expect_matrix_near(linear_inversion(mixed, kStd), 0.5 * Matrix2c::Identity(), 1e-12);
  const std::array<double, 4> r{n / 2, n / 2, n / 2, n};
  expect_matrix_near(linear_inversion(r, kStd), PureState::R().projector(), 1e-12);
}

TEST(LinearInversionTest, InvertsBornRule) {
  Gen g(7);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = g.density().conditional();
    const std::array<double, 4> k = born_counts(rho, kStd, 5000.0);
    expect_matrix_near(linear_inversion(k, kStd), rho.matrix(), 1e-10);
  }
}

TEST(LinearInversionTest, RejectsZeroCounts) {
  const std::array<double, 4> zero{0, 0, 0, 0};
  EXPECT_THROW(linear_inversion(zero, kStd), InvalidArgumentError);
  EXPECT_THROW(mle_reconstruct(zero, kStd), InvalidArgumentError);
}

TEST(MleTest, NoiselessPureStatesRecover) {
  for (const char *s : {"H", "V", "D", "A", "R", "L"}) {
    const PureState psi = PureState::named(s);
    const std::array<double, 4> k = born_counts(DensityMatrix::pure(psi), kStd, 1e4);
    const ReconstructionResult r = mle_reconstruct(k, kStd, psi);
    EXPECT_GE(r.fidelity, 0.9999) << s;
    EXPECT_TRUE(r.converged) << s;
  }
}

TEST(MleTest, MaximallyMixedHasHalfPurity) {
  const std::array<double, 4> k{500, 500, 500, 500};
  const ReconstructionResult r = mle_reconstruct(k, kStd);
  EXPECT_NEAR(r.rho.purity(), 0.5, 1e-4);
}

TEST(MleTest, SampledRightCircularWithinMcEnvelope) {
  const std::array<double, 4> mean = born_counts(DensityMatrix::pure(PureState::R()), kStd, 2e4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::array<double, 4> k = poisson(mean, seed);
    const ReconstructionResult r = mle_reconstruct(k, kStd, PureState::R());
    const McStats mc = monte_carlo_uncertainty(k, kStd, PureState::R(), 2000, seed);
    EXPECT_LE(1.0 - r.fidelity, 3.0 * mc.std) << seed;
  }
}

TEST(MonteCarloTest, DefaultSampleCount) { EXPECT_EQ(kDefaultMcSamples, 10000); }

TEST(MonteCarloTest, SeedDeterminism) {
  const std::array<double, 4> k{900, 80, 520, 470};
  const McStats a = monte_carlo_uncertainty(k, kStd, PureState::H(), 500, 42);
  const McStats b = monte_carlo_uncertainty(k, kStd, PureState::H(), 500, 42);
  const McStats c = monte_carlo_uncertainty(k, kStd, PureState::H(), 500, 43);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std, b.std);
  EXPECT_NE(a.mean, c.mean);
  EXPECT_EQ(a.n_samples, 500);
}

// Interior state (fidelity about 0.95 to the target) so the spread scales
// as 1/sqrt(counts).
TEST(MonteCarloTest, SpreadScalesWithCounts) {
  const Matrix2c m = 0.9 * PureState::R().projector() + 0.05 * Matrix2c::Identity();
  const DensityMatrix rho(m);
  double ratio_sum = 0.0;
  const int seeds = 4;
  for (int s = 0; s < seeds; ++s) {
    const std::array<double, 4> lo = born_counts(rho, kStd, 1e3);
    const std::array<double, 4> hi = born_counts(rho, kStd, 1e5);
    const McStats a = monte_carlo_uncertainty(lo, kStd, PureState::R(), 2000, 10 + s);
    const McStats b = monte_carlo_uncertainty(hi, kStd, PureState::R(), 2000, 20 + s);
    ratio_sum += a.std / b.std;
  }
  EXPECT_NEAR(ratio_sum / seeds, 10.0, 2.0);
}

TEST(MonteCarloTest, HugeCountsConcentrate) {
  const std::array<double, 4> k =
      born_counts(DensityMatrix::pure(PureState::D()), kStd, 2e8);
  const McStats mc = monte_carlo_uncertainty(k, kStd, PureState::D(), 500, 1);
  EXPECT_LT(mc.std, 1e-3);
}

// Properties.

TEST(TomographyPropertyTest, MleIsAlwaysPhysical) {
  Gen g(555);
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 4> k{};
    for (double &v : k) {
      v = g.integer(0, 3) == 0 ? 0.0 : std::floor(g.uniform(0.0, 2000.0));
    }
    if (k[0] + k[1] + k[2] + k[3] == 0.0) k[g.integer(0, 3)] = 1.0;
    const ReconstructionResult r = mle_reconstruct(k, kStd);
    const Matrix2c &m = r.rho.matrix();
    EXPECT_NEAR(m.trace().real(), 1.0, 1e-9);
    EXPECT_NEAR(m.trace().imag(), 0.0, 1e-12);
    EXPECT_LE((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(r.rho.eigenvalues()(0), -1e-9);
  }
}

TEST(TomographyPropertyTest, AgreesWithPhysicalLinearInversion) {
  Gen g(556);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 50; ++i) {
    const DensityMatrix rho = g.density().conditional();
    const std::array<double, 4> k = poisson(born_counts(rho, kStd, 4e5), i);
    const Matrix2c lin = linear_inversion(k, kStd);
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(lin);
    if (es.eigenvalues()(0) <= 1e-3) continue;
    ++checked;
    EXPECT_LT(trace_distance(mle_reconstruct(k, kStd).rho.matrix(), lin), 1e-3);
  }
  EXPECT_GE(checked, 20);
}

TEST(TomographyPropertyTest, FidelityBiasVanishesAtHighCounts) {
  for (const char *s : {"H", "D", "R"}) {
    const PureState psi = PureState::named(s);
    const std::array<double, 4> mean = born_counts(DensityMatrix::pure(psi), kStd, 2e6);
    double err = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
      err += 1.0 - mle_reconstruct(poisson(mean, 1000 + seed), kStd, psi).fidelity;
    }
    EXPECT_LT(err / 100.0, 0.005) << s;
  }
}

TEST(TomographyJsonTest, EightNumberLayout) {
  const std::array<double, 4> k{1000, 0, 500, 500};
  const std::string j = to_json(mle_reconstruct(k, kStd, PureState::H()));
  EXPECT_NE(j.find("\"rho\""), std::string::npos);
  EXPECT_NE(j.find("\"fidelity\""), std::string::npos);
  EXPECT_NE(j.find("\"mc_std\""), std::string::npos);
}

}  // namespace
}  // namespace loopmem
