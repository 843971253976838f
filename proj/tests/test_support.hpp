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

// Shared fixtures and hand-rolled random generators for the test suite.

#pragma once

#include <cmath>
#include <random>

#include "loopmem/loop_engine.hpp"
#include "loopmem/optics.hpp"
#include "loopmem/polar.hpp"

namespace loopmem::testing {

inline MemoryConfig ideal_config() {
  MemoryConfig cfg;
  cfg.components = {
      ComponentSpec::pbs("circ-optics", Zone::kCirculator, 1.0),
      ComponentSpec::circulator_arm("circ-arm", 1.0),
      ComponentSpec::pbs("sw-optics", Zone::kSwitch, 1.0),
      ComponentSpec::pockels_cell("pc", 1.0),
      ComponentSpec::fiber("dl-fiber", 0.5, 0.0),
      ComponentSpec::retroreflector("rr", 1.0),
      ComponentSpec::fpc("fpc"),
      ComponentSpec::coupler("k13", CouplingRoute::kC1ToC3, 1.0),
      ComponentSpec::coupler("k12", CouplingRoute::kC1ToC2, 1.0),
      ComponentSpec::coupler("k22", CouplingRoute::kC2ToC2, 1.0),
      ComponentSpec::coupler("k23", CouplingRoute::kC2ToC3, 1.0),
  };
  return cfg;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  complex gaussian_complex() {
    std::normal_distribution<double> n;
    return {n(rng_), n(rng_)};
  }

  PureState pure() {
    return make_pure(gaussian_complex(), gaussian_complex());
  }

  /// Random PSD matrix with trace in (0, 1].
  DensityMatrix density() {
    Matrix2c g;
    g << gaussian_complex(), gaussian_complex(), gaussian_complex(),
        gaussian_complex();
    Matrix2c m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix(m * uniform(0.05, 1.0));
  }

  /// Random contraction: a random matrix scaled below unit norm.
  JonesOperator contraction() {
    Matrix2c g;
    g << gaussian_complex(), gaussian_complex(), gaussian_complex(),
        gaussian_complex();
    Eigen::JacobiSVD<Matrix2c> svd(g);
    return JonesOperator(g * (uniform(0.1, 1.0) / svd.singularValues()(0)));
  }

  JonesOperator unitary() {
    Matrix2c g;
    g << gaussian_complex(), gaussian_complex(), gaussian_complex(),
        gaussian_complex();
    Eigen::HouseholderQR<Matrix2c> qr(g);
    return JonesOperator(qr.householderQ() * Matrix2c::Identity());
  }

  /// Polarization-independent losses everywhere, no rotation or phase
  /// errors.
  MemoryConfig lossy_config() {
    MemoryConfig cfg = ideal_config();
    for (ComponentSpec &c : cfg.components) {
      c.transmission_h = c.transmission_v =
          c.kind == ComponentKind::kFpc ? 1.0 : uniform(0.3, 1.0);
      if (c.kind == ComponentKind::kFiberSegment) {
        c.length_m = uniform(0.0, 200.0);
        c.atten_db_per_km = uniform(0.0, 5.0);
      }
    }
    return cfg;
  }

  std::mt19937_64 &engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace loopmem::testing
