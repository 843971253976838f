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
 * @file tomography.hpp
 * @brief Single-qubit state reconstruction from four projective count rates.
 *
 * The count model is mu_i = F * <p_i|rho|p_i> with an unknown flux F that is
 * profiled out analytically (F = sum k / sum pi). The maximum-likelihood
 * estimate is searched over rho = T^dagger T / tr(T^dagger T) with T lower
 * triangular (real diagonal, one complex off-diagonal entry): four real
 * parameters, positivity by construction.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "loopmem/counting.hpp"
#include "loopmem/polar.hpp"

namespace loopmem {

struct MeasurementSet {
  std::array<PureState, 4> projectors;
  std::array<std::string, 4> labels;

  /// {H, V, D, R}.
  static MeasurementSet standard();
  static MeasurementSet from_names(const std::array<std::string, 4> &names);

  /// Throws IncompleteSetError when the four projectors do not span the
  /// Hermitian 2x2 space.
  void validate() const;
};

struct MleOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-8;
  double objective_tol = 1e-12;
};

struct ReconstructionResult {
  DensityMatrix rho;
  double fidelity = 0.0;  // vs the target, when one was given
  double mc_mean = 0.0;
  double mc_std = 0.0;
  int n_samples = 0;
  int mc_nonconverged = 0;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;  // profiled, per count
};

struct McStats {
  double mean = 0.0;
  double std = 0.0;
  int n_samples = 0;
  int nonconverged = 0;
  int degenerate = 0;  // samples with zero total counts, skipped
};

inline constexpr int kDefaultMcSamples = 10000;

/// Unit-trace Hermitian solution of the linear Born-rule system; may have
/// a negative eigenvalue. Throws IncompleteSetError for a singular design,
/// InvalidArgumentError for zero total counts and UndefinedStateError when
/// the solved operator has non-positive trace.
Matrix2c linear_inversion(std::span<const double, 4> counts,
                          const MeasurementSet &m);

ReconstructionResult mle_reconstruct(std::span<const double, 4> counts,
                                     const MeasurementSet &m,
                                     const std::optional<PureState> &target =
                                         std::nullopt,
                                     const MleOptions &opts = {});

/// Parametric bootstrap: each sample redraws the four counts from
/// Poisson(observed), reconstructs and scores against `target`. Samples
/// run in parallel on derived streams and are reduced in index order.
McStats monte_carlo_uncertainty(std::span<const double, 4> counts,
                                const MeasurementSet &m,
                                const PureState &target,
                                int n_samples = kDefaultMcSamples,
                                std::uint64_t seed = 0);

/// Full pipeline on four records in measurement-set order: MLE, fidelity
/// to target and MC error bars.
ReconstructionResult reconstruct_records(std::span<const CountRecord> records,
                                         const MeasurementSet &m,
                                         const PureState &target,
                                         int n_samples, std::uint64_t seed);

/// Forward model: expected counts of `rho` for each projector at unit flux.
std::array<double, 4> born_counts(const DensityMatrix &rho,
                                  const MeasurementSet &m, double total);

double trace_distance(const Matrix2c &a, const Matrix2c &b);

/// rho as 8 numbers row-major (re, im), fidelity and MC statistics.
std::string to_json(const ReconstructionResult &r);

}  // namespace loopmem
