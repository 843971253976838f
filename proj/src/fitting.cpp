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

#include "loopmem/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "loopmem/errors.hpp"

namespace loopmem {

namespace {
constexpr double kClampSlack = 1e-12;
}  // namespace

MalusFit fit_malus(std::span<const double> angles,
                   std::span<const double> counts) {
  if (angles.size() != counts.size()) {
    throw InvalidArgumentError("angles and counts differ in length");
  }
  // Distinct analyzer settings modulo pi, at micro-radian resolution.
  std::set<long long> distinct;
  for (double a : angles) {
    if (!std::isfinite(a)) throw InvalidArgumentError("angle is not finite");
    double m = std::fmod(a, M_PI);
    if (m < 0.0) m += M_PI;
    long long key = std::llround(m * 1e6);
    if (key == std::llround(M_PI * 1e6)) key = 0;
    distinct.insert(key);
  }
  if (distinct.size() < 5) {
    throw RankError("Malus fit needs at least five distinct angles (mod pi)");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(angles.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(counts[i]) || counts[i] < 0.0) {
      throw InvalidArgumentError("counts must be finite and >= 0");
    }
    x(i, 0) = 1.0;
    x(i, 1) = std::cos(2.0 * angles[i]);
    x(i, 2) = std::sin(2.0 * angles[i]);
    y(i) = counts[i];
    w(i) = 1.0 / std::max(counts[i], 1.0);
  }
  const Eigen::MatrixXd xw = w.cwiseSqrt().asDiagonal() * x;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xw);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv(2) > 1e-10 * sv(0))) {
    throw RankError("Malus design matrix is rank deficient");
  }
  const Eigen::Matrix3d normal = x.transpose() * w.asDiagonal() * x;
  const Eigen::Matrix3d cov = normal.inverse();
  const Eigen::Vector3d p = cov * (x.transpose() * w.asDiagonal() * y);

  const double a = p(0), b = p(1), c = p(2);
  if (!(a > 0.0)) throw NoSignalError("Malus fit has no positive mean level");
  const double r = std::hypot(b, c);

  MalusFit fit;
  fit.amplitude = 2.0 * a;
  fit.visibility_unclamped = r / a;
  fit.theta0 = 0.5 * std::atan2(c, b);
  // Delta method on V = hypot(b, c) / a.
  Eigen::Vector3d grad;
  if (r > 0.0) {
    grad << -r / (a * a), b / (a * r), c / (a * r);
    fit.sigma_visibility = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
  } else {
    fit.sigma_visibility =
        std::sqrt(std::max(0.0, cov(1, 1) + cov(2, 2))) / a;
  }
  fit.visibility = std::clamp(fit.visibility_unclamped, 0.0, 1.0);
  // Rounding noise at the boundary is not a clamp.
  fit.clamped = std::abs(fit.visibility - fit.visibility_unclamped) > kClampSlack;
  return fit;
}

MalusFit fit_malus(std::span<const CountRecord> records) {
  std::vector<double> angles, counts;
  for (const CountRecord &r : records) {
    angles.push_back(r.setting_value);
    counts.push_back(r.counts);
  }
  return fit_malus(angles, counts);
}

DecayFit fit_decay(std::span<const int> n_values,
                   std::span<const double> counts) {
  if (n_values.size() != counts.size()) {
    throw InvalidArgumentError("n_values and counts differ in length");
  }
  if (n_values.size() < 3) {
    throw InvalidArgumentError("decay fit needs at least three points");
  }
  DecayFit fit;
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) {
      throw InvalidArgumentError("decay fit needs N >= 1");
    }
    if (!std::isfinite(counts[i]) || counts[i] < 0.0) {
      throw InvalidArgumentError("counts must be finite and >= 0");
    }
    if (counts[i] == 0.0) {
      ++fit.zeros_excluded;
      continue;
    }
    const double xi = n_values[i] - 1.0;
    const double yi = std::log(counts[i]);
    const double wi = counts[i];
    sw += wi;
    sx += wi * xi;
    sy += wi * yi;
    sxx += wi * xi * xi;
    sxy += wi * xi * yi;
    ++used;
  }
  if (used < 2) throw NoSignalError("decay fit has fewer than two non-zero points");
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw RankError("decay fit needs two distinct N values");
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sxx * sy - sx * sxy) / det;
  const double var_slope = sw / det;

  fit.gamma_unclamped = std::exp(slope);
  fit.prefactor = std::exp(intercept);
  fit.sigma_gamma = fit.gamma_unclamped * std::sqrt(var_slope);
  fit.gamma_per_cycle = std::min(fit.gamma_unclamped, 1.0);
  fit.clamped = fit.gamma_unclamped - 1.0 > kClampSlack;
  return fit;
}

DecayFit fit_decay(std::span<const CountRecord> records) {
  std::vector<int> n;
  std::vector<double> counts;
  for (const CountRecord &r : records) {
    n.push_back(r.n_cycles);
    counts.push_back(r.counts);
  }
  return fit_decay(n, counts);
}

BudgetReport project_budget(std::span<const ComponentSpec> inventory,
                            double delta_tau_ns, double wavelength_nm,
                            int n_max) {
  if (n_max < 0) throw InvalidArgumentError("n_max must be >= 0");
  if (!(wavelength_nm > 0.0)) {
    throw InvalidArgumentError("wavelength_nm must be > 0");
  }
  MemoryConfig cfg;
  cfg.delta_tau_ns = delta_tau_ns;
  cfg.components.assign(inventory.begin(), inventory.end());

  BudgetReport rep;
  rep.params = derive_transmission_params(cfg);
  rep.delta_tau_ns = delta_tau_ns;
  rep.wavelength_nm = wavelength_nm;
  for (int n = 0; n <= n_max; ++n) {
    rep.eta_table.push_back(efficiency(rep.params, n));
  }
  rep.per_cycle = rep.params.g22;
  if (rep.per_cycle >= 1.0) {
    rep.lifetime_cycles_1e = std::numeric_limits<double>::infinity();
  } else if (rep.per_cycle <= 0.0) {
    rep.lifetime_cycles_1e = 0.0;
  } else {
    rep.lifetime_cycles_1e = -1.0 / std::log(rep.per_cycle);
  }
  rep.lifetime_time_1e_ns = rep.lifetime_cycles_1e * delta_tau_ns;
  return rep;
}

std::string to_json(const MalusFit &f) {
  nlohmann::ordered_json j;
  j["visibility"] = f.visibility;
  j["sigma_visibility"] = f.sigma_visibility;
  j["theta0"] = f.theta0;
  j["amplitude"] = f.amplitude;
  j["clamped"] = f.clamped;
  return j.dump(2);
}

std::string to_json(const DecayFit &f) {
  nlohmann::ordered_json j;
  j["gamma_per_cycle"] = f.gamma_per_cycle;
  j["sigma_gamma"] = f.sigma_gamma;
  j["prefactor"] = f.prefactor;
  j["zeros_excluded"] = f.zeros_excluded;
  j["clamped"] = f.clamped;
  return j.dump(2);
}

std::string to_json(const BudgetReport &b) {
  nlohmann::ordered_json j;
  j["g13"] = b.params.g13;
  j["g12"] = b.params.g12;
  j["g22"] = b.params.g22;
  j["g23"] = b.params.g23;
  j["per_cycle"] = b.per_cycle;
  // JSON has no infinity; a lossless loop reports null.
  if (std::isfinite(b.lifetime_cycles_1e)) {
    j["lifetime_cycles_1e"] = b.lifetime_cycles_1e;
    j["lifetime_time_1e_ns"] = b.lifetime_time_1e_ns;
  } else {
    j["lifetime_cycles_1e"] = nullptr;
    j["lifetime_time_1e_ns"] = nullptr;
  }
  j["delta_tau_ns"] = b.delta_tau_ns;
  j["wavelength_nm"] = b.wavelength_nm;
  j["eta_table"] = b.eta_table;
  return j.dump(2);
}

}  // namespace loopmem
