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

#include "loopmem/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include <json.hpp>

#include "loopmem/errors.hpp"
#include "loopmem/rng.hpp"

namespace loopmem {

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

constexpr double kProbabilityFloor = 1e-12;
constexpr double kEigenClip = 1e-6;

// Row i maps (m00, m11, Re m01, Im m01) of a Hermitian M to <p_i|M|p_i>.
Mat4 design_matrix(const MeasurementSet &m) {
  Mat4 a;
  for (int i = 0; i < 4; ++i) {
    const complex pa = m.projectors[i].alpha();
    const complex pb = m.projectors[i].beta();
    const complex cross = std::conj(pa) * pb;
    a(i, 0) = std::norm(pa);
    a(i, 1) = std::norm(pb);
    a(i, 2) = 2.0 * cross.real();
    a(i, 3) = -2.0 * cross.imag();
  }
  return a;
}

Matrix2c rho_from_params(const Vec4 &x) {
  Matrix2c t = Matrix2c::Zero();
  t(0, 0) = x(0);
  t(1, 1) = x(1);
  t(1, 0) = complex(x(2), x(3));
  const Matrix2c r = t.adjoint() * t;
  return r / r.trace().real();
}

Vec4 params_from_rho(const Matrix2c &rho) {
  // rho = T^dagger T with T = [[a, 0], [c, b]].
  const double b = std::sqrt(rho(1, 1).real());
  const complex c = rho(1, 0) / b;
  const double a = std::sqrt(std::max(0.0, rho(0, 0).real() - std::norm(c)));
  return Vec4(a, b, c.real(), c.imag());
}

class Objective {
 public:
  Objective(std::span<const double, 4> counts, const MeasurementSet &m) {
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    for (int i = 0; i < 4; ++i) {
      weight_[i] = counts[i] / total;
      proj_[i] = m.projectors[i].ket();
    }
  }

  // Negative profiled log-likelihood per count, plus a penalty that pins
  // the otherwise free overall scale of T.
  double operator()(const Vec4 &x) const {
    const double scale = x.squaredNorm();
    if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
    const Matrix2c rho = rho_from_params(x);
    std::array<double, 4> pi{};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      pi[i] = std::max(0.0, proj_[i].dot(rho * proj_[i]).real());
      sum += pi[i];
    }
    double f = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (weight_[i] == 0.0) continue;
      f -= weight_[i] * std::log(std::max(pi[i] / sum, kProbabilityFloor));
    }
    return f + (scale - 1.0) * (scale - 1.0);
  }

  Vec4 gradient(const Vec4 &x) const {
    Vec4 g;
    for (int i = 0; i < 4; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
      Vec4 xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      g(i) = ((*this)(xp) - (*this)(xm)) / (2.0 * h);
    }
    return g;
  }

 private:
  std::array<double, 4> weight_{};
  std::array<Vector2c, 4> proj_;
};

Matrix2c project_to_psd(const Matrix2c &h) {
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(h);
  Eigen::Vector2d ev = es.eigenvalues();
  for (int i = 0; i < 2; ++i) ev(i) = std::max(ev(i), kEigenClip);
  ev /= ev.sum();
  return es.eigenvectors() * ev.cast<complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

double total_of(std::span<const double, 4> counts) {
  for (double k : counts) {
    if (!std::isfinite(k) || k < 0.0) {
      throw InvalidArgumentError("counts must be finite and >= 0");
    }
  }
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

}  // namespace

MeasurementSet MeasurementSet::standard() {
  return from_names({"H", "V", "D", "R"});
}

MeasurementSet MeasurementSet::from_names(
    const std::array<std::string, 4> &names) {
  MeasurementSet m;
  for (int i = 0; i < 4; ++i) {
    m.projectors[i] = PureState::named(names[i]);
    m.labels[i] = names[i];
  }
  m.validate();
  return m;
}

void MeasurementSet::validate() const {
  Eigen::JacobiSVD<Mat4> svd(design_matrix(*this));
  const Vec4 s = svd.singularValues();
  if (!(s(3) > 1e-10 * s(0))) {
    throw IncompleteSetError("projector set is not tomographically complete");
  }
}

Matrix2c linear_inversion(std::span<const double, 4> counts,
                          const MeasurementSet &m) {
  m.validate();
  if (!(total_of(counts) > 0.0)) {
    throw InvalidArgumentError("linear inversion needs non-zero total counts");
  }
  const Vec4 k(counts[0], counts[1], counts[2], counts[3]);
  const Vec4 sol = design_matrix(m).fullPivLu().solve(k);
  Matrix2c op;
  op(0, 0) = sol(0);
  op(1, 1) = sol(1);
  op(0, 1) = complex(sol(2), sol(3));
  op(1, 0) = std::conj(op(0, 1));
  const double tr = op.trace().real();
  if (!(tr > 0.0)) {
    throw UndefinedStateError("linear inversion gives a non-positive trace");
  }
  return op / tr;
}

ReconstructionResult mle_reconstruct(std::span<const double, 4> counts,
                                     const MeasurementSet &m,
                                     const std::optional<PureState> &target,
                                     const MleOptions &opts) {
  m.validate();
  if (!(total_of(counts) > 0.0)) {
    throw InvalidArgumentError("reconstruction needs non-zero total counts");
  }

  Matrix2c start = 0.5 * Matrix2c::Identity();
  try {
    start = project_to_psd(linear_inversion(counts, m));
  } catch (const UndefinedStateError &) {
    // Counts carry no usable trace information; start from I/2.
  }

  const Objective f(counts, m);
  Vec4 x = params_from_rho(start);
  double fx = f(x);
  Vec4 g = f.gradient(x);
  Mat4 inv_h = Mat4::Identity();

  ReconstructionResult res;
  // BFGS with Armijo backtracking.
  for (res.iterations = 0; res.iterations < opts.max_iterations;
       ++res.iterations) {
    if (g.norm() < opts.gradient_tol) {
      res.converged = true;
      break;
    }
    Vec4 d = -inv_h * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      inv_h = Mat4::Identity();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    Vec4 x_new = x + d;
    double f_new = f(x_new);
    int halvings = 0;
    while (!(f_new <= fx + 1e-4 * step * slope) && halvings < 60) {
      step *= 0.5;
      x_new = x + step * d;
      f_new = f(x_new);
      ++halvings;
    }
    if (!(f_new <= fx)) break;  // no descent possible at working precision
    const Vec4 g_new = f.gradient(x_new);
    const Vec4 s = x_new - x;
    const Vec4 y = g_new - g;
    const double change = fx - f_new;
    x = x_new;
    fx = f_new;
    g = g_new;
    if (change < opts.objective_tol) {
      res.converged = true;
      ++res.iterations;
      break;
    }
    const double sy = s.dot(y);
    if (sy > 1e-18) {
      const double rho_k = 1.0 / sy;
      const Mat4 i4 = Mat4::Identity();
      inv_h = (i4 - rho_k * s * y.transpose()) * inv_h *
                  (i4 - rho_k * y * s.transpose()) +
              rho_k * s * s.transpose();
    }
  }
  if (!res.converged && g.norm() < opts.gradient_tol) res.converged = true;

  res.rho = DensityMatrix::trusted(rho_from_params(x));
  res.log_likelihood = -(fx - (x.squaredNorm() - 1.0) * (x.squaredNorm() - 1.0));
  if (target) res.fidelity = fidelity(res.rho, *target);
  return res;
}

McStats monte_carlo_uncertainty(std::span<const double, 4> counts,
                                const MeasurementSet &m,
                                const PureState &target, int n_samples,
                                std::uint64_t seed) {
  if (n_samples < 2) throw InvalidArgumentError("n_samples must be >= 2");
  m.validate();
  if (!(total_of(counts) > 0.0)) {
    throw InvalidArgumentError("Monte Carlo needs non-zero total counts");
  }

  const std::array<double, 4> means{counts[0], counts[1], counts[2],
                                    counts[3]};
  std::vector<double> fid(n_samples, 0.0);
  std::vector<char> ok(n_samples, 0);
  std::vector<char> conv(n_samples, 0);

  auto work = [&](int begin, int end) {
    for (int s = begin; s < end; ++s) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
      std::array<double, 4> draw{};
      double total = 0.0;
      for (int i = 0; i < 4; ++i) {
        if (means[i] > 0.0) {
          std::poisson_distribution<std::int64_t> p(means[i]);
          draw[i] = static_cast<double>(p(rng));
        }
        total += draw[i];
      }
      if (total <= 0.0) continue;
      const ReconstructionResult r = mle_reconstruct(draw, m, target);
      fid[s] = r.fidelity;
      ok[s] = 1;
      conv[s] = r.converged ? 1 : 0;
    }
  };

  const int workers = static_cast<int>(std::clamp<unsigned>(
      std::thread::hardware_concurrency(), 1u, 64u));
  if (workers == 1 || n_samples < 256) {
    work(0, n_samples);
  } else {
    std::vector<std::jthread> pool;
    const int chunk = (n_samples + workers - 1) / workers;
    for (int b = 0; b < n_samples; b += chunk) {
      pool.emplace_back(work, b, std::min(n_samples, b + chunk));
    }
  }

  // Two-pass reduction in index order: bitwise identical for any thread
  // count.
  McStats st;
  double sum = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    if (!ok[s]) {
      ++st.degenerate;
      continue;
    }
    ++st.n_samples;
    if (!conv[s]) ++st.nonconverged;
    sum += fid[s];
  }
  if (st.n_samples < 2) {
    throw NoSignalError("too few non-degenerate Monte Carlo samples");
  }
  st.mean = sum / st.n_samples;
  double ss = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    if (ok[s]) ss += (fid[s] - st.mean) * (fid[s] - st.mean);
  }
  st.std = std::sqrt(ss / (st.n_samples - 1));
  return st;
}

ReconstructionResult reconstruct_records(std::span<const CountRecord> records,
                                         const MeasurementSet &m,
                                         const PureState &target,
                                         int n_samples, std::uint64_t seed) {
  if (records.size() != 4) {
    throw InvalidArgumentError("tomography needs exactly four records");
  }
  std::array<double, 4> k{};
  for (int i = 0; i < 4; ++i) {
    records[i].validate();
    k[i] = records[i].counts;
  }
  ReconstructionResult r = mle_reconstruct(k, m, target);
  if (n_samples > 0) {
    const McStats mc = monte_carlo_uncertainty(k, m, target, n_samples, seed);
    r.mc_mean = mc.mean;
    r.mc_std = mc.std;
    r.n_samples = mc.n_samples;
    r.mc_nonconverged = mc.nonconverged;
  }
  return r;
}

std::array<double, 4> born_counts(const DensityMatrix &rho,
                                  const MeasurementSet &m, double flux) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    out[i] = flux * fidelity(rho, m.projectors[i]);
  }
  return out;
}

double trace_distance(const Matrix2c &a, const Matrix2c &b) {
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::string to_json(const ReconstructionResult &r) {
  nlohmann::ordered_json j;
  auto rho = nlohmann::ordered_json::array();
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      rho.push_back(r.rho.matrix()(i, k).real());
      rho.push_back(r.rho.matrix()(i, k).imag());
    }
  }
  j["rho"] = rho;
  j["fidelity"] = r.fidelity;
  j["mc_mean"] = r.mc_mean;
  j["mc_std"] = r.mc_std;
  j["n_samples"] = r.n_samples;
  j["mc_nonconverged"] = r.mc_nonconverged;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  return j.dump(2);
}

}  // namespace loopmem
