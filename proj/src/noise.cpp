// Copyright 2026 The sesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sesim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sesim/ensemble.hpp"
#include "sesim/linalg.hpp"
#include "sesim/propagate.hpp"

namespace sesim {

SesDensity::SesDensity(CMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() < 1 || !is_square(rho_)) throw ValidationError("SesDensity: matrix must be square, n >= 1");
  if (!is_hermitian(rho_, 1e-12)) throw ValidationError("SesDensity: matrix is not Hermitian");
  const double tr = rho_.trace().real();
  if (tr > 1.0 + 1e-12) throw ValidationError("SesDensity: trace exceeds 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw ValidationError("SesDensity: matrix is not positive semidefinite");
}

SesDensity SesDensity::pure(const SesState& psi) {
  const CVector& a = psi.amplitudes();
  return SesDensity(a * a.adjoint(), Unchecked{});
}

SesDensity amplitude_damping(const SesDensity& rho, double t, double T1) {
  if (!(t >= 0)) throw ValidationError("amplitude_damping: t must be >= 0");
  if (!(T1 > 0)) throw ValidationError("amplitude_damping: T1 must be positive");
  return SesDensity(std::exp(-t / T1) * rho.matrix(), SesDensity::Unchecked{});
}

SesDensity dephasing(const SesDensity& rho, double t, double Tphi) {
  if (!(t >= 0)) throw ValidationError("dephasing: t must be >= 0");
  if (!(Tphi > 0)) throw ValidationError("dephasing: Tphi must be positive");
  const double r = std::exp(-2.0 * t / Tphi);
  CMatrix out = r * rho.matrix();
  out.diagonal() = rho.matrix().diagonal();
  return SesDensity(std::move(out), SesDensity::Unchecked{});
}

double fidelity_error(const SesDensity& rho, const SesState& psi) {
  if (rho.dim() != psi.dim()) throw ValidationError("fidelity_error: dimension mismatch");
  const CVector& a = psi.amplitudes();
  return 1.0 - a.dot(rho.matrix() * a).real();
}

double relaxation_error(double t, double T1) { return -std::expm1(-t / T1); }

double dephasing_error(const SesState& psi, double t, double Tphi) {
  const double quartic = psi.probabilities().array().square().sum();
  return -std::expm1(-2.0 * t / Tphi) * (1.0 - quartic);
}

SesDensity noisy_evolution(const Matrix& H, const SesDensity& rho, double t, double dt, double T1, double Tphi) {
  if (!(t >= 0 && dt > 0)) throw ValidationError("noisy_evolution: need t >= 0 and dt > 0");
  if (H.rows() != rho.dim()) throw ValidationError("noisy_evolution: dimension mismatch");
  const auto slices = static_cast<std::int64_t>(std::ceil(t / dt - 1e-9));
  SesDensity cur = rho;
  if (slices == 0) return cur;
  const double w = t / static_cast<double>(slices);
  const CMatrix u = unitary_from_eigen(H, w);
  for (std::int64_t s = 0; s < slices; ++s) {
    CMatrix next = u * cur.matrix() * u.adjoint();
    next = 0.5 * (next + next.adjoint()).eval();
    cur = dephasing(amplitude_damping(SesDensity(std::move(next)), w, T1), w, Tphi);
  }
  return cur;
}

// ------------------------------------------------------------ control errors

double ControlNoiseSpec::sigma() const { return deltaV / std::sqrt(12.0); }

void ControlNoiseSpec::validate() const {
  if (!(deltaV >= 0)) throw ValidationError("ControlNoiseSpec: deltaV must be >= 0");
}

Matrix sample_perturbation(Eigen::Index n, const ControlNoiseSpec& noise, Rng& rng) {
  noise.validate();
  Matrix v(n, n);
  const double half = 0.5 * noise.deltaV;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double x = rng.uniform(-half, half);
      v(i, j) = x;
      v(j, i) = x;
    }
  return v;
}

double control_error_exact(const Matrix& H, const Matrix& V, double t) {
  if (H.rows() != V.rows() || !is_square(H) || !is_square(V))
    throw ValidationError("control_error_exact: H and V must be square of equal size");
  const Eigen::Index n = H.rows();
  const CMatrix u0 = unitary_from_eigen(H, t);
  const CMatrix u1 = unitary_from_eigen(H + V, t);
  // (i| U0^dagger U1 |i) = sum_k conj(U0_ki) U1_ki.
  const CVector diag = (u0.conjugate().array() * u1.array()).colwise().sum().transpose();
  return std::max(0.0, 1.0 - diag.cwiseAbs2().sum() / static_cast<double>(n));
}

namespace {

McEstimate run_mc(Eigen::Index n, const Matrix* fixed, const ControlNoiseSpec& noise, double t,
                  const ControlMcOptions& opts) {
  noise.validate();
  if (opts.trials < 1) throw ValidationError("control_error_mc: trials must be >= 1");
  double sum = 0.0, sum2 = 0.0;
  for (std::int64_t k = 0; k < opts.trials; ++k) {
    Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(k));
    Matrix h = fixed ? *fixed : Matrix(opts.g_max * sample_k(n, rng));
    const Matrix v = sample_perturbation(n, noise, rng);
    const double e = control_error_exact(h, v, t);
    sum += e;
    sum2 += e * e;
  }
  McEstimate est;
  est.trials = opts.trials;
  const double m = static_cast<double>(opts.trials);
  est.mean = sum / m;
  if (opts.trials > 1) est.se = std::sqrt(std::max(0.0, (sum2 - sum * sum / m) / (m - 1.0)) / m);
  return est;
}

}  // namespace

McEstimate control_error_mc(const Matrix& H, const ControlNoiseSpec& noise, double t, const ControlMcOptions& opts) {
  if (H.rows() < 1 || !is_exactly_symmetric(H)) throw ValidationError("control_error_mc: H must be symmetric");
  if (opts.ensemble == ControlEnsemble::RandomH) return run_mc(H.rows(), nullptr, noise, t, opts);
  return run_mc(H.rows(), &H, noise, t, opts);
}

McEstimate control_error_mc(Eigen::Index n, const ControlNoiseSpec& noise, double t, const ControlMcOptions& opts) {
  if (opts.ensemble != ControlEnsemble::RandomH)
    throw ValidationError("control_error_mc: a fixed-H run needs the Hamiltonian");
  if (n < 1) throw ValidationError("control_error_mc: n must be >= 1");
  return run_mc(n, nullptr, noise, t, opts);
}

double perturbative_time_limit(double sigma) { return 1.0 / (std::sqrt(2.0) * sigma); }

double control_error_perturbative_spectrum(const Vector& energies, double sigma, double t) {
  const Eigen::Index n = energies.size();
  if (n < 1) throw ValidationError("control_error_perturbative: empty spectrum");
  if (sigma > 0 && t > perturbative_time_limit(sigma)) {
    std::ostringstream os;
    os << "control_error_perturbative: t = " << t << " exceeds the validity bound " << perturbative_time_limit(sigma);
    warn(os.str());
  }
  double pairs = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double d = energies[a] - energies[b];
      double f;
      if (std::abs(d) * t < 1e-6) {
        f = 0.5 * t * t;
      } else {
        const double s = std::sin(0.5 * d * t);
        f = 2.0 * s * s / (d * d);  // (1 - cos x) = 2 sin^2(x / 2)
      }
      pairs += 2.0 * f;  // ordered pairs (a, b) and (b, a)
    }
  const double s2 = sigma * sigma;
  return 2.0 * s2 * t * t + 2.0 * s2 / static_cast<double>(n) * pairs;
}

double control_error_perturbative(const Matrix& H, double sigma, double t) {
  if (H.rows() < 1 || !is_exactly_symmetric(H)) throw ValidationError("control_error_perturbative: H must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("control_error_perturbative: eigensolver failed");
  return control_error_perturbative_spectrum(es.eigenvalues(), sigma, t);
}

}  // namespace sesim
