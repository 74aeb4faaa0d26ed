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

// Decoherence and control-error models restricted to the SES.
//
// Amplitude damping moves weight out of the SES (to the ground state), so an
// SesDensity carries trace <= 1. Dephasing preserves the trace and damps
// coherences only.

#pragma once

#include <cstdint>

#include "sesim/core.hpp"
#include "sesim/random.hpp"

namespace sesim {

class SesDensity {
 public:
  /// Validates Hermiticity (1e-12), trace <= 1 and positivity (1e-10).
  explicit SesDensity(CMatrix rho);
  static SesDensity pure(const SesState& psi);

  const CMatrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  /// Weight remaining in the SES.
  double retained() const { return rho_.trace().real(); }

 private:
  struct Unchecked {};
  SesDensity(CMatrix rho, Unchecked) : rho_(std::move(rho)) {}
  friend SesDensity amplitude_damping(const SesDensity&, double, double);
  friend SesDensity dephasing(const SesDensity&, double, double);
  CMatrix rho_;
};

/// rho -> e^{-t/T1} rho on the SES block.
SesDensity amplitude_damping(const SesDensity& rho, double t, double T1);
/// Off-diagonals times e^{-2t/Tphi}.
SesDensity dephasing(const SesDensity& rho, double t, double Tphi);
/// 1 - <psi|rho|psi>.
double fidelity_error(const SesDensity& rho, const SesState& psi);

/// 1 - e^{-t/T1}, for any SES state.
double relaxation_error(double t, double T1);
/// (1 - e^{-2t/Tphi}) (1 - sum |a_i|^4).
double dephasing_error(const SesState& psi, double t, double Tphi);

/// Applies e^{-iH dt} followed by both channels on every slice of width dt.
SesDensity noisy_evolution(const Matrix& H, const SesDensity& rho, double t, double dt, double T1, double Tphi);

struct ControlNoiseSpec {
  double deltaV = 0.0;  // full width of the uniform element distribution, rad/s

  double sigma() const;
  void validate() const;
};

/// Symmetric V with diagonal and upper triangle uniform on [-dV/2, dV/2].
Matrix sample_perturbation(Eigen::Index n, const ControlNoiseSpec& noise, Rng& rng);

/// 1 - (1/n) sum_i |(i| e^{iHt} e^{-i(H+V)t} |i)|^2.
double control_error_exact(const Matrix& H, const Matrix& V, double t);

enum class ControlEnsemble { FixedH, RandomH };

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t trials = 0;
};

struct ControlMcOptions {
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  ControlEnsemble ensemble = ControlEnsemble::RandomH;
  /// Scale of the random ideal Hamiltonian g_max K (RandomH only).
  double g_max = mhz_to_rad_per_s(50.0);
};

/// Monte Carlo average of control_error_exact. In RandomH mode H supplies
/// only the dimension and each trial draws g_max K afresh. Trial k uses
/// Rng::stream(seed, k).
McEstimate control_error_mc(const Matrix& H, const ControlNoiseSpec& noise, double t, const ControlMcOptions& opts);
McEstimate control_error_mc(Eigen::Index n, const ControlNoiseSpec& noise, double t, const ControlMcOptions& opts);

/// Validity bound 1 / (sqrt(2) sigma).
double perturbative_time_limit(double sigma);

/// 2 s^2 t^2 + (2 s^2 / n) sum_{a != b} (1 - cos(D t)) / D^2 with D = E_a - E_b;
/// near-degenerate pairs (|D| t < 1e-6) contribute t^2 / 2. Warns past the
/// validity bound.
double control_error_perturbative(const Matrix& H, double sigma, double t);
double control_error_perturbative_spectrum(const Vector& energies, double sigma, double t);

}  // namespace sesim
