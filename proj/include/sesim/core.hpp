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

// Core single-excitation-subspace (SES) types.
//
// An n-qubit processor restricted to states with exactly one excited qubit
// is an n-level system. Basis state |i) has qubit i excited. The processor
// Hamiltonian projected onto this subspace is a real symmetric n x n matrix
// whose diagonal holds qubit frequencies and whose off-diagonal holds the
// qubit-qubit couplings. All energies are angular frequencies (rad/s) and
// all indices are 0-based in the C++ API.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sesim/types.hpp"

namespace sesim {

/// Pure SES state: n complex amplitudes with unit norm.
class SesState {
 public:
  /// Validates ||a|| = 1 to `tol`.
  explicit SesState(CVector amplitudes, double tol = 1e-12);

  /// Wraps amplitudes produced by a propagator. The norm is not checked and
  /// never renormalized; norm_deviation() reports the drift.
  static SesState unchecked(CVector amplitudes);
  static SesState basis(Eigen::Index n, Eigen::Index i);
  /// (|1) + ... + |n)) / sqrt(n).
  static SesState uniform(Eigen::Index n);

  const CVector& amplitudes() const { return a_; }
  Eigen::Index dim() const { return a_.size(); }
  Vector probabilities() const { return a_.cwiseAbs2(); }
  double norm_deviation() const { return std::abs(a_.norm() - 1.0); }
  Complex operator[](Eigen::Index i) const { return a_[i]; }

 private:
  struct Unchecked {};
  SesState(CVector amplitudes, Unchecked) : a_(std::move(amplitudes)) {}
  CVector a_;
};

/// |<a|b>|^2.
double overlap_probability(const SesState& a, const SesState& b);

/// Real symmetric SES Hamiltonian in rad/s. Symmetry is exact.
class SesHamiltonian {
 public:
  explicit SesHamiltonian(Matrix m);
  static SesHamiltonian zero(Eigen::Index n) { return SesHamiltonian(Matrix::Zero(n, n)); }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Time-sampled Hamiltonian with piecewise-linear interpolation per entry.
class TimeDependentHamiltonian {
 public:
  /// Requires >= 2 samples, strictly increasing times and exactly symmetric
  /// matrices of a common dimension.
  TimeDependentHamiltonian(std::vector<double> times, std::vector<Matrix> samples);

  static TimeDependentHamiltonian constant(const Matrix& h, double t0, double t1);

  Eigen::Index dim() const { return samples_.front().rows(); }
  std::size_t size() const { return times_.size(); }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Matrix>& samples() const { return samples_; }

  /// Interpolated matrix; throws ValidationError outside [t_begin, t_end].
  Matrix at(double t) const;
  /// out = H(t) * v without forming H(t). Counts as one matrix-vector product.
  void apply(double t, const CVector& v, CVector& out) const;

 private:
  // Segment k covers [times_[k], times_[k+1]]; w is the weight of sample k+1.
  std::pair<std::size_t, double> locate(double t) const;

  std::vector<double> times_;
  std::vector<Matrix> samples_;
};

/// H - omega_ref I = g0 K with max |K_ij| = 1 (or K = 0, g0 = 1).
struct StandardForm {
  double g0 = 1.0;
  Matrix K;
  double omega_ref = 0.0;

  Matrix reconstruct() const;
};

/// Reference frequency: nullopt selects the mean diagonal.
StandardForm standard_form(const SesHamiltonian& h, std::optional<double> omega_ref = std::nullopt);

struct HardwareLimits {
  double g_max = mhz_to_rad_per_s(50.0);
  double T1 = 40e-6;
  double Tphi = 27e-6;
  double t_meas = 100e-9;

  void validate() const;
};

/// Dimensionless coupling tensor J_{mu nu}, mu, nu in {x, y, z}.
struct CouplingTensor {
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();

  static CouplingTensor xx() {
    CouplingTensor t;
    t.J(0, 0) = 1.0;
    return t;
  }
  double xx_part() const { return J(0, 0); }
  double yy_part() const { return J(1, 1); }
  double zz_part() const { return J(2, 2); }
};

/// diag(eps) + g. Rejects mismatched sizes, asymmetric g and nonzero diag(g).
SesHamiltonian build_ses_hamiltonian(const Vector& eps, const Matrix& g);

/// Projection of the general-coupling model onto the SES, dropping the
/// state-independent shift (sum_{j<j'} g_jj') J_zz. Requires J_xy = J_yx;
/// warns when J_xx + J_yy = 0.
SesHamiltonian build_ses_hamiltonian_general(const Vector& eps, const Matrix& g,
                                             const CouplingTensor& coupling);

/// Bijection between q-qubit computational basis states and SES indices.
/// Bit string b_1 b_2 ... b_q (b_1 most significant) maps to SES index
/// sum_k b_k 2^{q-k}, so |00...0> -> 0 and |11...1> -> 2^q - 1.
class QubitBasisMap {
 public:
  explicit QubitBasisMap(int qubits);

  int qubits() const { return q_; }
  std::uint64_t dim() const { return std::uint64_t{1} << q_; }
  std::uint64_t ses_index(const std::string& bits) const;
  std::string bits(std::uint64_t ses_index) const;

 private:
  int q_;
};

/// Inductances in H, capacitance in F.
struct CouplerCircuitParams {
  double m = 0.0;
  double L0 = 0.0;
  double L0prime = 0.0;
  double Lj = 0.0;
  double Lc = 0.0;
  double C = 0.0;

  void validate() const;
};

struct CouplerStrength {
  double g = 0.0;        // rad/s
  double M = 0.0;        // effective mutual inductance, H
  double Lq = 0.0;       // effective qubit inductance, H
  double epsilon = 0.0;  // qubit frequency, rad/s
};

/// Weak-coupling harmonic estimate of the transverse coupling produced by
/// an inductively coupled tunable coupler wire.
CouplerStrength coupler_strength(const CouplerCircuitParams& p);

}  // namespace sesim
