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

#include "sesim/core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

#include "sesim/linalg.hpp"

namespace sesim {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  warning_handler() = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

// ---------------------------------------------------------------- SesState

SesState::SesState(CVector amplitudes, double tol) : a_(std::move(amplitudes)) {
  if (a_.size() < 1) throw ValidationError("SesState: dimension must be >= 1");
  if (std::abs(a_.norm() - 1.0) > tol) {
    std::ostringstream os;
    os << "SesState: amplitudes have norm " << a_.norm() << ", expected 1";
    throw ValidationError(os.str());
  }
}

SesState SesState::unchecked(CVector amplitudes) { return SesState(std::move(amplitudes), Unchecked{}); }

SesState SesState::basis(Eigen::Index n, Eigen::Index i) {
  if (n < 1 || i < 0 || i >= n) throw ValidationError("SesState::basis: index out of range");
  CVector a = CVector::Zero(n);
  a[i] = 1.0;
  return SesState(std::move(a), Unchecked{});
}

SesState SesState::uniform(Eigen::Index n) {
  if (n < 1) throw ValidationError("SesState::uniform: dimension must be >= 1");
  return SesState(CVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))), Unchecked{});
}

double overlap_probability(const SesState& a, const SesState& b) {
  if (a.dim() != b.dim()) throw ValidationError("overlap_probability: dimension mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

// ---------------------------------------------------------- SesHamiltonian

SesHamiltonian::SesHamiltonian(Matrix m) : m_(std::move(m)) {
  if (m_.rows() < 1 || !is_square(m_)) throw ValidationError("SesHamiltonian: matrix must be square, n >= 1");
  if (!is_exactly_symmetric(m_)) throw ValidationError("SesHamiltonian: matrix is not symmetric");
  if (!m_.allFinite()) throw ValidationError("SesHamiltonian: non-finite entry");
}

// ------------------------------------------------ TimeDependentHamiltonian

TimeDependentHamiltonian::TimeDependentHamiltonian(std::vector<double> times, std::vector<Matrix> samples)
    : times_(std::move(times)), samples_(std::move(samples)) {
  if (times_.size() < 2 || times_.size() != samples_.size())
    throw ValidationError("TimeDependentHamiltonian: need >= 2 samples with one time per sample");
  const Eigen::Index n = samples_.front().rows();
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (samples_[k].rows() != n || samples_[k].cols() != n)
      throw ValidationError("TimeDependentHamiltonian: samples differ in dimension");
    if (!is_exactly_symmetric(samples_[k]))
      throw ValidationError("TimeDependentHamiltonian: sample " + std::to_string(k) + " is not symmetric");
    if (k > 0 && !(times_[k] > times_[k - 1]))
      throw ValidationError("TimeDependentHamiltonian: times must be strictly increasing");
  }
}

TimeDependentHamiltonian TimeDependentHamiltonian::constant(const Matrix& h, double t0, double t1) {
  return TimeDependentHamiltonian({t0, t1}, {h, h});
}

std::pair<std::size_t, double> TimeDependentHamiltonian::locate(double t) const {
  const double span = times_.back() - times_.front();
  const double slack = 1e-12 * span;
  if (t < times_.front() - slack || t > times_.back() + slack) {
    std::ostringstream os;
    os << "TimeDependentHamiltonian: t = " << t << " outside [" << times_.front() << ", " << times_.back() << "]";
    throw ValidationError(os.str());
  }
  t = std::clamp(t, times_.front(), times_.back());
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = static_cast<std::size_t>(std::distance(times_.begin(), it));
  k = k == 0 ? 0 : k - 1;
  if (k >= times_.size() - 1) k = times_.size() - 2;
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return {k, w};
}

Matrix TimeDependentHamiltonian::at(double t) const {
  const auto [k, w] = locate(t);
  return (1.0 - w) * samples_[k] + w * samples_[k + 1];
}

void TimeDependentHamiltonian::apply(double t, const CVector& v, CVector& out) const {
  const auto [k, w] = locate(t);
  if (w == 0.0) {
    out.noalias() = samples_[k] * v;
  } else if (w == 1.0) {
    out.noalias() = samples_[k + 1] * v;
  } else {
    out.noalias() = (1.0 - w) * (samples_[k] * v);
    out.noalias() += w * (samples_[k + 1] * v);
  }
}

// ----------------------------------------------------------- StandardForm

Matrix StandardForm::reconstruct() const {
  return g0 * K + omega_ref * Matrix::Identity(K.rows(), K.cols());
}

StandardForm standard_form(const SesHamiltonian& h, std::optional<double> omega_ref) {
  const Eigen::Index n = h.dim();
  StandardForm sf;
  sf.omega_ref = omega_ref.value_or(h.matrix().diagonal().mean());
  Matrix shifted = h.matrix();
  shifted.diagonal().array() -= sf.omega_ref;
  const double scale = max_abs_entry(shifted);
  if (scale == 0.0) {
    sf.g0 = 1.0;
    sf.K = Matrix::Zero(n, n);
  } else {
    sf.g0 = scale;
    sf.K = shifted / scale;
  }
  return sf;
}

void HardwareLimits::validate() const {
  if (!(g_max > 0 && T1 > 0 && Tphi > 0 && t_meas > 0))
    throw ValidationError("HardwareLimits: all limits must be strictly positive");
}

// -------------------------------------------------------- Hamiltonians

namespace {

void check_eps_g(const Vector& eps, const Matrix& g) {
  const Eigen::Index n = eps.size();
  if (n < 1) throw ValidationError("need at least one qubit frequency");
  if (g.rows() != n || g.cols() != n) {
    std::ostringstream os;
    os << "coupling matrix is " << g.rows() << "x" << g.cols() << " but " << n << " frequencies were given";
    throw ValidationError(os.str());
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (g(i, i) != 0.0) throw ValidationError("coupling matrix has nonzero diagonal at index " + std::to_string(i));
  if (!is_exactly_symmetric(g)) throw ValidationError("coupling matrix is not symmetric");
}

}  // namespace

SesHamiltonian build_ses_hamiltonian(const Vector& eps, const Matrix& g) {
  check_eps_g(eps, g);
  Matrix h = g;
  h.diagonal() = eps;
  return SesHamiltonian(std::move(h));
}

SesHamiltonian build_ses_hamiltonian_general(const Vector& eps, const Matrix& g, const CouplingTensor& coupling) {
  check_eps_g(eps, g);
  const auto& J = coupling.J;
  if (J(0, 1) != J(1, 0))
    throw ValidationError("coupling tensor has J_xy != J_yx; the SES Hamiltonian would be complex");
  const double exchange = J(0, 0) + J(1, 1);
  if (exchange == 0.0) warn("coupling tensor has J_xx + J_yy = 0: no exchange coupling within the SES");
  Matrix h = exchange * g;
  const Vector row_sums = g.rowwise().sum();
  h.diagonal() = eps - 2.0 * J(2, 2) * row_sums;
  return SesHamiltonian(std::move(h));
}

// --------------------------------------------------------- QubitBasisMap

QubitBasisMap::QubitBasisMap(int qubits) : q_(qubits) {
  if (q_ < 1 || q_ > 62) throw ValidationError("QubitBasisMap: qubit count must be in [1, 62]");
}

std::uint64_t QubitBasisMap::ses_index(const std::string& bits) const {
  if (static_cast<int>(bits.size()) != q_) throw ValidationError("QubitBasisMap: wrong bit-string length");
  std::uint64_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("QubitBasisMap: bit string must contain only 0 and 1");
    idx = (idx << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return idx;
}

std::string QubitBasisMap::bits(std::uint64_t ses_index) const {
  if (ses_index >= dim()) throw ValidationError("QubitBasisMap: SES index out of range");
  std::string s(static_cast<std::size_t>(q_), '0');
  for (int k = 0; k < q_; ++k)
    if ((ses_index >> (q_ - 1 - k)) & 1U) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

// --------------------------------------------------------------- Coupler

void CouplerCircuitParams::validate() const {
  if (!(Lj + L0 > 0)) throw ValidationError("coupler: Lj + L0 must be positive");
  if (!(Lc + 2.0 * L0prime > 0)) throw ValidationError("coupler: Lc + 2 L0' must be positive");
  if (!(C > 0)) throw ValidationError("coupler: C must be positive");
}

CouplerStrength coupler_strength(const CouplerCircuitParams& p) {
  p.validate();
  CouplerStrength out;
  const double wire = p.Lc + 2.0 * p.L0prime;
  out.M = p.m * p.m / wire;
  out.Lq = p.Lj + p.L0 - out.M;
  if (!(out.Lq > 0)) throw ValidationError("coupler: effective inductance Lq = Lj + L0 - M is not positive");
  out.epsilon = 1.0 / std::sqrt(out.Lq * p.C);
  out.g = -p.m * p.m * out.epsilon / (2.0 * (p.Lj + p.L0) * wire);
  return out;
}

}  // namespace sesim
