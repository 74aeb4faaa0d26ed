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

#include "sesim/fullspace.hpp"

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "sesim/linalg.hpp"

namespace sesim {

namespace {

// Pauli mu in {x, y, z} on a single bit: s^mu |b> = phase |b'>.
struct PauliAction {
  int flip;
  Complex phase;
};

PauliAction pauli(int mu, int bit) {
  switch (mu) {
    case 0: return {1, 1.0};
    case 1: return {1, bit == 0 ? Complex(0, 1) : Complex(0, -1)};
    default: return {0, bit == 0 ? 1.0 : -1.0};
  }
}

int checked_qubits(const Vector& eps, const Matrix& g, const FullSpaceOptions& opts) {
  const Eigen::Index n = eps.size();
  if (n < 1) throw ValidationError("full space: need at least one qubit");
  if (n > opts.cap) throw ValidationError("full space: n = " + std::to_string(n) + " exceeds the cap of " +
                                          std::to_string(opts.cap) + " qubits");
  if (g.rows() != n || g.cols() != n || !is_exactly_symmetric(g))
    throw ValidationError("full space: g must be symmetric n x n");
  return static_cast<int>(n);
}

CVector evolve(const CMatrix& h, double t, const CVector& psi) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("full space: eigensolver did not converge");
  const CMatrix& v = es.eigenvectors();
  CVector c = v.adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(-kI * (es.eigenvalues()[k] * t));
  return v * c;
}

}  // namespace

std::uint64_t ses_basis_index(int n, Eigen::Index i) {
  if (i < 0 || i >= n) throw ValidationError("ses_basis_index: index out of range");
  return std::uint64_t{1} << (n - 1 - i);
}

CMatrix build_full_hamiltonian(const Vector& eps, const Matrix& g, const FullSpaceOptions& opts) {
  const int n = checked_qubits(eps, g, opts);
  const auto& J = opts.coupling.J;
  const std::uint64_t dim = std::uint64_t{1} << n;
  CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  auto bit_of = [n](std::uint64_t s, int q) { return static_cast<int>((s >> (n - 1 - q)) & 1U); };
  for (std::uint64_t s = 0; s < dim; ++s) {
    const auto col = static_cast<Eigen::Index>(s);
    for (int q = 0; q < n; ++q)
      if (bit_of(s, q)) h(col, col) += eps[q];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double gij = g(i, j);
        if (gij == 0.0) continue;
        for (int mu = 0; mu < 3; ++mu)
          for (int nu = 0; nu < 3; ++nu) {
            // Both orderings of the pair contribute; symmetrize J over them.
            const double jm = 0.5 * (J(mu, nu) + J(nu, mu));
            if (jm == 0.0) continue;
            const PauliAction a = pauli(nu, bit_of(s, j));
            std::uint64_t r = s;
            if (a.flip) r ^= std::uint64_t{1} << (n - 1 - j);
            const PauliAction b = pauli(mu, bit_of(r, i));
            if (b.flip) r ^= std::uint64_t{1} << (n - 1 - i);
            h(static_cast<Eigen::Index>(r), col) += gij * jm * a.phase * b.phase;
          }
      }
  }
  if (opts.rotating_wave) {
    for (std::uint64_t r = 0; r < dim; ++r)
      for (std::uint64_t s = 0; s < dim; ++s)
        if (std::popcount(r) != std::popcount(s)) h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = 0.0;
  }
  return h;
}

CMatrix project_to_ses(const CMatrix& full, int n) {
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = full(static_cast<Eigen::Index>(ses_basis_index(n, i)), static_cast<Eigen::Index>(ses_basis_index(n, j)));
  return out;
}

CVector project_to_ses(const CVector& full, int n) {
  CVector out(n);
  for (int i = 0; i < n; ++i) out[i] = full[static_cast<Eigen::Index>(ses_basis_index(n, i))];
  return out;
}

CVector embed_ses(const CVector& ses, int n) {
  if (ses.size() != n) throw ValidationError("embed_ses: dimension mismatch");
  CVector out = CVector::Zero(Eigen::Index{1} << n);
  for (int i = 0; i < n; ++i) out[static_cast<Eigen::Index>(ses_basis_index(n, i))] = ses[i];
  return out;
}

Vector excitation_number_diagonal(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Vector d(dim);
  for (Eigen::Index s = 0; s < dim; ++s) d[s] = std::popcount(static_cast<std::uint64_t>(s));
  return d;
}

double excitation_number(const CVector& full, int n) {
  return full.cwiseAbs2().dot(excitation_number_diagonal(n));
}

double population_with_excitations(const CVector& full, int n, int k) {
  double p = 0.0;
  for (Eigen::Index s = 0; s < full.size(); ++s)
    if (std::popcount(static_cast<std::uint64_t>(s)) == k) p += std::norm(full[s]);
  (void)n;
  return p;
}

LeakageReport leakage_run(const Vector& eps, const Matrix& g, double t, Eigen::Index initial,
                          const FullSpaceOptions& opts) {
  const int n = checked_qubits(eps, g, opts);
  const CMatrix h = build_full_hamiltonian(eps, g, opts);
  CVector psi = CVector::Zero(h.rows());
  psi[static_cast<Eigen::Index>(ses_basis_index(n, initial))] = 1.0;
  const CVector out = evolve(h, t, psi);
  LeakageReport rep;
  rep.ses_population = population_with_excitations(out, n, 1);
  rep.leakage = std::max(0.0, 1.0 - rep.ses_population);
  rep.triple_population = population_with_excitations(out, n, 3);
  return rep;
}

ProtocolComparison compare_protocol(const PulseSchedule& schedule, double omega_ref, Eigen::Index initial,
                                    const FullSpaceOptions& opts) {
  const auto n = static_cast<int>(schedule.dim());
  if (n > opts.cap) throw ValidationError("compare_protocol: dimension exceeds the full-space cap");
  ProtocolComparison cmp;
  cmp.ses_final = execute(schedule, SesState::basis(n, initial)).amplitudes();
  CVector full = CVector::Zero(Eigen::Index{1} << n);
  full[static_cast<Eigen::Index>(ses_basis_index(n, initial))] = 1.0;
  for (const auto& step : schedule.steps()) {
    if (const auto* p = std::get_if<PulseStep>(&step)) {
      const Matrix h = p->hamiltonian();
      const Vector eps = h.diagonal().array() + omega_ref;
      Matrix g = h;
      g.diagonal().setZero();
      full = evolve(build_full_hamiltonian(eps, g, opts), p->duration, full);
    } else {
      const int k = static_cast<int>(std::get<PhaseFlip>(step).index);
      for (Eigen::Index s = 0; s < full.size(); ++s)
        if ((static_cast<std::uint64_t>(s) >> (n - 1 - k)) & 1U) full[s] = -full[s];
    }
  }
  cmp.full_projected = project_to_ses(full, n);
  cmp.leakage = std::max(0.0, 1.0 - cmp.full_projected.squaredNorm());
  cmp.deviation = phase_aligned_distance(cmp.full_projected, cmp.ses_final);
  return cmp;
}

ProtocolComparison compare_static(const Vector& eps, const Matrix& g, double t, Eigen::Index initial,
                                  const FullSpaceOptions& opts) {
  const int n = checked_qubits(eps, g, opts);
  ProtocolComparison cmp;
  const SesHamiltonian hs = build_ses_hamiltonian_general(eps, g, opts.coupling);
  PropagationStats st;
  cmp.ses_final = kernels::diagonalization(hs.matrix(), t, SesState::basis(n, initial).amplitudes(), st);
  CVector psi = CVector::Zero(Eigen::Index{1} << n);
  psi[static_cast<Eigen::Index>(ses_basis_index(n, initial))] = 1.0;
  cmp.full_projected = project_to_ses(evolve(build_full_hamiltonian(eps, g, opts), t, psi), n);
  cmp.leakage = std::max(0.0, 1.0 - cmp.full_projected.squaredNorm());
  cmp.deviation = phase_aligned_distance(cmp.full_projected, cmp.ses_final);
  return cmp;
}

}  // namespace sesim
