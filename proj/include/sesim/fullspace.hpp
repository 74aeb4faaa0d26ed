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

// Dense 2^n-dimensional qubit model for small n.
//
//   H = sum_i eps_i c_i^dag c_i + 1/2 sum_{i != j} g_ij sum_{mu nu} J_{mu nu} s^mu_i s^nu_j
//
// with c = |0><1| per qubit. Qubit i is bit (n - 1 - i) of the basis index,
// so the SES state |i) is the index 1 << (n - 1 - i).

#pragma once

#include <cstdint>

#include "sesim/core.hpp"
#include "sesim/protocols.hpp"

namespace sesim {

inline constexpr int kFullSpaceCap = 12;

struct FullSpaceOptions {
  CouplingTensor coupling = CouplingTensor::xx();
  /// Drop every term that changes the excitation number.
  bool rotating_wave = false;
  int cap = kFullSpaceCap;
};

CMatrix build_full_hamiltonian(const Vector& eps, const Matrix& g, const FullSpaceOptions& opts = {});

std::uint64_t ses_basis_index(int n, Eigen::Index i);
/// (i| H |i') for the SES rows of a full Hamiltonian.
CMatrix project_to_ses(const CMatrix& full, int n);
CVector project_to_ses(const CVector& full, int n);
CVector embed_ses(const CVector& ses, int n);
/// Diagonal of sum_i c_i^dag c_i.
Vector excitation_number_diagonal(int n);
double excitation_number(const CVector& full, int n);
/// Total probability in states with exactly k excitations.
double population_with_excitations(const CVector& full, int n, int k);

struct LeakageReport {
  double ses_population = 1.0;
  double leakage = 0.0;  // 1 - ses_population
  double triple_population = 0.0;
};

LeakageReport leakage_run(const Vector& eps, const Matrix& g, double t, Eigen::Index initial,
                          const FullSpaceOptions& opts = {});

struct ProtocolComparison {
  double deviation = 0.0;  // phase-aligned distance of SES results, full space projected
  double leakage = 0.0;
  CVector ses_final;
  CVector full_projected;
};

/// Runs a schedule in the SES and in the full space. Each pulse g0 K becomes
/// eps_i = omega_ref + g0 K_ii and g_ij = g0 K_ij; phase flips become
/// e^{-i pi n_k}.
ProtocolComparison compare_protocol(const PulseSchedule& schedule, double omega_ref, Eigen::Index initial = 0,
                                    const FullSpaceOptions& opts = {});

/// Evolves |initial) for time t under diag(eps) + g in both spaces.
ProtocolComparison compare_static(const Vector& eps, const Matrix& g, double t, Eigen::Index initial,
                                  const FullSpaceOptions& opts = {});

}  // namespace sesim
