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

// Solvers for i da/dt = H a with real symmetric H.
//
// Four kernels handle constant Hamiltonians (eigendecomposition, Pade
// scaling-and-squaring, Lanczos-Krylov, embedded Runge-Kutta). Time-dependent
// Hamiltonians are integrated with Runge-Kutta or with time slicing, which
// freezes H at each slice midpoint and delegates to a constant kernel.
// Kernels run single-threaded and never renormalize the state.

#pragma once

#include <cstdint>
#include <variant>

#include "sesim/core.hpp"

namespace sesim {

struct Diagonalization {};
struct PadeExpm {};

struct Krylov {
  int dimension = 30;
  double tol = 1e-10;  // error bound on the whole propagation, in state norm
};

enum class RkScheme {
  BogackiShampine32,
  DormandPrince54,
};

struct RungeKutta {
  double rtol = 1e-9;
  double atol = 1e-12;
  RkScheme scheme = RkScheme::DormandPrince54;
};

using SliceKernel = std::variant<Diagonalization, PadeExpm, Krylov>;

struct TimeSliced {
  double dt = 0.1e-9;
  SliceKernel inner = Diagonalization{};
};

using PropagatorKind = std::variant<Diagonalization, PadeExpm, Krylov, RungeKutta, TimeSliced>;

std::string kind_name(const PropagatorKind& kind);
void validate(const PropagatorKind& kind);

struct PropagationStats {
  std::uint64_t matvecs = 0;
  std::uint64_t steps = 0;
  std::uint64_t rejected_steps = 0;
  double wall_seconds = 0.0;
};

struct PropagationResult {
  SesState final_state;
  PropagationStats stats;
};

/// e^{-iHt} psi for t >= 0. TimeSliced is rejected.
PropagationResult propagate_const(const SesHamiltonian& h, double t, const SesState& psi,
                                  const PropagatorKind& kind);

/// Time-ordered evolution from t0 to t1 (t0 <= t1, both inside the sampled
/// range). Accepts RungeKutta and TimeSliced.
PropagationResult propagate_td(const TimeDependentHamiltonian& h, double t0, double t1, const SesState& psi,
                               const PropagatorKind& kind);

/// e^{-iA} by degree-13 Pade approximation with scaling and squaring
/// (lower degrees are used when ||A||_1 is small).
CMatrix expm_pade(const Matrix& a);

/// e^{-iHt} = V e^{-iDt} V^T from the symmetric eigendecomposition.
CMatrix unitary_from_eigen(const Matrix& h, double t);

namespace kernels {

// Raw kernels on plain matrices. Any real t is accepted, including t < 0.
CVector diagonalization(const Matrix& h, double t, const CVector& psi, PropagationStats& stats);
CVector pade(const Matrix& h, double t, const CVector& psi, PropagationStats& stats);
CVector krylov(const Matrix& h, double t, const CVector& psi, const Krylov& opts, PropagationStats& stats);
CVector runge_kutta(const Matrix& h, double t, const CVector& psi, const RungeKutta& opts,
                    PropagationStats& stats);
CVector evolve_const(const Matrix& h, double t, const CVector& psi, const PropagatorKind& kind,
                     PropagationStats& stats);

}  // namespace kernels

}  // namespace sesim
